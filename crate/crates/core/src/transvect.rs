//! The maps `δ_{c*,f}: x ↦ x + ⟨c*, x⟩ f`, the groups `Δ(V,f)` and their
//! intersections with the orthogonal and weak orthogonal groups.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::groups::GroupSet;
use crate::matrix::{all_vectors, annihilator, check_vector, is_zero_vector, pairing, span_elements, Mat, Vector};
use crate::quadform::{enumerate_forms, QForm};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaKind {
    Identity,
    Transvection,
    Dilatation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMap {
    pub cstar: Vector,
    pub f: Vector,
    pub matrix: Mat,
    pub kind: DeltaKind,
}

/// `δ_{c*,f} = I + f c*ᵀ`; requires `⟨c*, f⟩ ≠ −1`.
pub fn delta_make(cstar: &[Scalar], f: &[Scalar]) -> Result<DeltaMap> {
    let field = f.first().or(cstar.first()).map(Scalar::field).unwrap_or(FieldSpec::Prime(2));
    let n = f.len();
    check_vector(field, n, cstar)?;
    check_vector(field, n, f)?;
    let s = pairing(cstar, f);
    if s.is_minus_one() {
        return Err(Error::NotInvertible);
    }
    let mut matrix = Mat::identity(field, n);
    for (i, fi) in f.iter().enumerate() {
        for (j, cj) in cstar.iter().enumerate() {
            let v = matrix.get(i, j) + &(fi * cj);
            matrix.set(i, j, v);
        }
    }
    let kind = if matrix.is_identity() {
        DeltaKind::Identity
    } else if s.is_zero() {
        DeltaKind::Transvection
    } else {
        DeltaKind::Dilatation
    };
    Ok(DeltaMap { cstar: cstar.to_vec(), f: f.to_vec(), matrix, kind })
}

fn require_direction(field: FieldSpec, n: usize, f: &[Scalar]) -> Result<()> {
    check_vector(field, n, f)?;
    if is_zero_vector(f) {
        return Err(Error::ZeroDirection);
    }
    Ok(())
}

fn deltas(field: FieldSpec, n: usize, f: &[Scalar]) -> Result<Vec<Mat>> {
    require_direction(field, n, f)?;
    let mut out = Vec::new();
    for a in all_vectors(field, n)? {
        match delta_make(&a, f) {
            Ok(d) => out.push(d.matrix),
            Err(Error::NotInvertible) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// `Δ(V,f) = {δ_{a*,f} : ⟨a*, f⟩ ≠ −1}`.
pub fn delta_group(field: FieldSpec, n: usize, f: &[Scalar]) -> Result<GroupSet> {
    GroupSet::from_matrices(field, n, deltas(field, n, f)?)
}

/// `(Δ(V,f) ∩ O(V,Q), Δ(V,f) ∩ O′(V,Q))`.
pub fn delta_orth(q_form: &QForm, f: &[Scalar]) -> Result<(GroupSet, GroupSet)> {
    let (field, n) = (q_form.field(), q_form.dim());
    let radical = q_form.polar().radical;
    let mut full = Vec::new();
    let mut weak = Vec::new();
    for m in deltas(field, n, f)? {
        if q_form.is_isometry(&m)? {
            if radical.iter().all(|r| &m.mul_vec(r).expect("shape") == r) {
                weak.push(m.clone());
            }
            full.push(m);
        }
    }
    Ok((GroupSet::from_matrices(field, n, full)?, GroupSet::from_matrices(field, n, weak)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionCase {
    /// `f ∉ V^⊥`, `Q(f) ≠ 0`
    A,
    /// `f ∉ V^⊥`, `Q(f) = 0`
    B,
    /// `f ∈ V^⊥`, `Q(f) ≠ 0`
    C,
    /// `f ∈ V^⊥`, `Q(f) = 0`
    D,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectionClass {
    pub case: DirectionCase,
    /// Predicted `|ΔO|` and `|ΔO′|`.
    pub sizes: (u128, u128),
}

pub fn classify_direction(q_form: &QForm, f: &[Scalar]) -> Result<DirectionClass> {
    let (field, n) = (q_form.field(), q_form.dim());
    require_direction(field, n, f)?;
    let polar = q_form.polar();
    let in_radical = polar.in_radical(f)?;
    let isotropic = q_form.eval(f)?.is_zero();
    let class = match (in_radical, isotropic) {
        (false, false) => DirectionClass { case: DirectionCase::A, sizes: (2, 2) },
        (false, true) => DirectionClass { case: DirectionCase::B, sizes: (1, 1) },
        (true, false) => DirectionClass { case: DirectionCase::C, sizes: (1, 1) },
        (true, true) => {
            let q = field.require_enumerable()? as u128;
            let k = polar.radical.len() as u32;
            let n = n as u32;
            DirectionClass { case: DirectionCase::D, sizes: ((q - 1) * q.pow(n - 1), q.pow(n - k)) }
        }
    };
    Ok(class)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransCondition {
    /// `Q(f) = 0` and `V^⊥ = Ff`
    IsotropicRadicalLine,
    /// `dim V = 1`
    DimOne,
    /// `dim V = 2`, `Q(f) ≠ 0`, `V^⊥ = 0`, `|F| = 2`
    BinaryPlane,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnihilatorCheck {
    /// `{δ_{a*,f} : a* ∈ {f}°} ⊆ O′(V,Q)`, by brute force.
    pub contained: bool,
    /// The first listed condition that holds, if any.
    pub condition: Option<TransCondition>,
}

impl AnnihilatorCheck {
    pub fn agrees(&self) -> bool {
        self.contained == self.condition.is_some()
    }
}

pub fn annihilator_transvections_in_weak(q_form: &QForm, f: &[Scalar]) -> Result<AnnihilatorCheck> {
    let (field, n) = (q_form.field(), q_form.dim());
    require_direction(field, n, f)?;
    let ann = annihilator(field, n, &[f.to_vec()])?;
    let mut contained = true;
    for a in span_elements(field, n, &ann)? {
        if !q_form.is_weak_isometry(&delta_make(&a, f)?.matrix)? {
            contained = false;
            break;
        }
    }
    let polar = q_form.polar();
    let isotropic = q_form.eval(f)?.is_zero();
    let condition = if isotropic && polar.radical.len() == 1 && polar.in_radical(f)? {
        Some(TransCondition::IsotropicRadicalLine)
    } else if n == 1 {
        Some(TransCondition::DimOne)
    } else if n == 2 && !isotropic && polar.radical.is_empty() && field.order() == Some(2) {
        Some(TransCondition::BinaryPlane)
    } else {
        None
    };
    Ok(AnnihilatorCheck { contained, condition })
}

/// True iff no `s·δ_{a*,f}` with `s ∉ {0, 1}` and non-zero `a* ∈ {f}°` is a
/// weak isometry.
pub fn scaled_transvection_never_weak(q_form: &QForm, f: &[Scalar]) -> Result<bool> {
    let (field, n) = (q_form.field(), q_form.dim());
    require_direction(field, n, f)?;
    let ann = annihilator(field, n, &[f.to_vec()])?;
    let scalars: Vec<Scalar> = field.elements()?.into_iter().filter(|s| !s.is_zero() && !s.is_one()).collect();
    for a in span_elements(field, n, &ann)? {
        if is_zero_vector(&a) {
            continue;
        }
        let delta = delta_make(&a, f)?.matrix;
        for s in &scalars {
            if q_form.is_weak_isometry(&delta.scale(s))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Runs the direction-classification, annihilator and scaled-transvection
/// checks on every form of `Fⁿ` and every non-zero direction.
pub fn verify_lemmas(field: FieldSpec, n: usize) -> Result<Report> {
    field.require_enumerable()?;
    let forms: Vec<QForm> = enumerate_forms(field, n)?.collect();
    let directions: Vec<Vector> = all_vectors(field, n)?.into_iter().filter(|f| !is_zero_vector(f)).collect();
    let scaled = field.order().is_some_and(|q| q >= 3);
    let parts: Vec<Result<Report>> = forms
        .par_iter()
        .map(|q_form| {
            let mut r = Report::default();
            for f in &directions {
                let fv = render_vector(f);
                let class = classify_direction(q_form, f)?;
                let (full, weak) = delta_orth(q_form, f)?;
                let actual = (full.len() as u128, weak.len() as u128);
                r.check(actual == class.sizes, || {
                    format!(
                        "direction sizes: Q = {q_form}, f = {fv}: case {:?} predicts {:?}, found {actual:?}",
                        class.case, class.sizes
                    )
                });
                let ann = annihilator_transvections_in_weak(q_form, f)?;
                r.check(ann.agrees(), || {
                    format!(
                        "annihilator transvections: Q = {q_form}, f = {fv}: contained = {}, condition = {:?}",
                        ann.contained, ann.condition
                    )
                });
                if scaled {
                    let ok = scaled_transvection_never_weak(q_form, f)?;
                    r.check(ok, || format!("scaled transvection is a weak isometry: Q = {q_form}, f = {fv}"));
                }
            }
            Ok(r)
        })
        .collect();
    let mut report = Report::new(format!("lemmas over {field}, dim {n}"));
    for p in parts {
        report.merge(p?);
    }
    report.note(format!("{} forms x {} directions", forms.len(), directions.len()));
    Ok(report)
}

pub(crate) fn render_vector(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(","))
}
