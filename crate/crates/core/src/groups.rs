//! Finite matrix groups as canonical sets: GL, orthogonal and weak orthogonal
//! groups, generated closures and the reflection-generation check.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::{same_field, Mat};
use crate::packed::{self, FormTables, Space};
use crate::quadform::QForm;

/// Default cap on `q^(n²)` for matrix enumerations. Covers `q = 2, n ≤ 4`,
/// `q = 3, n ≤ 3` and `q = 4..7, n ≤ 2`.
pub const DEFAULT_BUDGET: u64 = 65_536;

/// No budget override may go beyond this.
pub const HARD_CEILING: u64 = 1 << 24;

/// Limit on the size of matrix spaces an enumeration may search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    limit: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { limit: DEFAULT_BUDGET }
    }
}

impl Budget {
    /// A budget of `limit` candidates, clamped to [`HARD_CEILING`].
    pub fn new(limit: u64) -> Self {
        Budget { limit: limit.min(HARD_CEILING) }
    }

    pub fn limit(self) -> u64 {
        self.limit
    }

    /// Fails unless all `n×n` matrices over `field` fit in the budget.
    pub fn check_matrices(self, field: FieldSpec, n: usize) -> Result<usize> {
        let q = field.require_enumerable()?;
        let required = (q as u128).checked_pow((n * n) as u32).unwrap_or(u128::MAX);
        if required > self.limit as u128 {
            return Err(Error::BudgetExceeded { required, budget: self.limit });
        }
        Ok(q)
    }

    fn check_count(self, count: usize) -> Result<()> {
        if count as u64 > self.limit {
            return Err(Error::BudgetExceeded { required: count as u128, budget: self.limit });
        }
        Ok(())
    }
}

/// `|GL_n(F_q)| = Π (qⁿ − qⁱ)`.
pub fn gl_order(q: u64, n: u32) -> u128 {
    let qn = (q as u128).pow(n);
    (0..n).map(|i| qn - (q as u128).pow(i)).product()
}

/// A set of invertible `n×n` matrices, stored as the sorted, duplicate-free
/// list of their canonical encodings (see [`Mat::encode`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSet {
    field: FieldSpec,
    n: usize,
    elems: Vec<Vec<u8>>,
}

impl GroupSet {
    pub fn from_matrices(field: FieldSpec, n: usize, mats: impl IntoIterator<Item = Mat>) -> Result<Self> {
        let mut elems = Vec::new();
        for m in mats {
            same_field(field, m.field())?;
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch { expected: n, got: m.rows().max(m.cols()) });
            }
            elems.push(m.encode());
        }
        Ok(GroupSet::from_encoded(field, n, elems))
    }

    pub(crate) fn from_encoded(field: FieldSpec, n: usize, mut elems: Vec<Vec<u8>>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        GroupSet { field, n, elems }
    }

    pub fn trivial(field: FieldSpec, n: usize) -> Self {
        GroupSet { field, n, elems: vec![Mat::identity(field, n).encode()] }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn encoded(&self) -> &[Vec<u8>] {
        &self.elems
    }

    pub fn contains(&self, m: &Mat) -> bool {
        m.field() == self.field
            && m.rows() == self.n
            && m.cols() == self.n
            && self.elems.binary_search(&m.encode()).is_ok()
    }

    pub fn matrices(&self) -> Vec<Mat> {
        self.elems.iter().map(|e| Mat::decode(self.field, self.n, self.n, e).expect("valid encoding")).collect()
    }

    /// Checks the group axioms literally: identity present, closed under
    /// products and inverses.
    pub fn is_group(&self) -> bool {
        if !self.contains(&Mat::identity(self.field, self.n)) {
            return false;
        }
        let mats = self.matrices();
        for a in &mats {
            match a.invert() {
                Ok(inv) if self.contains(&inv) => {}
                _ => return false,
            }
            for b in &mats {
                if !self.contains(&a.mul(b).expect("square")) {
                    return false;
                }
            }
        }
        true
    }

    fn check_compatible(&self, other: &GroupSet) -> Result<()> {
        same_field(self.field, other.field)?;
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(())
    }
}

pub fn group_equal(a: &GroupSet, b: &GroupSet) -> Result<bool> {
    a.check_compatible(b)?;
    Ok(a.elems == b.elems)
}

/// Whether `a ⊆ b`.
pub fn is_subgroup(a: &GroupSet, b: &GroupSet) -> Result<bool> {
    a.check_compatible(b)?;
    Ok(a.elems.len() <= b.elems.len() && a.elems.iter().all(|e| b.elems.binary_search(e).is_ok()))
}

pub fn enumerate_gl(field: FieldSpec, n: usize, budget: Budget) -> Result<GroupSet> {
    let q = budget.check_matrices(field, n)?;
    let space = Space::new(q as u8, n);
    let mut elems = Vec::new();
    packed::search_frames(&space, None, &mut |m| {
        elems.push(m.to_vec());
        true
    });
    Ok(GroupSet::from_encoded(field, n, elems))
}

/// All invertible `P` with `Q ∘ P = T`, as packed matrices. With `first_only`
/// the search stops at the first hit.
fn frames_between(q_form: &QForm, target: &QForm, budget: Budget, first_only: bool) -> Result<Vec<Vec<u8>>> {
    same_field(q_form.field(), target.field())?;
    if q_form.dim() != target.dim() {
        return Err(Error::DimensionMismatch { expected: q_form.dim(), got: target.dim() });
    }
    let q = budget.check_matrices(q_form.field(), q_form.dim())?;
    let space = Space::new(q as u8, q_form.dim());
    let tables = FormTables::new(&space, q_form);
    let goal = packed::upper_indices(target);
    let mut found = Vec::new();
    packed::search_frames(&space, Some((&tables, &goal)), &mut |m| {
        found.push(m.to_vec());
        !first_only
    });
    Ok(found)
}

/// `O(V,Q)`: invertible maps with `Q ∘ φ = Q`.
///
/// The search builds the columns `φ(eᵢ)` one at a time and prunes any partial
/// frame whose values `Q(φ(eᵢ))` or `B(φ(eᵢ), φ(eⱼ))` already disagree with
/// the coefficients of `Q`, so it never visits most of `GL(V)`.
/// [`orthogonal_group_by_gl_filter`] is the unpruned definition.
pub fn orthogonal_group(q_form: &QForm, budget: Budget) -> Result<GroupSet> {
    let elems = frames_between(q_form, q_form, budget, false)?;
    Ok(GroupSet::from_encoded(q_form.field(), q_form.dim(), elems))
}

/// `O′(V,Q)`: isometries fixing the radical elementwise.
pub fn weak_orthogonal_group(q_form: &QForm, budget: Budget) -> Result<GroupSet> {
    let o = orthogonal_group(q_form, budget)?;
    Ok(fix_radical(q_form, o))
}

fn fix_radical(q_form: &QForm, group: GroupSet) -> GroupSet {
    let radical = q_form.polar().radical;
    if radical.is_empty() {
        return group;
    }
    let q = q_form.field().order().expect("finite") as u8;
    let space = Space::new(q, q_form.dim());
    let rad: Vec<usize> = radical
        .iter()
        .map(|r| space.index_of(&r.iter().map(|c| c.index().expect("finite")).collect::<Vec<_>>()))
        .collect();
    let elems = group.elems.into_iter().filter(|m| rad.iter().all(|&r| space.apply(m, r) == r)).collect();
    GroupSet { elems, ..group }
}

/// `O(V,Q)` computed by testing every element of `GL(V)` with
/// [`QForm::is_isometry`].
pub fn orthogonal_group_by_gl_filter(q_form: &QForm, budget: Budget) -> Result<GroupSet> {
    let gl = enumerate_gl(q_form.field(), q_form.dim(), budget)?;
    let mut kept = Vec::new();
    for m in gl.matrices() {
        if q_form.is_isometry(&m)? {
            kept.push(m);
        }
    }
    GroupSet::from_matrices(q_form.field(), q_form.dim(), kept)
}

/// `O′(V,Q)` by filtering `GL(V)` with [`QForm::is_weak_isometry`].
pub fn weak_orthogonal_group_by_gl_filter(q_form: &QForm, budget: Budget) -> Result<GroupSet> {
    let gl = enumerate_gl(q_form.field(), q_form.dim(), budget)?;
    let mut kept = Vec::new();
    for m in gl.matrices() {
        if q_form.is_weak_isometry(&m)? {
            kept.push(m);
        }
    }
    GroupSet::from_matrices(q_form.field(), q_form.dim(), kept)
}

/// An invertible `P` with `a ∘ P = b`, if the forms are equivalent.
pub fn forms_equivalent(a: &QForm, b: &QForm, budget: Budget) -> Result<Option<Mat>> {
    let found = frames_between(a, b, budget, true)?;
    found.first().map(|m| Mat::decode(a.field(), a.dim(), a.dim(), m)).transpose()
}

/// The group generated by `gens` (plus the identity), by breadth-first
/// saturation under right multiplication by generators.
pub fn closure(field: FieldSpec, n: usize, gens: &[Mat], budget: Budget) -> Result<GroupSet> {
    let q = field.require_enumerable()? as u8;
    let mut packed_gens = Vec::with_capacity(gens.len());
    for g in gens {
        same_field(field, g.field())?;
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: g.rows() });
        }
        if !g.is_invertible() {
            return Err(Error::Singular);
        }
        packed_gens.push(g.encode());
    }
    let id = packed::identity(n);
    let mut seen: HashSet<Vec<u8>> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &packed_gens {
                let p = packed::mat_mul(q, n, m, g);
                if seen.insert(p.clone()) {
                    budget.check_count(seen.len())?;
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    Ok(GroupSet::from_encoded(field, n, seen.into_iter().collect()))
}

/// Every reflection `ξ_r` with `Q(r) ≠ 0`, deduplicated.
pub fn reflections(q_form: &QForm) -> Result<Vec<Mat>> {
    let mut out: Vec<Mat> = Vec::new();
    for r in crate::matrix::all_vectors(q_form.field(), q_form.dim())? {
        if !q_form.eval(&r)?.is_zero() {
            out.push(q_form.reflection(&r)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// The two shapes for which `O′(V,Q)` need not be generated by reflections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalShape {
    /// `|F| = 2`, `dim V > 2`, `Q = x1x2` in some basis.
    HyperbolicPlane,
    /// `|F| = 2`, `dim V ≥ 4`, `Q = x1x2 + x3x4` in some basis.
    TwoHyperbolicPlanes,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflectionStatus {
    /// The closure of all reflections equals `O′(V,Q)`.
    pub generates: bool,
    pub closure_order: usize,
    pub weak_order: usize,
    /// The exceptional shape `Q` has after a change of basis, if any.
    pub shape: Option<ExceptionalShape>,
}

impl ReflectionStatus {
    /// Brute force and the shape taxonomy agree: reflections generate
    /// exactly when `Q` has no exceptional shape.
    pub fn agrees(&self) -> bool {
        self.generates == self.shape.is_none()
    }
}

/// The standard form `x1x2 + x3x4 + …` with `planes` hyperbolic planes,
/// padded with zeros to dimension `n`.
pub fn hyperbolic_form(field: FieldSpec, n: usize, planes: usize) -> QForm {
    let mut w = Mat::zeros(field, n, n);
    for k in 0..planes {
        w.set(2 * k, 2 * k + 1, field.one());
    }
    QForm::from_matrix(&w).expect("square")
}

pub fn exceptional_shape(q_form: &QForm, budget: Budget) -> Result<Option<ExceptionalShape>> {
    let n = q_form.dim();
    if q_form.field().order() != Some(2) {
        return Ok(None);
    }
    if n > 2 && forms_equivalent(q_form, &hyperbolic_form(q_form.field(), n, 1), budget)?.is_some() {
        return Ok(Some(ExceptionalShape::HyperbolicPlane));
    }
    if n >= 4 && forms_equivalent(q_form, &hyperbolic_form(q_form.field(), n, 2), budget)?.is_some() {
        return Ok(Some(ExceptionalShape::TwoHyperbolicPlanes));
    }
    Ok(None)
}

pub fn reflection_generation_status(q_form: &QForm, budget: Budget) -> Result<ReflectionStatus> {
    let weak = weak_orthogonal_group(q_form, budget)?;
    let generated = closure(q_form.field(), q_form.dim(), &reflections(q_form)?, budget)?;
    Ok(ReflectionStatus {
        generates: generated == weak,
        closure_order: generated.len(),
        weak_order: weak.len(),
        shape: exceptional_shape(q_form, budget)?,
    })
}
