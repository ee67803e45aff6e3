//! The homogeneous model of the affine space `V`: affinities act on `F×V`
//! through `ζ` and on the dual `F×V*` through `β`, and quadratic forms on `V`
//! lift to forms on `F×V*` with radical `F(1,o*)`.
//!
//! Coordinates on `F×V` are `(x0, x)` and on `F×V*` are `(a0, a*)`; both are
//! columns, index 0 being the extra coordinate.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::groups::{orthogonal_group, weak_orthogonal_group, Budget, GroupSet};
use crate::matrix::{all_vectors, check_vector, is_zero_vector, same_field, unit_vector, Mat, Vector};
use crate::quadform::{enumerate_forms, QForm};
use crate::report::Report;
use crate::transvect::render_vector;

/// The affinity `x ↦ A x + t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub t: Vector,
    pub a: Mat,
}

impl AffineMap {
    pub fn new(t: Vector, a: Mat) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        check_vector(a.field(), a.rows(), &t)?;
        if !a.is_invertible() {
            return Err(Error::Singular);
        }
        Ok(AffineMap { t, a })
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        AffineMap { t: crate::matrix::zero_vector(field, n), a: Mat::identity(field, n) }
    }

    pub fn translation(field: FieldSpec, t: Vector) -> Result<Self> {
        AffineMap::new(t.clone(), Mat::identity(field, t.len()))
    }

    pub fn field(&self) -> FieldSpec {
        self.a.field()
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn is_translation(&self) -> bool {
        self.a.is_identity()
    }

    pub fn apply(&self, x: &[Scalar]) -> Result<Vector> {
        let ax = self.a.mul_vec(x)?;
        Ok(ax.iter().zip(&self.t).map(|(p, q)| p + q).collect())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap> {
        let t = self.apply(&other.t)?;
        Ok(AffineMap { t, a: self.a.mul(&other.a)? })
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        let a_inv = self.a.invert()?;
        let t = a_inv.mul_vec(&self.t)?.iter().map(|c| -c).collect();
        Ok(AffineMap { t, a: a_inv })
    }
}

/// Fixed coordinates of `F×V` and `F×V*` over a field, for `dim V = n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomogModel {
    pub field: FieldSpec,
    pub n: usize,
}

impl HomogModel {
    pub fn new(field: FieldSpec, n: usize) -> Self {
        HomogModel { field, n }
    }

    /// `ν: V → F×V`, `x ↦ (0, x)`.
    pub fn nu(&self) -> Mat {
        let mut m = Mat::zeros(self.field, self.n + 1, self.n);
        for i in 0..self.n {
            m.set(i + 1, i, self.field.one());
        }
        m
    }

    /// `π: F×V → V`, `(x0, x) ↦ x`.
    pub fn pi(&self) -> Mat {
        self.nu().transpose()
    }

    /// The vector `(1, o*)` spanning the radical of every lifted form.
    pub fn vertex(&self) -> Vector {
        unit_vector(self.field, self.n + 1, 0)
    }

    fn check(&self, gamma: &AffineMap) -> Result<()> {
        same_field(self.field, gamma.field())?;
        if gamma.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: gamma.dim() });
        }
        Ok(())
    }

    /// `ζ(γ) = [[1, 0], [t, A]]` acting on `(x0, x)`.
    pub fn zeta(&self, gamma: &AffineMap) -> Result<Mat> {
        self.check(gamma)?;
        let n = self.n;
        let mut m = Mat::zeros(self.field, n + 1, n + 1);
        m.set(0, 0, self.field.one());
        for i in 0..n {
            m.set(i + 1, 0, gamma.t[i].clone());
            for j in 0..n {
                m.set(i + 1, j + 1, gamma.a.get(i, j).clone());
            }
        }
        Ok(m)
    }

    /// `β(γ) = [[1, −tᵀA⁻ᵀ], [0, A⁻ᵀ]] = (ζ(γ)ᵀ)⁻¹` acting on `(a0, a*)`.
    pub fn beta(&self, gamma: &AffineMap) -> Result<Mat> {
        self.check(gamma)?;
        let a_inv_t = gamma.a.invert()?.transpose();
        Ok(self.beta_parts(&gamma.t, &a_inv_t))
    }

    fn beta_parts(&self, t: &[Scalar], a_inv_t: &Mat) -> Mat {
        let n = self.n;
        let mut m = Mat::zeros(self.field, n + 1, n + 1);
        m.set(0, 0, self.field.one());
        for j in 0..n {
            let mut acc = self.field.zero();
            for (k, tk) in t.iter().enumerate() {
                acc = acc - &(tk * a_inv_t.get(k, j));
            }
            m.set(0, j + 1, acc);
            for i in 0..n {
                m.set(i + 1, j + 1, a_inv_t.get(i, j).clone());
            }
        }
        m
    }

    /// The affinity `γ` with `β(γ) = κ`, when `κ` is invertible and fixes `(1, o*)`.
    pub fn beta_preimage(&self, kappa: &Mat) -> Option<AffineMap> {
        let n = self.n;
        if kappa.field() != self.field || kappa.rows() != n + 1 || kappa.cols() != n + 1 {
            return None;
        }
        if kappa.column(0) != self.vertex() {
            return None;
        }
        let m = kappa.block(1, 1, n, n);
        let a = m.invert().ok()?.transpose();
        let u: Vector = (0..n).map(|j| kappa.get(0, j + 1).clone()).collect();
        let t = a.mul_vec(&u).ok()?.iter().map(|c| -c).collect();
        Some(AffineMap { t, a })
    }
}

fn render_vectors(vs: &[Vector]) -> Vec<String> {
    vs.iter().map(|v| render_vector(v)).collect()
}

/// `Q↑` on `F×V*`, with coefficient matrix `diag(0, S⁻¹WS⁻¹)` where
/// `S = W + Wᵀ` must be invertible.
pub fn lift(q_form: &QForm) -> Result<QForm> {
    let polar = q_form.polar();
    if !polar.radical.is_empty() {
        return Err(Error::DegeneratePolarForm { radical: render_vectors(&polar.radical) });
    }
    let s_inv = polar.b.invert()?;
    let inner = s_inv.mul(q_form.matrix())?.mul(&s_inv)?;
    let up = QForm::from_matrix(&Mat::block_diag(&Mat::zeros(q_form.field(), 1, 1), &inner)?)?;
    let model = HomogModel::new(q_form.field(), q_form.dim());
    let vertex = model.vertex();
    assert!(up.eval(&vertex)?.is_zero(), "lift does not vanish at the vertex");
    assert_eq!(up.polar().radical, vec![vertex], "lift radical is not the vertex line");
    Ok(up)
}

/// `Q̃↓` on `V` for a form `Q̃` on `F×V*` that vanishes at `(1, o*)` and has
/// radical `F(1, o*)`.
pub fn drop(qt: &QForm) -> Result<QForm> {
    let m = qt.dim();
    let polar = qt.polar();
    let vertex_nonzero = m > 0 && !qt.matrix().get(0, 0).is_zero();
    let radical_mismatch = m == 0 || polar.radical != vec![unit_vector(qt.field(), m, 0)];
    if vertex_nonzero || radical_mismatch {
        return Err(Error::NotDroppable { vertex_nonzero, radical_mismatch });
    }
    let n = m - 1;
    let s = polar.b.block(1, 1, n, n);
    let s_inv = s.invert()?;
    let w_sub = qt.matrix().block(1, 1, n, n);
    let down = QForm::from_matrix(&s_inv.mul(&w_sub)?.mul(&s_inv)?)?;
    assert!(down.is_nondegenerate(), "dropped form has a degenerate polar form");
    Ok(down)
}

/// Checks `(Q↑)↓ = Q` and `(cQ)↑ = c⁻¹Q↑` for every non-degenerate `Q` on `Fⁿ`,
/// and `(Q̃↓)↑ = Q̃` for every droppable `Q̃` on `F×V*`.
pub fn roundtrip_checks(field: FieldSpec, n: usize) -> Result<Report> {
    let mut report = Report::new(format!("round trips over {field}, dim {n}"));
    let units = field.units()?;
    let mut lifted = 0;
    for q in enumerate_forms(field, n)? {
        if !q.is_nondegenerate() {
            continue;
        }
        lifted += 1;
        let up = lift(&q)?;
        let back = drop(&up)?;
        report.check(back == q, || format!("(Q^)v = {back} != Q = {q}"));
        // D scales with c, so (cQ)↑ = c⁻¹·Q↑; the two agree only when c² = 1.
        for c in &units {
            let lhs = lift(&q.scale(c))?;
            let rhs = up.scale(&c.inv()?);
            report.check(lhs == rhs, || format!("lift({c} * ({q})) != {c}^-1 * lift({q})"));
        }
    }
    let mut dropped = 0;
    for qt in enumerate_forms(field, n + 1)? {
        match drop(&qt) {
            Ok(down) => {
                dropped += 1;
                let again = lift(&down)?;
                report.check(again == qt, || format!("(Qt v)^ = {again} != Qt = {qt}"));
            }
            Err(Error::NotDroppable { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    report.note(format!("{lifted} liftable forms, {dropped} droppable forms"));
    Ok(report)
}

/// `AO(V,Q)^β` (or `AO′(V,Q)^β` when `weak`): the β-images of all
/// affinities whose linear part lies in `O(V,Q)` (resp. `O′(V,Q)`).
pub fn motion_group_beta(q_form: &QForm, weak: bool, budget: Budget) -> Result<GroupSet> {
    let linear = if weak { weak_orthogonal_group(q_form, budget)? } else { orthogonal_group(q_form, budget)? };
    let (field, n) = (q_form.field(), q_form.dim());
    let model = HomogModel::new(field, n);
    let translations = all_vectors(field, n)?;
    let mut elems = Vec::with_capacity(translations.len() * linear.len());
    for a in linear.matrices() {
        let a_inv_t = a.invert()?.transpose();
        for t in &translations {
            elems.push(model.beta_parts(t, &a_inv_t));
        }
    }
    GroupSet::from_matrices(field, n + 1, elems)
}

/// The affine reflection `x ↦ x − Q(r)⁻¹ B(r, x − p) r` with axis through `p`.
pub fn affine_reflection(q_form: &QForm, p: &[Scalar], r: &[Scalar]) -> Result<AffineMap> {
    check_vector(q_form.field(), q_form.dim(), p)?;
    let a = q_form.reflection(r)?;
    let coeff = q_form.eval(r)?.inv()? * q_form.polar().bilinear(r, p)?;
    let t = r.iter().map(|ri| &coeff * ri).collect();
    assert!(q_form.is_weak_isometry(&a)?, "reflection is not a weak isometry");
    AffineMap::new(t, a)
}

/// Whether `β` of the affine reflection equals the reflection of `Q↑` in the
/// direction `(−B(r, p), D(r))`.
pub fn reflection_correspondence(q_form: &QForm, p: &[Scalar], r: &[Scalar]) -> Result<bool> {
    let gamma = affine_reflection(q_form, p, r)?;
    let lhs = HomogModel::new(q_form.field(), q_form.dim()).beta(&gamma)?;
    let polar = q_form.polar();
    let mut direction = vec![-polar.bilinear(r, p)?];
    direction.extend(polar.d().mul_vec(r)?);
    let rhs = lift(q_form)?.reflection(&direction)?;
    Ok(lhs == rhs)
}

/// Runs [`reflection_correspondence`] on every non-degenerate form of `Fⁿ`,
/// every point `p` and every direction `r` with `Q(r) ≠ 0`.
pub fn verify_reflections(field: FieldSpec, n: usize) -> Result<Report> {
    let mut report = Report::new(format!("affine reflections over {field}, dim {n}"));
    let points = all_vectors(field, n)?;
    for q in enumerate_forms(field, n)? {
        if !q.is_nondegenerate() {
            continue;
        }
        for r in points.iter().filter(|r| !is_zero_vector(r)) {
            if q.eval(r)?.is_zero() {
                continue;
            }
            for p in &points {
                let ok = reflection_correspondence(&q, p, r)?;
                report.check(ok, || format!("Q = {q}, p = {}, r = {}", render_vector(p), render_vector(r)));
            }
        }
    }
    Ok(report)
}
