//! Quadratic forms, their polar forms and isometries.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{all_vectors, check_vector, is_zero_vector, same_field, Mat, Vector};

/// A quadratic form `Q(x) = xᵀWx` on `Fⁿ`, stored by its canonical
/// upper-triangular coefficient matrix `W`.
///
/// Any coefficient matrix can be canonicalised by keeping the diagonal and
/// folding `wᵢⱼ + wⱼᵢ` into the strictly upper part, so two forms are equal
/// exactly when their canonical matrices are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QForm {
    w: Mat,
}

/// Polar form `B = W + Wᵀ` (also the matrix of the induced map `D: V → V*`),
/// a basis of the radical `V^⊥ = ker D` and the rank of `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarData {
    pub b: Mat,
    pub radical: Vec<Vector>,
    pub rank: usize,
}

impl PolarData {
    /// The induced map `D`, which has the same matrix as `B`.
    pub fn d(&self) -> &Mat {
        &self.b
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical.is_empty()
    }

    pub fn bilinear(&self, x: &[Scalar], y: &[Scalar]) -> Result<Scalar> {
        let by = self.b.mul_vec(y)?;
        check_vector(self.b.field(), self.b.rows(), x)?;
        if x.is_empty() {
            return Ok(self.b.field().zero());
        }
        Ok(crate::matrix::pairing(x, &by))
    }

    /// Whether `x` lies in the radical.
    pub fn in_radical(&self, x: &[Scalar]) -> Result<bool> {
        Ok(is_zero_vector(&self.b.mul_vec(x)?))
    }
}

impl QForm {
    /// Builds a form from its row-major upper-triangular coefficient list
    /// `(w₁₁, w₁₂, …, w₁ₙ, w₂₂, …, wₙₙ)`.
    pub fn new(field: FieldSpec, dim: usize, upper: Vec<Scalar>) -> Result<Self> {
        let expected = dim * (dim + 1) / 2;
        if upper.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: upper.len() });
        }
        let mut w = Mat::zeros(field, dim, dim);
        let mut it = upper.into_iter();
        for i in 0..dim {
            for j in i..dim {
                let c = it.next().expect("length checked");
                if c.field() != field {
                    return Err(Error::FieldMismatch { left: field, right: c.field() });
                }
                w.set(i, j, c);
            }
        }
        Ok(QForm { w })
    }

    pub fn from_ints(field: FieldSpec, dim: usize, upper: &[i64]) -> Result<Self> {
        QForm::new(field, dim, upper.iter().map(|&v| field.from_int(v)).collect())
    }

    /// Canonical form of `x ↦ xᵀMx` for any square `M`.
    pub fn from_matrix(m: &Mat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
        }
        let n = m.rows();
        let mut w = Mat::zeros(m.field(), n, n);
        for i in 0..n {
            w.set(i, i, m.get(i, i).clone());
            for j in i + 1..n {
                w.set(i, j, m.get(i, j) + m.get(j, i));
            }
        }
        Ok(QForm { w })
    }

    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        QForm { w: Mat::zeros(field, dim, dim) }
    }

    pub fn field(&self) -> FieldSpec {
        self.w.field()
    }

    pub fn dim(&self) -> usize {
        self.w.rows()
    }

    /// Canonical upper-triangular coefficient matrix.
    pub fn matrix(&self) -> &Mat {
        &self.w
    }

    pub fn upper(&self) -> Vec<Scalar> {
        let n = self.dim();
        (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| self.w.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.w.is_zero()
    }

    pub fn eval(&self, x: &[Scalar]) -> Result<Scalar> {
        let n = self.dim();
        check_vector(self.field(), n, x)?;
        let mut acc = self.field().zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in i..n {
                let c = self.w.get(i, j);
                if !c.is_zero() {
                    acc = acc + &(c * &(&x[i] * &x[j]));
                }
            }
        }
        Ok(acc)
    }

    pub fn polar(&self) -> PolarData {
        let b = self.w.add(&self.w.transpose()).expect("square");
        let radical = b.kernel_basis();
        let rank = self.dim() - radical.len();
        PolarData { b, radical, rank }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.polar().is_nondegenerate()
    }

    /// `Q ∘ η` for a linear map `η: Fᵐ → Fⁿ`.
    pub fn pullback(&self, eta: &Mat) -> Result<QForm> {
        same_field(self.field(), eta.field())?;
        if eta.rows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: eta.rows() });
        }
        let eta_t = eta.transpose();
        let pulled = QForm::from_matrix(&eta_t.mul(&self.w)?.mul(eta)?)?;
        // D̃ = ηᵀ D η
        let induced = eta_t.mul(self.polar().d())?.mul(eta)?;
        assert_eq!(pulled.polar().b, induced, "pullback polar form mismatch");
        Ok(pulled)
    }

    fn check_square_map(&self, phi: &Mat) -> Result<()> {
        same_field(self.field(), phi.field())?;
        if !phi.is_square() {
            return Err(Error::NotSquare { rows: phi.rows(), cols: phi.cols() });
        }
        if phi.rows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: phi.rows() });
        }
        if !phi.is_invertible() {
            return Err(Error::Singular);
        }
        Ok(())
    }

    /// `Q ∘ φ = Q`. Finite fields are checked on every vector, ℚ by comparing
    /// canonical pullback matrices.
    pub fn is_isometry(&self, phi: &Mat) -> Result<bool> {
        self.check_square_map(phi)?;
        if self.field().enumerable() {
            for x in all_vectors(self.field(), self.dim())? {
                if self.eval(&phi.mul_vec(&x)?)? != self.eval(&x)? {
                    return Ok(false);
                }
            }
            Ok(true)
        } else {
            Ok(&self.pullback(phi)? == self)
        }
    }

    /// Membership in the weak orthogonal group: an isometry fixing the
    /// radical elementwise.
    pub fn is_weak_isometry(&self, phi: &Mat) -> Result<bool> {
        if !self.is_isometry(phi)? {
            return Ok(false);
        }
        for r in self.polar().radical {
            if phi.mul_vec(&r)? != r {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Matrix of the reflection `x ↦ x − Q(r)⁻¹ B(r, x) r`.
    pub fn reflection(&self, r: &[Scalar]) -> Result<Mat> {
        let qr = self.eval(r)?;
        if qr.is_zero() {
            return Err(Error::NotReflectable);
        }
        let qr_inv = qr.inv()?;
        let br = self.polar().b.mul_vec(r)?;
        let n = self.dim();
        let mut m = Mat::identity(self.field(), n);
        for (i, ri) in r.iter().enumerate() {
            for (j, bj) in br.iter().enumerate() {
                let v = m.get(i, j) - &(&qr_inv * &(ri * bj));
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn scale(&self, c: &Scalar) -> QForm {
        QForm { w: self.w.scale(c) }
    }

    fn check_compatible(&self, other: &QForm) -> Result<()> {
        same_field(self.field(), other.field())?;
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(())
    }

    pub fn equal(&self, other: &QForm) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self == other)
    }

    /// The `c ∈ F^×` with `self = c · other`, if any. Two zero forms give 1.
    pub fn proportional(&self, other: &QForm) -> Result<Option<Scalar>> {
        self.check_compatible(other)?;
        let Some(k) = other.w.entries().iter().position(|e| !e.is_zero()) else {
            return Ok(self.is_zero().then(|| self.field().one()));
        };
        let c = self.w.entries()[k].div(&other.w.entries()[k])?;
        if c.is_zero() {
            return Ok(None);
        }
        Ok((other.scale(&c) == *self).then_some(c))
    }

    /// Renders the form as a polynomial, e.g. `x1^2 + x1*x2`.
    pub fn render(&self, vars: Vars) -> String {
        let n = self.dim();
        let mut terms: Vec<String> = Vec::new();
        for i in 0..n {
            for j in i..n {
                let c = self.w.get(i, j);
                if c.is_zero() {
                    continue;
                }
                let mono =
                    if i == j { format!("{}^2", vars.name(i)) } else { format!("{}*{}", vars.name(i), vars.name(j)) };
                let term = if c.is_one() {
                    mono
                } else if c.is_minus_one() {
                    format!("-{mono}")
                } else if c.field() == FieldSpec::Gf4 && c.index() == Some(3) {
                    format!("(t+1)*{mono}")
                } else {
                    format!("{c}*{mono}")
                };
                terms.push(term);
            }
        }
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            match t.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(t);
                }
            }
        }
        out
    }
}

impl fmt::Display for QForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Vars::X))
    }
}

/// Variable naming for rendering: `x1, …, xn` on `V`, `a0, …, an` on `F×V*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vars {
    X,
    A,
}

impl Vars {
    pub fn name(self, i: usize) -> String {
        match self {
            Vars::X => format!("x{}", i + 1),
            Vars::A => format!("a{i}"),
        }
    }
}

/// All `q^(n(n+1)/2)` forms on `Fⁿ`, in lexicographic order of their upper
/// coefficient lists (last coefficient fastest).
pub fn enumerate_forms(field: FieldSpec, n: usize) -> Result<FormIter> {
    let q = field.require_enumerable()?;
    let slots = n * (n + 1) / 2;
    let total = (q as u128).pow(slots as u32);
    if total > u64::MAX as u128 {
        return Err(Error::BudgetExceeded { required: total, budget: u64::MAX });
    }
    Ok(FormIter { field, n, digits: vec![0; slots], remaining: total as u64, q: q as u8 })
}

pub struct FormIter {
    field: FieldSpec,
    n: usize,
    digits: Vec<u8>,
    remaining: u64,
    q: u8,
}

impl Iterator for FormIter {
    type Item = QForm;

    fn next(&mut self) -> Option<QForm> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let upper = self.digits.iter().map(|&d| self.field.from_index(d).expect("in range")).collect();
        let form = QForm::new(self.field, self.n, upper).expect("shape");
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.q {
                break;
            }
            *d = 0;
        }
        Some(form)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

impl ExactSizeIterator for FormIter {}
