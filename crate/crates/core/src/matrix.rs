//! Dense matrices and exact linear algebra.
//!
//! Vectors are columns. A linear map acts on the left of its argument, and
//! dual vectors are written as columns with respect to the dual basis, so the
//! pairing `<a*, x>` is `a*ᵀ x`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

pub type Vector = Vec<Scalar>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Mat { field, rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_entries(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: entries.len() });
        }
        if let Some(bad) = entries.iter().find(|e| e.field() != field) {
            return Err(Error::FieldMismatch { left: field, right: bad.field() });
        }
        Ok(Mat { field, rows, cols, entries })
    }

    /// Row-major matrix from integers mapped into `field`.
    pub fn from_ints(field: FieldSpec, rows: usize, cols: usize, ints: &[i64]) -> Result<Self> {
        Mat::from_entries(field, rows, cols, ints.iter().map(|&v| field.from_int(v)).collect())
    }

    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vector]) -> Result<Self> {
        let mut m = Mat::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            check_vector(field, rows, c)?;
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn diag(field: FieldSpec, d: &[Scalar]) -> Self {
        let mut m = Mat::zeros(field, d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    /// Block-diagonal matrix `diag(a, b)`.
    pub fn block_diag(a: &Mat, b: &Mat) -> Result<Self> {
        same_field(a.field, b.field)?;
        let mut m = Mat::zeros(a.field, a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m.set(i, j, a.get(i, j).clone());
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                m.set(a.rows + i, a.cols + j, b.get(i, j).clone());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vector {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    /// The `rows × cols` submatrix starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut m = Mat::zeros(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, rhs: &Mat) -> Result<Mat> {
        same_field(self.field, rhs.field)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: rhs.rows });
        }
        let mut m = Mat::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = self.field.zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc = acc + a * rhs.get(k, j);
                    }
                }
                m.set(i, j, acc);
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Result<Vector> {
        check_vector(self.field, self.cols, x)?;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (k, xk) in x.iter().enumerate() {
                    acc = acc + self.get(i, k) * xk;
                }
                acc
            })
            .collect())
    }

    pub fn add(&self, rhs: &Mat) -> Result<Mat> {
        same_field(self.field, rhs.field)?;
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, got: rhs.rows * rhs.cols });
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        Ok(Mat { field: self.field, rows: self.rows, cols: self.cols, entries })
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        let entries = self.entries.iter().map(|a| a * c).collect();
        Mat { field: self.field, rows: self.rows, cols: self.cols, entries }
    }

    /// Reduced row echelon form and the pivot columns.
    fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("pivot is non-zero");
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &(&factor * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Gauss–Jordan inverse.
    pub fn invert(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = Mat::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Singular);
        }
        Ok(red.block(0, n, n, n))
    }

    /// Basis of the null space, one vector per free column of the RREF.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (red, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -red.get(r, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Injective byte encoding of the entries (shape is carried separately).
    ///
    /// Finite-field entries take one byte each (the enumeration index);
    /// rationals are written as `num/den;` text.
    pub fn encode(&self) -> Vec<u8> {
        encode_scalars(&self.entries)
    }

    pub fn decode(field: FieldSpec, rows: usize, cols: usize, bytes: &[u8]) -> Result<Mat> {
        let entries = decode_scalars(field, bytes)?;
        Mat::from_entries(field, rows, cols, entries)
    }
}

pub(crate) fn encode_scalars(entries: &[Scalar]) -> Vec<u8> {
    let mut out = Vec::with_capacity(entries.len());
    for e in entries {
        match e.index() {
            Some(i) => out.push(i),
            None => {
                let r = e.as_rational().expect("rational");
                out.extend_from_slice(format!("{}/{};", r.numer(), r.denom()).as_bytes());
            }
        }
    }
    out
}

pub(crate) fn decode_scalars(field: FieldSpec, bytes: &[u8]) -> Result<Vec<Scalar>> {
    if field.enumerable() {
        bytes.iter().map(|&b| field.from_index(b)).collect()
    } else {
        let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?;
        text.split_terminator(';').map(|s| field.parse_scalar(s)).collect()
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:>width$}", cells[i * self.cols + j])).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

pub(crate) fn same_field(a: FieldSpec, b: FieldSpec) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::FieldMismatch { left: a, right: b })
    }
}

pub(crate) fn check_vector(field: FieldSpec, n: usize, v: &[Scalar]) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.len() });
    }
    match v.iter().find(|x| x.field() != field) {
        Some(bad) => Err(Error::FieldMismatch { left: field, right: bad.field() }),
        None => Ok(()),
    }
}

pub fn zero_vector(field: FieldSpec, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vector(field: FieldSpec, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `<a*, x>`.
pub fn pairing(a: &[Scalar], x: &[Scalar]) -> Scalar {
    let field = a.first().or(x.first()).map(Scalar::field);
    let mut acc = match field {
        Some(f) => f.zero(),
        None => return FieldSpec::Rational.zero(),
    };
    for (ai, xi) in a.iter().zip(x) {
        acc = acc + ai * xi;
    }
    acc
}

/// `Mᵀ`; the coordinate form of the transpose map `a* ↦ a* ∘ η`.
pub fn transpose_map(m: &Mat) -> Mat {
    m.transpose()
}

/// Basis of the annihilator `S° ≤ V*` of the span of `basis` in `Fⁿ`.
pub fn annihilator(field: FieldSpec, n: usize, basis: &[Vector]) -> Result<Vec<Vector>> {
    let mut m = Mat::zeros(field, basis.len(), n);
    for (i, v) in basis.iter().enumerate() {
        check_vector(field, n, v)?;
        for (j, x) in v.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    Ok(m.kernel_basis())
}

/// Dimension of the span of a set of vectors in `Fⁿ`.
pub fn span_dim(field: FieldSpec, n: usize, vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Mat::from_columns(field, n, vectors).map(|m| m.rank()).unwrap_or(0)
}

/// Whether two finite sets of vectors span the same subspace.
pub fn same_span(field: FieldSpec, n: usize, a: &[Vector], b: &[Vector]) -> bool {
    let da = span_dim(field, n, a);
    let db = span_dim(field, n, b);
    let joint: Vec<Vector> = a.iter().chain(b).cloned().collect();
    da == db && span_dim(field, n, &joint) == da
}

/// Every vector of `Fⁿ` in the fixed order (coordinate 0 is the least
/// significant digit).
pub fn all_vectors(field: FieldSpec, n: usize) -> Result<Vec<Vector>> {
    let els = field.elements()?;
    let q = els.len();
    let total = q.checked_pow(n as u32).ok_or(Error::BudgetExceeded { required: u128::MAX, budget: u64::MAX })?;
    Ok((0..total)
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = k % q;
                    k /= q;
                    els[d].clone()
                })
                .collect()
        })
        .collect())
}

/// Every vector of the span of `basis` (finite fields only).
pub fn span_elements(field: FieldSpec, n: usize, basis: &[Vector]) -> Result<Vec<Vector>> {
    let coeffs = all_vectors(field, basis.len())?;
    Ok(coeffs
        .into_iter()
        .map(|c| {
            let mut v = zero_vector(field, n);
            for (ci, b) in c.iter().zip(basis) {
                for (vj, bj) in v.iter_mut().zip(b) {
                    *vj = &*vj + &(ci * bj);
                }
            }
            v
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u8) -> FieldSpec {
        FieldSpec::Prime(p)
    }

    #[test]
    fn invert_examples() {
        let m = Mat::from_ints(gf(3), 1, 1, &[2]).unwrap();
        assert_eq!(m.invert().unwrap(), m);

        let swap = Mat::from_ints(gf(2), 2, 2, &[0, 1, 1, 0]).unwrap();
        assert_eq!(swap.invert().unwrap(), swap);

        let q = FieldSpec::Rational;
        let two = Mat::from_ints(q, 1, 1, &[2]).unwrap();
        let half = Mat::from_entries(q, 1, 1, vec![q.parse_scalar("1/2").unwrap()]).unwrap();
        assert_eq!(two.invert().unwrap(), half);

        let singular = Mat::from_ints(gf(5), 2, 2, &[1, 2, 2, 4]).unwrap();
        assert_eq!(singular.invert(), Err(Error::Singular));
        assert_eq!(Mat::identity(gf(2), 0).invert().unwrap(), Mat::identity(gf(2), 0));
    }

    #[test]
    fn kernel_examples() {
        let m = Mat::from_ints(gf(2), 2, 2, &[0, 1, 0, 0]).unwrap();
        assert_eq!(m.kernel_basis(), vec![unit_vector(gf(2), 2, 0)]);
        assert!(Mat::identity(gf(7), 3).kernel_basis().is_empty());
        assert_eq!(Mat::zeros(gf(3), 2, 2).kernel_basis().len(), 2);
    }

    #[test]
    fn annihilator_examples() {
        let f2 = gf(2);
        assert_eq!(annihilator(f2, 2, &[unit_vector(f2, 2, 0)]).unwrap(), vec![unit_vector(f2, 2, 1)]);
        assert_eq!(annihilator(f2, 3, &[]).unwrap().len(), 3);
        let f3 = gf(3);
        let ann = annihilator(f3, 3, &[unit_vector(f3, 3, 0), unit_vector(f3, 3, 1)]).unwrap();
        assert_eq!(ann, vec![unit_vector(f3, 3, 2)]);
    }

    #[test]
    fn transpose_examples() {
        let q = FieldSpec::Rational;
        let m = Mat::from_ints(q, 2, 2, &[1, 2, 0, 1]).unwrap();
        assert_eq!(transpose_map(&m), Mat::from_ints(q, 2, 2, &[1, 0, 2, 1]).unwrap());
        let s = Mat::from_ints(q, 2, 2, &[3, 5, 5, 7]).unwrap();
        assert_eq!(transpose_map(&s), s);
        let e = Mat::zeros(q, 0, 0);
        assert_eq!(transpose_map(&e), e);
    }

    #[test]
    fn transpose_contract_in_coordinates() {
        let f = gf(5);
        let eta = Mat::from_ints(f, 2, 3, &[1, 2, 3, 4, 0, 1]).unwrap();
        for a in all_vectors(f, 2).unwrap() {
            for x in all_vectors(f, 3).unwrap().iter().step_by(7) {
                let lhs = pairing(&eta.transpose().mul_vec(&a).unwrap(), x);
                let rhs = pairing(&a, &eta.mul_vec(x).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn encoding_round_trips() {
        let q = FieldSpec::Rational;
        let m = Mat::from_entries(q, 1, 2, vec![q.parse_scalar("-3/7").unwrap(), q.zero()]).unwrap();
        assert_eq!(Mat::decode(q, 1, 2, &m.encode()).unwrap(), m);
        let g = Mat::from_ints(FieldSpec::Gf4, 1, 2, &[1, 0]).unwrap();
        assert_eq!(g.encode(), vec![1, 0]);
    }
}
