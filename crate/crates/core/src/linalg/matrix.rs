use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Polynomial, Subspace};
use crate::scalar::{FieldDescriptor, Scalar};

/// Dense row-major matrix over a single exact field.
///
/// Entries are canonical field elements, so structural equality is equality
/// of matrices and the derived `Hash` is usable for closure deduplication.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    field: FieldDescriptor,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize, field: &FieldDescriptor) -> Self {
        Matrix { rows, cols, field: *field, data: vec![S::zero(field); rows * cols] }
    }

    pub fn identity(n: usize, field: &FieldDescriptor) -> Self {
        Self::scalar(n, &S::one(field))
    }

    /// `c * I` of size `n`.
    pub fn scalar(n: usize, c: &S) -> Self {
        let field = c.field();
        let mut m = Self::zeros(n, n, &field);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_rows(field: &FieldDescriptor, rows: Vec<Vec<S>>) -> Result<Self> {
        if !S::accepts(field) {
            return Err(Error::DimensionMismatch {
                expected: format!("entries over {field}"),
                found: "incompatible scalar type".into(),
            });
        }
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(height * width);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::DimensionMismatch {
                    expected: format!("{width} columns"),
                    found: format!("{} columns in row {i}", row.len()),
                });
            }
            for entry in row {
                if entry.field() != *field {
                    return Err(Error::FieldMismatch(*field, entry.field()));
                }
                data.push(entry);
            }
        }
        Ok(Matrix { rows: height, cols: width, field: *field, data })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: &FieldDescriptor, height: usize, columns: &[Vec<S>]) -> Self {
        let mut m = Self::zeros(height, columns.len(), field);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), height, "column length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: &FieldDescriptor, rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v, field)).collect()).collect();
        Self::from_rows(field, rows).expect("rectangular integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Side length of a square matrix.
    pub fn n(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: S) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn zero_elem(&self) -> S {
        S::zero(&self.field)
    }

    pub fn mul(&self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = Matrix::<S>::zeros(self.rows, rhs.cols, &self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.zero_elem(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    fn zip_with(&self, rhs: &Matrix<S>, f: impl Fn(&S, &S) -> S) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "elementwise shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix<S>) -> Matrix<S> {
        self.zip_with(rhs, S::add)
    }

    pub fn sub(&self, rhs: &Matrix<S>) -> Matrix<S> {
        self.zip_with(rhs, S::sub)
    }

    pub fn scale(&self, c: &S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(|x| x.mul(c)).collect(),
        }
    }

    /// `A - c I`.
    pub fn shift(&self, c: &S) -> Matrix<S> {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let idx = i * self.cols + i;
            m.data[idx] = m.data[idx].sub(c);
        }
        m
    }

    pub fn transpose(&self) -> Matrix<S> {
        let mut t = Matrix::zeros(self.cols, self.rows, &self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn pow(&self, mut exp: u64) -> Matrix<S> {
        let mut acc = Matrix::identity(self.n(), &self.field);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    /// The scalar `c` when the matrix equals `c I`.
    pub fn as_scalar(&self) -> Option<S> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                let ok = if i == j { *x == c } else { x.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn is_identity(&self) -> bool {
        self.as_scalar().is_some_and(|c| c.is_one())
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(self.zero_elem(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn diagonal(&self) -> Vec<S> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    /// Copy of the `height x width` block with top-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, height: usize, width: usize) -> Matrix<S> {
        let mut m = Matrix::zeros(height, width, &self.field);
        for i in 0..height {
            for j in 0..width {
                m.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        m
    }

    pub fn block_diagonal(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
        let (p, q) = (a.rows, b.rows);
        let mut m = Matrix::zeros(p + q, a.cols + b.cols, &a.field);
        for i in 0..p {
            for j in 0..a.cols {
                m.set(i, j, a.get(i, j).clone());
            }
        }
        for i in 0..q {
            for j in 0..b.cols {
                m.set(p + i, a.cols + j, b.get(i, j).clone());
            }
        }
        m
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix<S>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&factor.mul(m.get(r, j)));
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
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Determinant by fraction-field elimination.
    pub fn det(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = S::one(&self.field);
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return self.zero_elem();
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = det.neg();
            }
            let pivot = m.get(c, c).clone();
            det = det.mul(&pivot);
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..n {
                let factor = m.get(i, c).mul(&inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).sub(&factor.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix<S>> {
        if !self.is_square() {
            return Err(Error::SingularMatrix);
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n, &self.field);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, S::one(&self.field));
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        Ok(red.block(0, n, n, n))
    }

    /// Null space `{x : A x = 0}` in canonical echelon form.
    pub fn kernel(&self) -> Subspace<S> {
        let (red, pivots) = self.rref();
        let mut vectors = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![self.zero_elem(); self.cols];
            v[free] = S::one(&self.field);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = red.get(r, free).neg();
            }
            vectors.push(v);
        }
        Subspace::from_vectors(self.cols, &self.field, vectors)
    }

    /// Image (column space).
    pub fn image(&self) -> Subspace<S> {
        Subspace::from_vectors(self.rows, &self.field, self.columns())
    }

    /// `T^-1 A T`.
    pub fn conjugate(&self, t: &Matrix<S>) -> Result<Matrix<S>> {
        if t.rows != self.rows || !t.is_square() {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0} conjugator", self.rows),
                found: format!("{}x{}", t.rows, t.cols),
            });
        }
        Ok(t.inverse()?.mul(self).mul(t))
    }

    /// `A^n = 0`, by repeated squaring to an exponent of at least `n`.
    pub fn is_nilpotent(&self) -> bool {
        let n = self.n();
        let mut power = self.clone();
        let mut exp = 1;
        while exp < n {
            if power.is_zero() {
                return true;
            }
            power = power.mul(&power);
            exp *= 2;
        }
        power.is_zero()
    }

    /// Characteristic polynomial `det(xI - A)`, division-free (Berkowitz).
    pub fn charpoly(&self) -> Polynomial<S> {
        crate::linalg::charpoly::berkowitz(self)
    }
}

impl<S: fmt::Display> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (idx, x) in self.data.iter().enumerate() {
            if idx > 0 {
                write!(f, "{}", if idx % self.cols.max(1) == 0 { "; " } else { " " })?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "] over {}", self.field)
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, Rational};

    const Q: FieldDescriptor = FieldDescriptor::Rational;

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_i64(&Q, rows)
    }

    #[test]
    fn kernel_examples() {
        let nil = q(&[&[0, 1], &[0, 0]]);
        assert_eq!(
            nil.kernel(),
            Subspace::from_vectors(2, &Q, vec![vec![Rational::from_integer(1), Rational::from_integer(0)]])
        );
        assert_eq!(Matrix::<Rational>::identity(2, &Q).kernel().dim(), 0);
        let ones = q(&[&[1, 1], &[1, 1]]);
        let k = ones.kernel();
        // oracle: hand row reduction gives (1, -1); check A (1, -1)^T = 0
        let v = vec![Rational::from_integer(1), Rational::from_integer(-1)];
        assert!(ones.mul_vec(&v).iter().all(Scalar::is_zero));
        assert_eq!(k.basis(), &[v]);
    }

    #[test]
    fn nilpotency() {
        assert!(q(&[&[0, 1, 2], &[0, 0, 3], &[0, 0, 0]]).is_nilpotent());
        assert!(!Matrix::<Rational>::identity(2, &Q).is_nilpotent());
        assert!(Matrix::<Rational>::zeros(1, 1, &Q).is_nilpotent());
        assert!(!q(&[&[5]]).is_nilpotent());
        let gf5 = FieldDescriptor::Prime(5);
        let p = Matrix::<Fp>::from_i64(&gf5, &[&[1, 2, 0], &[3, 1, 1], &[0, 4, 2]]);
        let j3 = Matrix::<Fp>::from_i64(&gf5, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let conj = p.mul(&j3).mul(&p.inverse().unwrap());
        assert!(conj.is_nilpotent());
        assert!(!conj.mul(&conj).is_zero());
    }

    #[test]
    fn conjugation_examples() {
        let a = q(&[&[1, 1], &[0, 1]]);
        assert_eq!(a.conjugate(&Matrix::identity(2, &Q)).unwrap(), a);
        let t = q(&[&[1, 0], &[1, 1]]);
        let c = a.conjugate(&t).unwrap();
        // hand multiplication: T^-1 = [[1,0],[-1,1]], A T = [[2,1],[1,1]]
        assert_eq!(c, q(&[&[2, 1], &[-1, 0]]));
        // the opposite convention T A T^-1
        assert_eq!(a.conjugate(&t.inverse().unwrap()).unwrap(), q(&[&[0, 1], &[-1, 2]]));
        assert_eq!(c.trace(), a.trace());
        assert_eq!(c.det(), a.det());
        assert_eq!(c.conjugate(&t.inverse().unwrap()).unwrap(), a);
        assert_eq!(a.conjugate(&q(&[&[1, 1], &[1, 1]])), Err(Error::SingularMatrix));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), Rational::from_integer(18));
        assert!(a.mul(&a.inverse().unwrap()).is_identity());
        assert_eq!(q(&[&[0, 1], &[1, 0]]).det(), Rational::from_integer(-1));
    }

    #[test]
    fn scalar_detection() {
        assert_eq!(q(&[&[3, 0], &[0, 3]]).as_scalar(), Some(Rational::from_integer(3)));
        assert_eq!(q(&[&[3, 1], &[0, 3]]).as_scalar(), None);
        assert!(q(&[&[1, 0], &[0, 1]]).is_identity());
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![vec![Rational::from_integer(1)], vec![]];
        assert!(matches!(Matrix::from_rows(&Q, rows), Err(Error::DimensionMismatch { .. })));
        let mixed = vec![vec![Fp::new(1, 5), Fp::new(1, 7)]];
        assert!(matches!(Matrix::from_rows(&FieldDescriptor::Prime(5), mixed), Err(Error::FieldMismatch(_, _))));
    }
}
