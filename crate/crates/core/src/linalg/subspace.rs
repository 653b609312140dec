use crate::linalg::Matrix;
use crate::scalar::{FieldDescriptor, Scalar};

/// Subspace of `F^n` held in reduced echelon form.
///
/// Basis vectors are the rows of a reduced row echelon matrix (equivalently
/// the columns of a column-reduced echelon `n x d` matrix), sorted by pivot.
/// Equal subspaces therefore compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace<S> {
    ambient: usize,
    field: FieldDescriptor,
    basis: Vec<Vec<S>>,
    pivots: Vec<usize>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(ambient: usize, field: &FieldDescriptor) -> Self {
        Subspace { ambient, field: *field, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize, field: &FieldDescriptor) -> Self {
        let one = S::one(field);
        let zero = S::zero(field);
        let basis = (0..ambient)
            .map(|i| (0..ambient).map(|j| if i == j { one.clone() } else { zero.clone() }).collect())
            .collect();
        Subspace { ambient, field: *field, basis, pivots: (0..ambient).collect() }
    }

    pub fn from_vectors(ambient: usize, field: &FieldDescriptor, vectors: impl IntoIterator<Item = Vec<S>>) -> Self {
        let mut space = Self::zero(ambient, field);
        for v in vectors {
            space.insert(v);
        }
        space
    }

    /// Span of the given standard basis vectors.
    pub fn coordinate(ambient: usize, field: &FieldDescriptor, indices: &[usize]) -> Self {
        Self::from_vectors(ambient, field, indices.iter().map(|&i| unit_vector(ambient, i, field)))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// Nonzero and not the whole space.
    pub fn is_proper(&self) -> bool {
        !self.is_zero() && !self.is_full()
    }

    /// Canonical basis vectors (rows of the reduced echelon form).
    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `n x d` matrix with the canonical basis as columns.
    pub fn basis_matrix(&self) -> Matrix<S> {
        Matrix::from_columns(&self.field, self.ambient, &self.basis)
    }

    /// Residual of `v` after elimination against the basis; zero iff `v` lies
    /// in the subspace.
    pub fn reduce(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.ambient, "vector length");
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let factor = r[p].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x = x.sub(&factor.mul(b));
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.reduce(v).iter().all(S::is_zero)
    }

    /// Absorbs `v`, returning whether the dimension grew.
    pub fn insert(&mut self, v: Vec<S>) -> bool {
        let mut r = self.reduce(&v);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[pivot].inv().expect("nonzero pivot");
        for x in r.iter_mut() {
            *x = x.mul(&inv);
        }
        for row in self.basis.iter_mut() {
            let factor = row[pivot].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&r) {
                *x = x.sub(&factor.mul(y));
            }
        }
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(at, pivot);
        self.basis.insert(at, r);
        true
    }

    pub fn contains_subspace(&self, other: &Subspace<S>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// `A W ⊆ W`.
    pub fn is_invariant_under(&self, a: &Matrix<S>) -> bool {
        self.basis.iter().all(|v| self.contains(&a.mul_vec(v)))
    }

    pub fn is_invariant_under_all(&self, gens: &[Matrix<S>]) -> bool {
        gens.iter().all(|g| self.is_invariant_under(g))
    }

    pub fn sum(&self, other: &Subspace<S>) -> Subspace<S> {
        let mut out = self.clone();
        for v in &other.basis {
            out.insert(v.clone());
        }
        out
    }

    /// `{x : <w, x> = 0 for all w in W}` under the standard bilinear form.
    pub fn annihilator(&self) -> Subspace<S> {
        if self.basis.is_empty() {
            return Subspace::full(self.ambient, &self.field);
        }
        let rows = self.basis.clone();
        Matrix::from_rows(&self.field, rows).expect("rectangular basis").kernel()
    }

    pub fn intersection(&self, other: &Subspace<S>) -> Subspace<S> {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }
}

pub fn unit_vector<S: Scalar>(n: usize, i: usize, field: &FieldDescriptor) -> Vec<S> {
    let mut v = vec![S::zero(field); n];
    v[i] = S::one(field);
    v
}
