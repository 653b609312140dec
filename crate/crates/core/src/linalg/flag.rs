use crate::error::{Error, Result};
use crate::linalg::subspace::unit_vector;
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

/// Complete flag encoded by a change of basis: the first `j` columns of `T`
/// span the `j`-dimensional member of the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag<S: Scalar> {
    basis: Matrix<S>,
    inverse: Matrix<S>,
}

impl<S: Scalar> Flag<S> {
    pub fn new(basis: Matrix<S>) -> Result<Self> {
        let inverse = basis.inverse()?;
        Ok(Flag { basis, inverse })
    }

    pub fn standard(n: usize, field: &crate::scalar::FieldDescriptor) -> Self {
        let id = Matrix::identity(n, field);
        Flag { basis: id.clone(), inverse: id }
    }

    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    pub fn inverse(&self) -> &Matrix<S> {
        &self.inverse
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    /// Chain dimensions `0, 1, ..., n`.
    pub fn dims(&self) -> Vec<usize> {
        (0..=self.n()).collect()
    }

    /// The `j`-dimensional chain member.
    pub fn member(&self, j: usize) -> Subspace<S> {
        let field = self.basis.field();
        Subspace::from_vectors(self.n(), &field, (0..j).map(|c| self.basis.column(c)))
    }

    /// `T^-1 A T`.
    pub fn apply(&self, a: &Matrix<S>) -> Matrix<S> {
        self.inverse.mul(a).mul(&self.basis)
    }
}

/// Basis of `F^n` starting with the canonical basis of `w`, completed greedily
/// by standard basis vectors in index order. Returned as columns of `T`.
pub fn extend_basis<S: Scalar>(w: &Subspace<S>) -> Matrix<S> {
    let n = w.ambient_dim();
    let field = w.field();
    let mut span = w.clone();
    let mut columns: Vec<Vec<S>> = w.basis().to_vec();
    for i in 0..n {
        if span.is_full() {
            break;
        }
        let e = unit_vector(n, i, &field);
        if span.insert(e.clone()) {
            columns.push(e);
        }
    }
    Matrix::from_columns(&field, n, &columns)
}

/// Restriction to an invariant subspace `W` and the induced action on `F^n / W`.
///
/// In the basis from [`extend_basis`] the matrix is block upper triangular;
/// the diagonal blocks are returned.
pub fn restrict_and_quotient<S: Scalar>(a: &Matrix<S>, w: &Subspace<S>) -> Result<(Matrix<S>, Matrix<S>)> {
    let n = a.n();
    let d = w.dim();
    if w.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("subspace of F^{n}"),
            found: format!("F^{}", w.ambient_dim()),
        });
    }
    if !w.is_invariant_under(a) {
        return Err(Error::NotInvariant);
    }
    let t = extend_basis(w);
    let c = a.conjugate(&t)?;
    Ok((c.block(0, 0, d, d), c.block(d, d, n - d, n - d)))
}

/// Whether `T^-1 S T` is upper triangular for every generator.
pub fn verify_flag<S: Scalar>(gens: &[Matrix<S>], flag: &Flag<S>) -> bool {
    gens.iter().all(|g| {
        g.is_square() && g.n() == flag.n() && g.field() == flag.basis().field() && flag.apply(g).is_upper_triangular()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{FieldDescriptor, Rational};

    const Q: FieldDescriptor = FieldDescriptor::Rational;

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_i64(&Q, rows)
    }

    fn line(xs: &[i64]) -> Subspace<Rational> {
        Subspace::from_vectors(xs.len(), &Q, vec![xs.iter().map(|&x| Rational::from_integer(x)).collect()])
    }

    #[test]
    fn restrict_diagonal() {
        let (r, quo) = restrict_and_quotient(&q(&[&[1, 0], &[0, 2]]), &line(&[1, 0])).unwrap();
        assert_eq!(r, q(&[&[1]]));
        assert_eq!(quo, q(&[&[2]]));
    }

    #[test]
    fn restrict_unipotent_line() {
        let a = q(&[&[0, 1], &[-1, 2]]);
        // (A - I)^2 = 0, so both induced actions are [1]
        let shifted = a.shift(&Rational::from_integer(1));
        assert!(shifted.mul(&shifted).is_zero());
        let (r, quo) = restrict_and_quotient(&a, &line(&[1, 1])).unwrap();
        assert_eq!((r, quo), (q(&[&[1]]), q(&[&[1]])));
    }

    #[test]
    fn restrict_jordan_block() {
        let j3 = q(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let w = Subspace::coordinate(3, &Q, &[0, 1]);
        let (r, quo) = restrict_and_quotient(&j3, &w).unwrap();
        assert_eq!(r, q(&[&[0, 1], &[0, 0]]));
        assert_eq!(quo, q(&[&[0]]));
        assert_eq!(restrict_and_quotient(&j3, &Subspace::coordinate(3, &Q, &[2])), Err(Error::NotInvariant));
    }

    #[test]
    fn verify_flag_examples() {
        let upper = vec![q(&[&[1, 2], &[0, 3]]), q(&[&[4, 0], &[0, 5]])];
        assert!(verify_flag(&upper, &Flag::standard(2, &Q)));
        assert!(!verify_flag(&[q(&[&[0, 1], &[1, 0]])], &Flag::standard(2, &Q)));
        let a = q(&[&[0, 1], &[-1, 2]]);
        let flag = Flag::new(q(&[&[1, 1], &[1, 0]])).unwrap();
        // conjugated lower-left entry must vanish
        assert!(flag.apply(&a).get(1, 0).is_zero());
        assert!(verify_flag(&[a], &flag));
    }

    #[test]
    fn extension_is_greedy_in_index_order() {
        let t = extend_basis(&line(&[0, 1, 1]));
        assert_eq!(t, q(&[&[0, 1, 0], &[1, 0, 1], &[1, 0, 0]]));
    }
}
