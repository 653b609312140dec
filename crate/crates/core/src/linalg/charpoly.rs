//! Division-free characteristic polynomial.
//!
//! Berkowitz's algorithm peels off the first row and column: for
//! `A = [[a, R], [C, A']]` the coefficient vector of `det(xI - A)` is a lower
//! triangular Toeplitz matrix with first column `1, -a, -RC, -RA'C, ...`
//! applied to the coefficient vector of `A'`. Only ring operations are used, so
//! the same code serves every characteristic.

use crate::linalg::{Matrix, Polynomial};
use crate::scalar::Scalar;

pub fn berkowitz<S: Scalar>(a: &Matrix<S>) -> Polynomial<S> {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let field = a.field();
    let n = a.n();
    // Coefficients highest degree first, starting from the empty trailing block.
    let mut vector = vec![S::one(&field)];
    for start in (0..n).rev() {
        let m = n - start; // size of the current trailing block
        let corner = a.get(start, start);
        let row: Vec<S> = (start + 1..n).map(|j| a.get(start, j).clone()).collect();
        let mut col: Vec<S> = (start + 1..n).map(|i| a.get(i, start).clone()).collect();

        let mut first_column = Vec::with_capacity(m + 1);
        first_column.push(S::one(&field));
        first_column.push(corner.neg());
        for _ in 0..m.saturating_sub(1) {
            let dot = row.iter().zip(&col).fold(S::zero(&field), |acc, (r, c)| acc.add(&r.mul(c)));
            first_column.push(dot.neg());
            col = (start + 1..n)
                .map(|i| (start + 1..n).zip(&col).fold(S::zero(&field), |acc, (j, c)| acc.add(&a.get(i, j).mul(c))))
                .collect();
        }

        // (m+1) x m Toeplitz times the previous vector of length m.
        vector = (0..=m)
            .map(|i| (0..m.min(i + 1)).fold(S::zero(&field), |acc, j| acc.add(&first_column[i - j].mul(&vector[j]))))
            .collect();
    }
    vector.reverse();
    Polynomial::new(vector)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{FieldDescriptor, Rational};

    const Q: FieldDescriptor = FieldDescriptor::Rational;

    fn ints(p: &Polynomial<Rational>) -> Vec<i64> {
        p.coeffs().iter().map(|c| c.to_f64() as i64).collect()
    }

    /// Cofactor expansion of det(xI - A) with polynomial entries.
    fn cofactor_charpoly(a: &[Vec<i64>]) -> Vec<i64> {
        fn pmul(x: &[i64], y: &[i64]) -> Vec<i64> {
            let mut out = vec![0; x.len() + y.len() - 1];
            for (i, a) in x.iter().enumerate() {
                for (j, b) in y.iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            out
        }
        fn padd(x: &[i64], y: &[i64], sign: i64) -> Vec<i64> {
            let mut out = vec![0; x.len().max(y.len())];
            for (i, v) in x.iter().enumerate() {
                out[i] += v;
            }
            for (i, v) in y.iter().enumerate() {
                out[i] += sign * v;
            }
            out
        }
        fn det(m: &[Vec<Vec<i64>>]) -> Vec<i64> {
            if m.len() == 1 {
                return m[0][0].clone();
            }
            let mut acc = vec![0];
            for j in 0..m.len() {
                let minor: Vec<Vec<Vec<i64>>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, e)| e.clone()).collect())
                    .collect();
                let term = pmul(&m[0][j], &det(&minor));
                acc = padd(&acc, &term, if j % 2 == 0 { 1 } else { -1 });
            }
            acc
        }
        let n = a.len();
        let m: Vec<Vec<Vec<i64>>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { vec![-a[i][j], 1] } else { vec![-a[i][j]] }).collect()).collect();
        let mut out = det(&m);
        while out.len() > 1 && *out.last().unwrap() == 0 {
            out.pop();
        }
        out
    }

    #[test]
    fn nilpotent_block() {
        let a = Matrix::<Rational>::from_i64(&Q, &[&[0, 1], &[0, 0]]);
        assert_eq!(ints(&a.charpoly()), vec![0, 0, 1]);
    }

    #[test]
    fn identity_three() {
        let a = Matrix::<Rational>::identity(3, &Q);
        assert_eq!(ints(&a.charpoly()), vec![-1, 3, -3, 1]);
    }

    #[test]
    fn two_by_two_against_cofactor_oracle() {
        let oracle = cofactor_charpoly(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(oracle, vec![-2, -5, 1]);
        let a = Matrix::<Rational>::from_i64(&Q, &[&[1, 2], &[3, 4]]);
        assert_eq!(ints(&a.charpoly()), oracle);
    }

    #[test]
    fn four_by_four_against_cofactor_oracle() {
        let rows = vec![vec![2, -1, 0, 3], vec![1, 0, 4, -2], vec![0, 5, -3, 1], vec![7, 1, 1, 0]];
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let a = Matrix::<Rational>::from_i64(&Q, &refs);
        assert_eq!(ints(&a.charpoly()), cofactor_charpoly(&rows));
    }

    #[test]
    fn one_by_one_and_empty() {
        let a = Matrix::<Rational>::from_i64(&Q, &[&[7]]);
        assert_eq!(ints(&a.charpoly()), vec![-7, 1]);
    }
}
