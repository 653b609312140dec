//! Singleton-spectrum detection.
//!
//! A matrix has singleton spectrum `{c}` over the algebraic closure iff it is
//! `cI + N` with `N` nilpotent. For the fields supported here `c` always lies
//! in the base field, so no extension arithmetic is needed:
//!
//! * characteristic 0, or characteristic `p` not dividing `n`: the trace is
//!   `n c` and `n` is invertible, so `c = trace / n`;
//! * characteristic `p` dividing `n = p^e m` with `p ∤ m`: the characteristic
//!   polynomial is `(x - c)^n = (x^(p^e) - c^(p^e))^m`, whose coefficient at
//!   `x^(p^e (m-1))` is `-m c^(p^e)`. This determines `c^(p^e)`, and `c` is its
//!   unique `p^e`-th root because GF(p) is perfect (the Frobenius map is a
//!   bijection, in fact the identity).
//!
//! In both branches the candidate is then confirmed by `(A - cI)^n = 0`.

use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport<S> {
    pub singleton: bool,
    /// The unique eigenvalue, when `singleton`.
    pub eigenvalue: Option<S>,
    /// Smallest `k >= 1` with `(A - cI)^k = 0`, when `singleton`.
    pub nil_index: Option<usize>,
}

impl<S> SpectrumReport<S> {
    fn not_singleton() -> Self {
        SpectrumReport { singleton: false, eigenvalue: None, nil_index: None }
    }
}

/// Candidate eigenvalue from the trace or, when `p | n`, from the
/// characteristic polynomial.
fn candidate_eigenvalue<S: Scalar>(a: &Matrix<S>) -> Option<S> {
    let n = a.n();
    let field = a.field();
    let p = field.characteristic();
    if p == 0 || !(n as u64).is_multiple_of(p) {
        let n_elem = S::from_i64(n as i64, &field);
        return a.trace().div(&n_elem).ok();
    }
    let (mut m, mut e, mut pe) = (n as u64, 0u32, 1u64);
    while m % p == 0 {
        m /= p;
        e += 1;
        pe *= p;
    }
    let charpoly = a.charpoly();
    let index = (pe * (m - 1)) as usize;
    let coeff = charpoly.coeff(index)?;
    let m_elem = S::from_i64(m as i64, &field);
    let c_pe = coeff.neg().div(&m_elem).ok()?;
    Some(c_pe.frobenius_root(e))
}

pub fn singleton_spectrum<S: Scalar>(a: &Matrix<S>) -> SpectrumReport<S> {
    let n = a.n();
    let Some(c) = candidate_eigenvalue(a) else {
        return SpectrumReport::not_singleton();
    };
    let shifted = a.shift(&c);
    let mut power = shifted.clone();
    for k in 1..=n {
        if power.is_zero() {
            return SpectrumReport { singleton: true, eigenvalue: Some(c), nil_index: Some(k) };
        }
        if k < n {
            power = power.mul(&shifted);
        }
    }
    SpectrumReport::not_singleton()
}

/// `(A - I)^n = 0`.
pub fn is_unipotent<S: Scalar>(a: &Matrix<S>) -> bool {
    a.shift(&S::one(&a.field())).is_nilpotent()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Polynomial;
    use crate::scalar::{FieldDescriptor, Fp, Rational};
    use proptest::prelude::*;

    const Q: FieldDescriptor = FieldDescriptor::Rational;

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_i64(&Q, rows)
    }

    fn gf(p: u64, rows: &[&[i64]]) -> Matrix<Fp> {
        Matrix::from_i64(&FieldDescriptor::Prime(p), rows)
    }

    #[test]
    fn jordan_block() {
        let r = singleton_spectrum(&q(&[&[2, 1], &[0, 2]]));
        assert_eq!(
            r,
            SpectrumReport { singleton: true, eigenvalue: Some(Rational::from_integer(2)), nil_index: Some(2) }
        );
    }

    #[test]
    fn two_eigenvalues() {
        assert!(!singleton_spectrum(&q(&[&[1, 0], &[0, 2]])).singleton);
    }

    #[test]
    fn char_two_dividing_dimension() {
        let a = gf(2, &[&[1, 1], &[0, 1]]);
        // oracle: (A - I)^2 by direct multiplication
        let shifted = gf(2, &[&[0, 1], &[0, 0]]);
        assert!(shifted.mul(&shifted).is_zero());
        let r = singleton_spectrum(&a);
        assert!(r.singleton);
        assert_eq!(r.eigenvalue, Some(Fp::new(1, 2)));
        assert_eq!(r.nil_index, Some(2));
    }

    #[test]
    fn swap_is_unipotent_in_char_two() {
        let a = gf(2, &[&[0, 1], &[1, 0]]);
        let n = gf(2, &[&[1, 1], &[1, 1]]);
        assert_eq!(a.sub(&Matrix::identity(2, &FieldDescriptor::Prime(2))), n);
        assert!(n.mul(&n).is_zero());
        let r = singleton_spectrum(&a);
        assert!(r.singleton);
        assert_eq!(r.eigenvalue, Some(Fp::new(1, 2)));
        assert!(is_unipotent(&a));
    }

    #[test]
    fn char_two_with_no_candidate() {
        // [[0,1],[1,1]] has charpoly x^2 + x + 1, irreducible over GF(2)
        assert!(!singleton_spectrum(&gf(2, &[&[0, 1], &[1, 1]])).singleton);
        // diag(0, 1): trace path would divide by 2
        assert!(!singleton_spectrum(&gf(2, &[&[0, 0], &[0, 1]])).singleton);
    }

    #[test]
    fn unipotent_examples() {
        assert!(is_unipotent(&Matrix::<Rational>::identity(3, &Q)));
        assert!(is_unipotent(&q(&[&[1, 5], &[0, 1]])));
        assert!(!is_unipotent(&q(&[&[2, 0], &[0, 2]])));
        assert!(singleton_spectrum(&q(&[&[2, 0], &[0, 2]])).singleton);
    }

    /// Unit lower times unit upper triangular, hence invertible.
    fn unit_lu<S: Scalar>(field: &FieldDescriptor, n: usize, lower: &[i64], upper: &[i64]) -> Matrix<S> {
        let mut l = Matrix::identity(n, field);
        let mut u = Matrix::identity(n, field);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                u.set(i, j, S::from_i64(upper[k], field));
                l.set(j, i, S::from_i64(lower[k], field));
                k += 1;
            }
        }
        l.mul(&u)
    }

    /// `P (cI + N) P^-1` for strictly upper triangular `N`.
    fn conjugated_singleton<S: Scalar>(
        field: &FieldDescriptor,
        n: usize,
        c: i64,
        strict: &[i64],
        lower: &[i64],
        upper: &[i64],
    ) -> (Matrix<S>, S) {
        let c = S::from_i64(c, field);
        let mut base = Matrix::scalar(n, &c);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                base.set(i, j, S::from_i64(strict[k], field));
                k += 1;
            }
        }
        let p = unit_lu::<S>(field, n, lower, upper);
        (p.mul(&base).mul(&p.inverse().unwrap()), c)
    }

    fn instance() -> impl Strategy<Value = (u64, usize, i64, Vec<i64>, Vec<i64>, Vec<i64>)> {
        (prop_oneof![Just(0u64), Just(2), Just(3), Just(5), Just(7)], 1usize..=6).prop_flat_map(|(p, n)| {
            let k = n * (n - 1) / 2;
            let c = if p == 0 { (-5i64..=5).boxed() } else { (1i64..p as i64).boxed() };
            (
                Just(p),
                Just(n),
                c,
                prop::collection::vec(-4i64..=4, k),
                prop::collection::vec(-3i64..=3, k),
                prop::collection::vec(-3i64..=3, k),
            )
        })
    }

    fn check_singleton<S: Scalar>(a: &Matrix<S>, c: &S) {
        let r = singleton_spectrum(a);
        assert!(r.singleton, "{a:?}");
        assert_eq!(r.eigenvalue.as_ref(), Some(c));
        let k = r.nil_index.unwrap();
        assert!((1..=a.n()).contains(&k));
        assert_eq!(a.charpoly(), Polynomial::power_of_linear(c, a.n()));
        assert_eq!(is_unipotent(a), c.is_one());
    }

    proptest! {
        #[test]
        fn constructed_singletons_are_detected((p, n, c, strict, lower, upper) in instance()) {
            if p == 0 {
                let (a, c) = conjugated_singleton::<Rational>(&Q, n, c, &strict, &lower, &upper);
                check_singleton(&a, &c);
            } else {
                let field = FieldDescriptor::Prime(p);
                let (a, c) = conjugated_singleton::<Fp>(&field, n, c, &strict, &lower, &upper);
                check_singleton(&a, &c);
            }
        }

        #[test]
        fn report_is_conjugation_invariant(
            entries in prop::collection::vec(-3i64..=3, 16),
            lower in prop::collection::vec(-2i64..=2, 6),
            upper in prop::collection::vec(-2i64..=2, 6),
            p in prop_oneof![Just(2u64), Just(3), Just(0)],
        ) {
            fn run<S: Scalar>(field: &FieldDescriptor, entries: &[i64], lower: &[i64], upper: &[i64]) {
                let rows: Vec<&[i64]> = entries.chunks(4).collect();
                let a = Matrix::<S>::from_i64(field, &rows);
                let p = unit_lu::<S>(field, 4, lower, upper);
                let conj = a.conjugate(&p).unwrap();
                let (ra, rc) = (singleton_spectrum(&a), singleton_spectrum(&conj));
                assert_eq!(ra, rc);
                assert_eq!(is_unipotent(&a), ra.singleton && ra.eigenvalue.unwrap().is_one());
            }
            if p == 0 {
                run::<Rational>(&Q, &entries, &lower, &upper);
            } else {
                run::<Fp>(&FieldDescriptor::Prime(p), &entries, &lower, &upper);
            }
        }
    }
}
