//! Multiplicative closures of finite generator sets.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub const DEFAULT_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureConfig {
    pub cap: usize,
    /// Keep the zero matrix when a product vanishes.
    pub include_zero: bool,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig { cap: DEFAULT_CAP, include_zero: false }
    }
}

/// Distinct elements of the semigroup generated by a finite set, in discovery
/// order: generators first, then products breadth first.
#[derive(Debug, Clone)]
pub struct SemigroupClosure<S: Scalar> {
    elements: Vec<Matrix<S>>,
    generator_count: usize,
    cap: usize,
    truncated: bool,
    include_zero: bool,
}

impl<S: Scalar> SemigroupClosure<S> {
    pub fn elements(&self) -> &[Matrix<S>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn include_zero(&self) -> bool {
        self.include_zero
    }

    /// Exhaustive check that every product of two elements is again an
    /// element (or zero, when zero is excluded).
    pub fn is_closed(&self) -> bool {
        let set: HashSet<&Matrix<S>> = self.elements.iter().collect();
        self.elements.iter().all(|a| {
            self.elements.iter().all(|b| {
                let ab = a.mul(b);
                set.contains(&ab) || (!self.include_zero && ab.is_zero())
            })
        })
    }
}

pub fn closure<S: Scalar>(gens: &[Matrix<S>], cap: usize) -> SemigroupClosure<S> {
    closure_with(gens, ClosureConfig { cap, ..ClosureConfig::default() })
}

pub fn closure_with<S: Scalar>(gens: &[Matrix<S>], config: ClosureConfig) -> SemigroupClosure<S> {
    let mut out = SemigroupClosure {
        elements: Vec::new(),
        generator_count: gens.len(),
        cap: config.cap,
        truncated: false,
        include_zero: config.include_zero,
    };
    let mut seen: HashSet<Matrix<S>> = HashSet::new();

    // Returns false once the cap would be exceeded.
    let mut admit = |m: Matrix<S>, out: &mut SemigroupClosure<S>| -> bool {
        if (!config.include_zero && m.is_zero()) || seen.contains(&m) {
            return true;
        }
        if out.elements.len() == config.cap {
            out.truncated = true;
            return false;
        }
        seen.insert(m.clone());
        out.elements.push(m);
        true
    };

    for g in gens {
        if !admit(g.clone(), &mut out) {
            return out;
        }
    }
    let mut next = 0;
    while next < out.elements.len() {
        let x = out.elements[next].clone();
        for g in gens {
            if !admit(x.mul(g), &mut out) {
                return out;
            }
        }
        next += 1;
    }
    out
}

/// Nilpotent elements of a complete closure. On a complete closure these form
/// a two-sided semigroup ideal.
pub fn nilpotent_ideal<S: Scalar>(closure: &SemigroupClosure<S>) -> Result<Vec<Matrix<S>>> {
    if closure.truncated {
        return Err(Error::TruncatedClosure { cap: closure.cap });
    }
    Ok(closure.elements.iter().filter(|m| m.is_nilpotent()).cloned().collect())
}

/// Elements with determinant exactly one.
pub fn unit_determinant_subsemigroup<S: Scalar>(closure: &SemigroupClosure<S>) -> Vec<Matrix<S>> {
    closure.elements.iter().filter(|m| m.det().is_one()).cloned().collect()
}

/// Counts pairs `(S, J)` with `J` in `ideal` where `SJ` or `JS` is a nonzero
/// non-member of `ideal`.
pub fn ideal_violations<S: Scalar>(closure: &SemigroupClosure<S>, ideal: &[Matrix<S>]) -> usize {
    let members: HashSet<&Matrix<S>> = ideal.iter().collect();
    let ok = |m: &Matrix<S>| members.contains(m) || m.is_zero();
    closure
        .elements
        .iter()
        .flat_map(|s| ideal.iter().map(move |j| (s, j)))
        .filter(|(s, j)| !ok(&s.mul(j)) || !ok(&j.mul(s)))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{FieldDescriptor, Fp, Rational};

    const Q: FieldDescriptor = FieldDescriptor::Rational;

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_i64(&Q, rows)
    }

    fn j3() -> Matrix<Rational> {
        q(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]])
    }

    #[test]
    fn nilpotent_jordan_closure() {
        let c = closure(&[j3()], 100);
        assert!(!c.truncated());
        assert_eq!(c.elements(), &[j3(), j3().mul(&j3())]);
        assert!(c.is_closed());
        let with_zero = closure_with(&[j3()], ClosureConfig { cap: 100, include_zero: true });
        assert_eq!(with_zero.len(), 3);
        assert!(with_zero.is_closed());
    }

    #[test]
    fn rotation_group() {
        let r = q(&[&[0, -1], &[1, 0]]);
        let c = closure(std::slice::from_ref(&r), 100);
        // multiply out: R, R^2 = -I, R^3 = -R, R^4 = I
        let expected = vec![r.clone(), r.pow(2), r.pow(3), Matrix::identity(2, &Q)];
        assert_eq!(c.elements(), expected.as_slice());
        assert!(!c.truncated());
        assert!(c.is_closed());
        assert!(nilpotent_ideal(&c).unwrap().is_empty());
        assert_eq!(unit_determinant_subsemigroup(&c).len(), 4);
    }

    #[test]
    fn unipotent_generator_truncates() {
        let c = closure(&[q(&[&[1, 1], &[0, 1]])], 100);
        assert!(c.truncated());
        assert_eq!(c.len(), 100);
        assert_eq!(nilpotent_ideal(&c), Err(Error::TruncatedClosure { cap: 100 }));
    }

    #[test]
    fn nilpotent_sublists() {
        let c = closure(&[j3()], 100);
        assert_eq!(nilpotent_ideal(&c).unwrap().len(), 2);
        let a = q(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        let c = closure(std::slice::from_ref(&a), 100);
        assert_eq!(c.elements(), std::slice::from_ref(&a));
        assert_eq!(nilpotent_ideal(&c).unwrap(), vec![a]);
    }

    #[test]
    fn mixed_semigroup_ideal() {
        // E11 idempotent together with the nilpotent E12
        let e11 = q(&[&[1, 0], &[0, 0]]);
        let e12 = q(&[&[0, 1], &[0, 0]]);
        let c = closure(&[e11, e12.clone()], 100);
        assert!(!c.truncated());
        let ideal = nilpotent_ideal(&c).unwrap();
        assert_eq!(ideal, vec![e12]);
        assert_eq!(ideal_violations(&c, &ideal), 0);
    }

    #[test]
    fn unit_determinant_examples() {
        let c = closure(&[q(&[&[2, 0], &[0, 2]])], 20);
        assert!(unit_determinant_subsemigroup(&c).is_empty());
        let half = Rational::new(1, 2).unwrap();
        let mut d = Matrix::scalar(2, &half);
        d.set(0, 0, Rational::from_integer(2));
        let c = closure(&[d.clone()], 30);
        // diag(2^k, 2^-k)
        for (k, m) in c.elements().iter().enumerate() {
            assert_eq!(*m, d.pow(k as u64 + 1));
        }
        assert_eq!(unit_determinant_subsemigroup(&c).len(), 30);
    }

    #[test]
    fn finite_field_group_is_complete() {
        let gf3 = FieldDescriptor::Prime(3);
        let a = Matrix::<Fp>::from_i64(&gf3, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let b = Matrix::<Fp>::from_i64(&gf3, &[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]);
        let c = closure(&[a, b], 1000);
        assert!(!c.truncated());
        // Heisenberg group over GF(3)
        assert_eq!(c.len(), 27);
        assert!(c.is_closed());
        let s1 = unit_determinant_subsemigroup(&c);
        assert_eq!(s1.len(), 27);
    }
}
