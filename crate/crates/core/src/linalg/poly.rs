use std::fmt;

use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Univariate polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(S::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// `x - c`.
    pub fn linear(c: &S) -> Self {
        Polynomial { coeffs: vec![c.neg(), S::one(&c.field())] }
    }

    /// `(x - c)^n`, expanded in the field.
    pub fn power_of_linear(c: &S, n: usize) -> Self {
        let field = c.field();
        (0..n).fold(Polynomial::new(vec![S::one(&field)]), |acc, _| acc.mul(&Polynomial::linear(c)))
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&S> {
        self.coeffs.get(i)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(S::is_one)
    }

    pub fn mul(&self, rhs: &Polynomial<S>) -> Polynomial<S> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial { coeffs: Vec::new() };
        }
        let field = self.coeffs[0].field();
        let mut out = vec![S::zero(&field); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Polynomial::new(out)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Polynomial<S>) -> (Polynomial<S>, Polynomial<S>) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[dd].inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Polynomial { coeffs: Vec::new() }, self.clone());
        }
        let field = divisor.coeffs[0].field();
        let mut quot = vec![S::zero(&field); rem.len() - dd];
        for shift in (0..quot.len()).rev() {
            let factor = rem[shift + dd].mul(&lead_inv);
            if factor.is_zero() {
                continue;
            }
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = rem[shift + i].sub(&factor.mul(c));
            }
            quot[shift] = factor;
        }
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    pub fn eval(&self, x: &S) -> S {
        let field = x.field();
        self.coeffs.iter().rev().fold(S::zero(&field), |acc, c| acc.mul(x).add(c))
    }

    /// `p(A)` by Horner's rule.
    pub fn eval_matrix(&self, a: &Matrix<S>) -> Matrix<S> {
        let field = a.field();
        let n = a.n();
        self.coeffs.iter().rev().fold(Matrix::zeros(n, n, &field), |acc, c| acc.mul(a).add(&Matrix::scalar(n, c)))
    }

    /// Distinct roots in the base field with their multiplicities.
    pub fn roots_with_multiplicity(&self) -> Vec<(S, usize)> {
        let mut out = Vec::new();
        for root in S::base_field_roots(&self.coeffs) {
            let lin = Polynomial::linear(&root);
            let mut rest = self.clone();
            let mut mult = 0;
            loop {
                let (q, r) = rest.div_rem(&lin);
                if !r.is_zero() || rest.degree().unwrap_or(0) == 0 {
                    break;
                }
                rest = q;
                mult += 1;
            }
            out.push((root, mult));
        }
        out
    }
}

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}
