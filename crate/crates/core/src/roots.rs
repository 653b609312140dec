//! Base-field root finding for characteristic polynomials.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::{mul_mod, pow_mod};

/// Upper bound on tested `(numerator, denominator)` divisor pairs.
pub const MAX_CANDIDATE_PAIRS: usize = 1_000_000;
const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;
const SCAN_LIMIT: u64 = 1 << 16;

fn trim<T: Zero>(coeffs: &mut Vec<T>) {
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
}

/// Divisors of `n` from a trial-division factorization. A cofactor that
/// survives trial division is treated as prime.
fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = n.clone();
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_LIMIT {
        let big_d = BigUint::from(d);
        if &big_d * &big_d > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &big_d).is_zero() {
            rest /= &big_d;
            e += 1;
        }
        if e > 0 {
            factors.push((big_d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        factors.push((rest, 1));
    }
    let mut out = vec![BigUint::one()];
    for (prime, exp) in factors {
        let mut next = Vec::with_capacity(out.len() * (exp as usize + 1));
        for base in &out {
            let mut term = base.clone();
            next.push(term.clone());
            for _ in 0..exp {
                term *= &prime;
                next.push(term.clone());
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Distinct rational roots via the rational-root theorem.
pub fn rational_roots(coeffs: &[BigRational]) -> Vec<BigRational> {
    let mut coeffs = coeffs.to_vec();
    trim(&mut coeffs);
    if coeffs.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let low = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        roots.push(BigRational::zero());
        coeffs.drain(..low);
    }
    if coeffs.len() <= 1 {
        return roots;
    }

    // Clear denominators and content.
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    for c in &mut ints {
        *c /= &content;
    }
    let degree = ints.len() - 1;

    let nums = divisors(ints[0].magnitude());
    let dens = divisors(ints[degree].magnitude());
    let mut tested = 0usize;
    'outer: for den in &dens {
        for num in &nums {
            if tested >= MAX_CANDIDATE_PAIRS {
                break 'outer;
            }
            tested += 1;
            if !num.gcd(den).is_one() {
                continue;
            }
            for sign in [1i32, -1] {
                let u = BigInt::from(num.clone()) * sign;
                let v = BigInt::from(den.clone());
                // v^d f(u/v) = sum a_i u^i v^(d-i)
                let mut acc = BigInt::zero();
                let mut upow = BigInt::one();
                let mut vpows = vec![BigInt::one(); degree + 1];
                for i in 1..=degree {
                    vpows[i] = &vpows[i - 1] * &v;
                }
                for (i, a) in ints.iter().enumerate() {
                    acc += a * &upow * &vpows[degree - i];
                    upow *= &u;
                }
                if acc.is_zero() {
                    roots.push(BigRational::new(u, v));
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn eval_mod(coeffs: &[u64], x: u64, p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

/// Distinct roots in GF(p): exhaustive scan for small p, otherwise
/// `gcd(f, x^p - x)` followed by deterministic equal-degree splitting.
pub fn prime_field_roots(coeffs: &[u64], p: u64) -> Vec<u64> {
    let mut f: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
    trim(&mut f);
    if f.len() <= 1 {
        return Vec::new();
    }
    if p <= SCAN_LIMIT {
        return (0..p).filter(|&x| eval_mod(&f, x, p) == 0).collect();
    }
    let f = monic(&f, p);
    let xp = poly_pow_mod(&[0, 1], p, &f, p);
    let g = poly_gcd(&poly_sub(&xp, &[0, 1], p), &f, p);
    let mut roots = Vec::new();
    split_linear(&g, p, 0, &mut roots);
    roots.sort_unstable();
    roots.dedup();
    roots
}

fn monic(f: &[u64], p: u64) -> Vec<u64> {
    let lead = *f.last().expect("nonzero polynomial");
    let inv = pow_mod(lead, p - 2, p);
    f.iter().map(|&c| mul_mod(c, inv, p)).collect()
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let mut out: Vec<u64> = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn poly_mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let inv = pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = mul_mod(*r.last().unwrap(), inv, p);
        for (i, &c) in m.iter().enumerate() {
            r[i + shift] = (r[i + shift] + p - mul_mod(factor, c, p)) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_pow_mod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = poly_rem(&[1], m, p);
    let mut b = poly_rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, m, p);
        }
        b = poly_mul_mod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        monic(&a, p)
    }
}

/// Splits a squarefree product of distinct linear factors over odd GF(p).
fn split_linear(g: &[u64], p: u64, mut shift: u64, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push((p - g[0] % p) % p),
        _ => loop {
            let h = poly_pow_mod(&[shift % p, 1], (p - 1) / 2, g, p);
            let d = poly_gcd(&poly_sub(&h, &[1], p), g, p);
            shift += 1;
            if d.len() > 1 && d.len() < g.len() {
                let (q, _) = poly_divmod(g, &d, p);
                split_linear(&d, p, shift, out);
                split_linear(&q, p, shift, out);
                return;
            }
        },
    }
}

fn poly_divmod(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let inv = pow_mod(m[dm], p - 2, p);
    let mut q = vec![0u64; r.len() - dm];
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = mul_mod(*r.last().unwrap(), inv, p);
        q[shift] = factor;
        for (i, &c) in m.iter().enumerate() {
            r[i + shift] = (r[i + shift] + p - mul_mod(factor, c, p)) % p;
        }
        r.pop();
        trim(&mut r);
    }
    (q, r)
}
