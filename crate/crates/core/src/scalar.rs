//! Exact field arithmetic over ℚ and GF(p).
//!
//! Both fields implement [`Scalar`]. Elements of GF(p) carry their modulus, so a
//! zero or one is always built from a [`FieldDescriptor`].

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldDescriptor {
    Rational,
    Prime(u64),
}

impl FieldDescriptor {
    /// GF(p), rejecting composite or trivial moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldDescriptor::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Rational => 0,
            FieldDescriptor::Prime(p) => *p,
        }
    }

    /// Number of elements, `None` for ℚ.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldDescriptor::Rational => None,
            FieldDescriptor::Prime(p) => Some(*p),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "Q"),
            FieldDescriptor::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// Deterministic Miller-Rabin for 64-bit moduli.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let (mut d, mut s) = (n - 1, 0u32);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Field element interface shared by every exact algorithm in the crate.
///
/// Arithmetic between elements of different fields is a logic error and is
/// only caught by [`field_op`] and [`field_eq`].
pub trait Scalar: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn field(&self) -> FieldDescriptor;
    /// Whether this representation can hold elements of `field`.
    fn accepts(field: &FieldDescriptor) -> bool;
    fn zero(field: &FieldDescriptor) -> Self;
    fn one(field: &FieldDescriptor) -> Self;
    fn from_i64(value: i64, field: &FieldDescriptor) -> Self;
    fn is_zero(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;

    /// Parses the text form: `"a/b"` or `"a"` in decimal.
    fn parse(text: &str, field: &FieldDescriptor) -> Result<Self>;

    /// Distinct roots lying in the base field of the polynomial with the given
    /// coefficients (lowest degree first).
    fn base_field_roots(coeffs: &[Self]) -> Vec<Self>;

    /// Inverse of `x -> x^(p^e)` in characteristic `p`.
    fn frobenius_root(&self, e: u32) -> Self;

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    fn is_one(&self) -> bool {
        *self == Self::one(&self.field())
    }

    fn from_ratio(num: i64, den: i64, field: &FieldDescriptor) -> Result<Self> {
        Self::from_i64(num, field).div(&Self::from_i64(den, field))
    }

    fn pow(&self, mut exp: u64) -> Self {
        let mut acc = Self::one(&self.field());
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
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic: fails on mixed fields or division by zero.
pub fn field_op<S: Scalar>(op: FieldOp, a: &S, b: &S) -> Result<S> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field(), b.field()));
    }
    Ok(match op {
        FieldOp::Add => a.add(b),
        FieldOp::Sub => a.sub(b),
        FieldOp::Mul => a.mul(b),
        FieldOp::Div => a.div(b)?,
    })
}

/// Checked equality: elements of different fields are not comparable.
pub fn field_eq<S: Scalar>(a: &S, b: &S) -> Result<bool> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field(), b.field()));
    }
    Ok(a == b)
}

fn parse_err(text: &str, reason: &str) -> Error {
    Error::ParseScalar { text: text.to_string(), reason: reason.to_string() }
}

/// Splits `"-12/5"` into signed numerator and unsigned denominator digits.
fn parse_fraction(text: &str) -> Result<(BigInt, BigInt)> {
    fn integer(part: &str, signed: bool, whole: &str) -> Result<BigInt> {
        let digits = if signed { part.strip_prefix('-').unwrap_or(part) } else { part };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(parse_err(whole, "expected decimal digits"));
        }
        part.parse::<BigInt>().map_err(|e| parse_err(whole, &e.to_string()))
    }
    let trimmed = text.trim();
    match trimmed.split_once('/') {
        None => Ok((integer(trimmed, true, text)?, BigInt::one())),
        Some((num, den)) => {
            let num = integer(num, true, text)?;
            let den = integer(den, false, text)?;
            if den.is_zero() {
                return Err(parse_err(text, "zero denominator"));
            }
            Ok((num, den))
        }
    }
}

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn from_big(value: BigRational) -> Self {
        Rational(value)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // Both parts overflow f64; scale them down together.
            let shift = self.0.numer().bits().max(self.0.denom().bits()).saturating_sub(1000);
            let n = (self.0.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (self.0.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Scalar for Rational {
    fn field(&self) -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn accepts(field: &FieldDescriptor) -> bool {
        matches!(field, FieldDescriptor::Rational)
    }

    fn zero(_: &FieldDescriptor) -> Self {
        Rational(BigRational::zero())
    }

    fn one(_: &FieldDescriptor) -> Self {
        Rational(BigRational::one())
    }

    fn from_i64(value: i64, _: &FieldDescriptor) -> Self {
        Rational::from_integer(value)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn is_one(&self) -> bool {
        self.0.is_one()
    }

    fn add(&self, rhs: &Self) -> Self {
        Rational(&self.0 + &rhs.0)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Rational(&self.0 - &rhs.0)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Rational(&self.0 * &rhs.0)
    }

    fn neg(&self) -> Self {
        Rational(-&self.0)
    }

    fn inv(&self) -> Result<Self> {
        if self.0.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Rational(self.0.recip()))
        }
    }

    fn parse(text: &str, field: &FieldDescriptor) -> Result<Self> {
        if !Self::accepts(field) {
            return Err(parse_err(text, "rational scalar requested for a prime field"));
        }
        let (num, den) = parse_fraction(text)?;
        Ok(Rational(BigRational::new(num, den)))
    }

    fn base_field_roots(coeffs: &[Self]) -> Vec<Self> {
        let big: Vec<BigRational> = coeffs.iter().map(|c| c.0.clone()).collect();
        roots::rational_roots(&big).into_iter().map(Rational).collect()
    }

    fn frobenius_root(&self, e: u32) -> Self {
        // characteristic zero: only the trivial power map
        debug_assert_eq!(e, 0);
        self.clone()
    }
}

/// Residue modulo a prime `p`, stored in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    residue: u64,
    p: u64,
}

impl Fp {
    pub fn new(value: u64, p: u64) -> Self {
        Fp { residue: value % p, p }
    }

    pub fn from_signed(value: i64, p: u64) -> Self {
        Fp::from_i64(value, &FieldDescriptor::Prime(p))
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// All elements of GF(p) in residue order.
    pub fn all(p: u64) -> impl Iterator<Item = Fp> {
        (0..p).map(move |r| Fp { residue: r, p })
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl Scalar for Fp {
    fn field(&self) -> FieldDescriptor {
        FieldDescriptor::Prime(self.p)
    }

    fn accepts(field: &FieldDescriptor) -> bool {
        matches!(field, FieldDescriptor::Prime(_))
    }

    fn zero(field: &FieldDescriptor) -> Self {
        Fp { residue: 0, p: field.characteristic() }
    }

    fn one(field: &FieldDescriptor) -> Self {
        Fp::new(1, field.characteristic())
    }

    fn from_i64(value: i64, field: &FieldDescriptor) -> Self {
        let p = field.characteristic();
        let r = (value as i128).rem_euclid(p as i128) as u64;
        Fp { residue: r, p }
    }

    fn is_zero(&self) -> bool {
        self.residue == 0
    }

    fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        let s = self.residue as u128 + rhs.residue as u128;
        Fp { residue: (s % self.p as u128) as u64, p: self.p }
    }

    fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        let r = if self.residue >= rhs.residue {
            self.residue - rhs.residue
        } else {
            self.p - (rhs.residue - self.residue)
        };
        Fp { residue: r, p: self.p }
    }

    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        Fp { residue: mul_mod(self.residue, rhs.residue, self.p), p: self.p }
    }

    fn neg(&self) -> Self {
        if self.residue == 0 {
            *self
        } else {
            Fp { residue: self.p - self.residue, p: self.p }
        }
    }

    fn inv(&self) -> Result<Self> {
        if self.residue == 0 {
            return Err(Error::DivisionByZero);
        }
        // Extended Euclid on signed 128-bit to stay exact for any 64-bit p.
        let ext = (self.residue as i128).extended_gcd(&(self.p as i128));
        let r = ext.x.rem_euclid(self.p as i128) as u64;
        Ok(Fp { residue: r, p: self.p })
    }

    fn parse(text: &str, field: &FieldDescriptor) -> Result<Self> {
        let FieldDescriptor::Prime(p) = *field else {
            return Err(parse_err(text, "prime-field scalar requested for Q"));
        };
        let (num, den) = parse_fraction(text)?;
        let modulus = BigInt::from(p);
        let reduce = |v: BigInt| Fp::new(v.mod_floor(&modulus).to_u64().unwrap_or(0), p);
        let den = reduce(den);
        if den.is_zero() {
            return Err(parse_err(text, "denominator vanishes modulo p"));
        }
        reduce(num).div(&den)
    }

    fn base_field_roots(coeffs: &[Self]) -> Vec<Self> {
        let Some(first) = coeffs.first() else {
            return Vec::new();
        };
        let p = first.p;
        let residues: Vec<u64> = coeffs.iter().map(|c| c.residue).collect();
        roots::prime_field_roots(&residues, p).into_iter().map(|r| Fp { residue: r, p }).collect()
    }

    fn frobenius_root(&self, e: u32) -> Self {
        frobenius_root(self, e)
    }
}

/// Inverse of the `p^e`-th power map on GF(p).
///
/// Over a prime field the Frobenius map `x -> x^p` is the identity by Fermat,
/// so the root is `a` itself. Kept as a named entry point because the
/// characteristic-p eigenvalue extraction recovers `c` from `c^(p^e)`.
pub fn frobenius_root(a: &Fp, _e: u32) -> Fp {
    *a
}
