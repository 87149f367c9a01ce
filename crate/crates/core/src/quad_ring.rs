//! Exact arithmetic in multi-quadratic rings `Q(sqrt d1, ..., sqrt dj)`.
//!
//! Elements are finite sums `sum c_d * sqrt(d)` over square-free radicands
//! `d` (1 and negatives included). For `d < 0`, `sqrt(d)` is the principal
//! branch `i * sqrt(|d|)`, so `sqrt(d1) * sqrt(d2)` picks up a factor `-1`
//! exactly when both radicands are negative. The basis is not declared up
//! front: products such as `sqrt 3 * sqrt 5 = sqrt 15` simply create new keys.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::numeric::{bits_for_digits, HpComplex, HpReal};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuadError {
    #[error("radicand must be nonzero")]
    ZeroRadicand,
    #[error("radicand {0} is not square-free")]
    NotSquareFree(i64),
}

/// A nonzero square-free integer, the key of one basis element `sqrt(d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Radicand(i64);

impl Radicand {
    pub const ONE: Radicand = Radicand(1);

    pub fn new(d: i64) -> Result<Self, QuadError> {
        let (s, r) = normalize_radical(d)?;
        if s != 1 {
            return Err(QuadError::NotSquareFree(d));
        }
        Ok(r)
    }

    pub fn get(self) -> i64 {
        self.0
    }
}

impl TryFrom<i64> for Radicand {
    type Error = QuadError;
    fn try_from(d: i64) -> Result<Self, QuadError> {
        Radicand::new(d)
    }
}

impl From<Radicand> for i64 {
    fn from(r: Radicand) -> i64 {
        r.0
    }
}

impl fmt::Display for Radicand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Writes `n = s^2 * d` with `d` square-free, `s > 0` and `sign(d) = sign(n)`.
pub fn normalize_radical(n: i64) -> Result<(u64, Radicand), QuadError> {
    if n == 0 {
        return Err(QuadError::ZeroRadicand);
    }
    let mut rest = n.unsigned_abs();
    let mut square = 1u64;
    let mut q = 2u64;
    while q * q <= rest {
        while rest.is_multiple_of(q * q) {
            rest /= q * q;
            square *= q;
        }
        q += 1;
    }
    let d = if n < 0 { -(rest as i64) } else { rest as i64 };
    Ok((square, Radicand(d)))
}

/// `sqrt(a) * sqrt(b) = factor * sqrt(d)`, returned as `(factor, d)`.
pub fn basis_product(a: Radicand, b: Radicand) -> (i64, Radicand) {
    let (x, y) = (a.0 as i128, b.0 as i128);
    let g = x.unsigned_abs().gcd(&y.unsigned_abs()) as i128;
    let d = (x / g) * (y / g);
    let d = i64::try_from(d).expect("radicand product overflows i64");
    let sign = if x < 0 && y < 0 { -1 } else { 1 };
    (sign * g as i64, Radicand(d))
}

/// An element `sum c_d * sqrt(d)` with nonzero rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiQuadElement {
    terms: BTreeMap<Radicand, Rational>,
}

impl MultiQuadElement {
    pub fn zero() -> Self {
        MultiQuadElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::from_basis(Radicand::ONE, r)
    }

    pub fn from_basis(d: Radicand, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(d, c);
        }
        MultiQuadElement { terms }
    }

    /// `sqrt(n)` for any nonzero `n`, normalized to a square-free radicand.
    pub fn sqrt(n: i64) -> Result<Self, QuadError> {
        let (s, d) = normalize_radical(n)?;
        Ok(Self::from_basis(d, Rational::from(s as i64)))
    }

    /// Builds `sum c * sqrt(n)` from arbitrary nonzero `n`, normalizing each
    /// radical and merging equal radicands.
    pub fn from_terms<I>(terms: I) -> Result<Self, QuadError>
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let mut out = MultiQuadElement::zero();
        for (n, c) in terms {
            let (s, d) = normalize_radical(n)?;
            out.add_term(d, c * Rational::from(s as i64));
        }
        Ok(out)
    }

    fn add_term(&mut self, d: Radicand, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&d) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&d);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(d, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `sqrt(d)`, zero when absent.
    pub fn component(&self, d: Radicand) -> Rational {
        self.terms.get(&d).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero components in increasing radicand order.
    pub fn components(&self) -> impl Iterator<Item = (Radicand, &Rational)> {
        self.terms.iter().map(|(d, c)| (*d, c))
    }

    pub fn radicands(&self) -> impl Iterator<Item = Radicand> + '_ {
        self.terms.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        MultiQuadElement { terms: self.terms.iter().map(|(d, c)| (*d, c * r)).collect() }
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Sum of `|c| * sqrt(|d|)` rounded up to an integer; bounds the magnitude
    /// of every embedding.
    pub fn magnitude_bound(&self) -> BigInt {
        let mut total = BigUint::from(0u8);
        for (d, c) in &self.terms {
            let root = (d.0.unsigned_abs() as f64).sqrt().ceil() as u64 + 1;
            total += (c.numer().magnitude() * root).div_ceil(c.denom().magnitude());
        }
        BigInt::from(total)
    }

    /// Fixed-point embedding with absolute error at most
    /// `2 * self.len() + 2` ulps of `frac_bits`.
    pub fn embed_bits(&self, frac_bits: u32) -> HpComplex {
        let mut out = HpComplex::zero(frac_bits);
        for (d, c) in &self.terms {
            let v = HpReal::rational_times_sqrt(c, d.0.unsigned_abs(), frac_bits);
            if d.0 > 0 {
                out.re = out.re.add(&v);
            } else {
                out.im = out.im.add(&v);
            }
        }
        out
    }

    /// Complex embedding accurate to `10^-digits` relative error.
    ///
    /// Fixed-point evaluation has absolute error, so elements that are tiny
    /// because of cancellation (such as `-18872 - 13344 sqrt 2 + ...`) are
    /// re-evaluated with more bits until the relative bound holds.
    pub fn embed(&self, digits: u32) -> HpComplex {
        let mut frac_bits = bits_for_digits(digits.max(1) + 10);
        if self.is_zero() {
            return HpComplex::zero(frac_bits);
        }
        let ulps = BigInt::from(2 * self.len() as u64 + 2) * BigInt::from(10).pow(digits);
        loop {
            let v = self.embed_bits(frac_bits);
            if *v.max_abs().mantissa() >= ulps {
                return v;
            }
            frac_bits += frac_bits / 2 + 64;
        }
    }
}

impl fmt::Display for MultiQuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *d == Radicand::ONE {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*sqrt({d})")?;
            }
        }
        Ok(())
    }
}

impl Add<&MultiQuadElement> for &MultiQuadElement {
    type Output = MultiQuadElement;
    fn add(self, rhs: &MultiQuadElement) -> MultiQuadElement {
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.add_term(*d, c.clone());
        }
        out
    }
}

impl Sub<&MultiQuadElement> for &MultiQuadElement {
    type Output = MultiQuadElement;
    fn sub(self, rhs: &MultiQuadElement) -> MultiQuadElement {
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.add_term(*d, -c);
        }
        out
    }
}

impl Neg for &MultiQuadElement {
    type Output = MultiQuadElement;
    fn neg(self) -> MultiQuadElement {
        MultiQuadElement { terms: self.terms.iter().map(|(d, c)| (*d, -c)).collect() }
    }
}

impl Mul<&MultiQuadElement> for &MultiQuadElement {
    type Output = MultiQuadElement;
    fn mul(self, rhs: &MultiQuadElement) -> MultiQuadElement {
        let mut out = MultiQuadElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let (factor, d) = basis_product(*a, *b);
                out.add_term(d, x * y * Rational::from(factor));
            }
        }
        out
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<MultiQuadElement> for MultiQuadElement {
            type Output = MultiQuadElement;
            fn $method(self, rhs: MultiQuadElement) -> MultiQuadElement {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for MultiQuadElement {
    type Output = MultiQuadElement;
    fn neg(self) -> MultiQuadElement {
        -&self
    }
}
