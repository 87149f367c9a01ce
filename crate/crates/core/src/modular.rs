//! Residue arithmetic modulo odd prime powers.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("denominator is divisible by {prime}")]
    DenominatorNotInvertible { prime: u64 },
    #[error("{value} is not invertible modulo {modulus}")]
    NotCoprime { value: String, modulus: String },
    #[error("modulus must be at least 2")]
    ModulusTooSmall,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("{prime}^{exponent} does not fit in 64 bits")]
    ModulusTooLarge { prime: u64, exponent: u32 },
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn check_odd_prime(p: u64) -> Result<(), ArithError> {
    if p == 2 || !is_prime_u64(p) {
        return Err(ArithError::NotOddPrime(p));
    }
    Ok(())
}

/// Inverse of `a` modulo `m` by extended Euclid, in `[0, m)`.
pub fn mod_inverse(a: &BigInt, m: &BigUint) -> Result<BigUint, ArithError> {
    if *m < BigUint::from(2u8) {
        return Err(ArithError::ModulusTooSmall);
    }
    let m_signed = BigInt::from_biguint(Sign::Plus, m.clone());
    let ext = a.mod_floor(&m_signed).extended_gcd(&m_signed);
    if !ext.gcd.is_one() {
        return Err(ArithError::NotCoprime {
            value: a.to_string(),
            modulus: m.to_string(),
        });
    }
    Ok(ext.x.mod_floor(&m_signed).to_biguint().expect("reduced value is nonnegative"))
}

/// Word-sized inverse used by the modular fast path.
pub fn mod_inverse_u64(a: u64, m: u64) -> Result<u64, ArithError> {
    if m < 2 {
        return Err(ArithError::ModulusTooSmall);
    }
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(ArithError::NotCoprime {
            value: a.to_string(),
            modulus: m.to_string(),
        });
    }
    Ok(old_s.rem_euclid(m as i128) as u64)
}

/// An element of `Z/p^k` for an odd prime `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    value: BigUint,
    prime: u64,
    exponent: u32,
}

impl ResidueClass {
    pub fn new(value: impl Into<BigInt>, prime: u64, exponent: u32) -> Result<Self, ArithError> {
        check_odd_prime(prime)?;
        if exponent == 0 {
            return Err(ArithError::ZeroExponent);
        }
        let modulus = BigInt::from(prime).pow(exponent);
        let value = value
            .into()
            .mod_floor(&modulus)
            .to_biguint()
            .expect("reduced value is nonnegative");
        Ok(ResidueClass { value, prime, exponent })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.prime).pow(self.exponent)
    }

    /// Reduces to a smaller power of the same prime.
    pub fn reduce(&self, exponent: u32) -> Result<Self, ArithError> {
        ResidueClass::new(BigInt::from(self.value.clone()), self.prime, exponent.min(self.exponent))
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value, self.prime, self.exponent)
    }
}

/// The residue `c` with `c * denom == numer (mod p^k)`.
pub fn residue_of_rational(r: &Rational, p: u64, k: u32) -> Result<ResidueClass, ArithError> {
    check_odd_prime(p)?;
    if k == 0 {
        return Err(ArithError::ZeroExponent);
    }
    let modulus = BigUint::from(p).pow(k);
    let inv = mod_inverse(r.denom(), &modulus)
        .map_err(|_| ArithError::DenominatorNotInvertible { prime: p })?;
    ResidueClass::new(r.numer() * BigInt::from(inv), p, k)
}

/// Scalar arithmetic shared by the exact and modular accumulation paths.
#[allow(clippy::wrong_self_convention)]
pub trait Scalars {
    type Elem: Clone + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn from_rational(&self, r: &Rational) -> Result<Self::Elem, ArithError>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, ArithError>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

/// The field of rationals; never fails.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactField;

impl Scalars for ExactField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_int(&self, n: i64) -> Rational {
        Rational::from(n)
    }
    fn from_rational(&self, r: &Rational) -> Result<Rational, ArithError> {
        Ok(r.clone())
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn div(&self, a: &Rational, b: &Rational) -> Result<Rational, ArithError> {
        assert!(!b.is_zero(), "division by zero rational");
        Ok(a / b)
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
}

/// `Z/p^k` with a word-sized modulus; products go through `u128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModRing {
    prime: u64,
    exponent: u32,
    modulus: u64,
}

impl ModRing {
    pub fn new(prime: u64, exponent: u32) -> Result<Self, ArithError> {
        check_odd_prime(prime)?;
        if exponent == 0 {
            return Err(ArithError::ZeroExponent);
        }
        let modulus = prime
            .checked_pow(exponent)
            .ok_or(ArithError::ModulusTooLarge { prime, exponent })?;
        Ok(ModRing { prime, exponent, modulus })
    }

    /// Whether `prime^exponent` fits the word-sized representation.
    pub fn fits(prime: u64, exponent: u32) -> bool {
        prime.checked_pow(exponent).is_some()
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce_big(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.modulus))
            .to_u64()
            .expect("reduced value fits the modulus")
    }

    /// `p`-adic valuation of a residue, saturating at the ring exponent for zero.
    pub fn valuation(&self, mut a: u64) -> u32 {
        if a == 0 {
            return self.exponent;
        }
        let mut v = 0;
        while a.is_multiple_of(self.prime) {
            a /= self.prime;
            v += 1;
        }
        v
    }

    pub fn residue_class(&self, a: u64, exponent: u32) -> ResidueClass {
        let k = exponent.min(self.exponent);
        ResidueClass::new(a % self.prime.pow(k), self.prime, k).expect("ring prime is an odd prime")
    }
}

impl Scalars for ModRing {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    fn from_int(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.modulus as i128) as u64
    }
    fn from_rational(&self, r: &Rational) -> Result<u64, ArithError> {
        let d = self.reduce_big(r.denom());
        let inv = mod_inverse_u64(d, self.modulus)
            .map_err(|_| ArithError::DenominatorNotInvertible { prime: self.prime })?;
        Ok(self.mul(&self.reduce_big(r.numer()), &inv))
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.modulus as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }
    fn div(&self, a: &u64, b: &u64) -> Result<u64, ArithError> {
        let inv = mod_inverse_u64(*b, self.modulus)
            .map_err(|_| ArithError::DenominatorNotInvertible { prime: self.prime })?;
        Ok(self.mul(a, &inv))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}
