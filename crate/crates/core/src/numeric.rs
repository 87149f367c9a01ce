//! Binary fixed-point reals and complex numbers over big integers.
//!
//! A value is `mantissa / 2^frac_bits`. All operands of one operation must
//! share the same `frac_bits`; every primitive truncates to within one unit
//! in the last place, so error bounds are counted in ulps by the callers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Fractional bits needed to represent `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpReal {
    mantissa: BigInt,
    frac_bits: u32,
}

impl HpReal {
    pub fn zero(frac_bits: u32) -> Self {
        HpReal { mantissa: BigInt::zero(), frac_bits }
    }

    pub fn one(frac_bits: u32) -> Self {
        HpReal { mantissa: BigInt::one() << frac_bits, frac_bits }
    }

    pub fn from_mantissa(mantissa: BigInt, frac_bits: u32) -> Self {
        HpReal { mantissa, frac_bits }
    }

    pub fn from_rational(r: &Rational, frac_bits: u32) -> Self {
        let scaled = r.numer() << frac_bits;
        HpReal { mantissa: scaled.div_floor(r.denom()), frac_bits }
    }

    /// `c * sqrt(d)` for `d >= 0`, within two ulps.
    pub fn rational_times_sqrt(c: &Rational, d: u64, frac_bits: u32) -> Self {
        let radicand = (c.numer() * c.numer() * BigInt::from(d)) << (2 * frac_bits);
        let mut root = radicand.sqrt().div_floor(c.denom());
        if c.is_negative() {
            root = -root;
        }
        HpReal { mantissa: root, frac_bits }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        HpReal { mantissa: self.mantissa.abs(), frac_bits: self.frac_bits }
    }

    /// Re-expresses the value with a different number of fractional bits.
    pub fn with_frac_bits(&self, frac_bits: u32) -> Self {
        let mantissa = if frac_bits >= self.frac_bits {
            &self.mantissa << (frac_bits - self.frac_bits)
        } else {
            &self.mantissa >> (self.frac_bits - frac_bits)
        };
        HpReal { mantissa, frac_bits }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.frac_bits, other.frac_bits);
        HpReal { mantissa: &self.mantissa + &other.mantissa, frac_bits: self.frac_bits }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.frac_bits, other.frac_bits);
        HpReal { mantissa: &self.mantissa - &other.mantissa, frac_bits: self.frac_bits }
    }

    pub fn neg(&self) -> Self {
        HpReal { mantissa: -&self.mantissa, frac_bits: self.frac_bits }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.frac_bits, other.frac_bits);
        HpReal { mantissa: (&self.mantissa * &other.mantissa) >> self.frac_bits, frac_bits: self.frac_bits }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        HpReal { mantissa: &self.mantissa * n, frac_bits: self.frac_bits }
    }

    pub fn div_int(&self, n: &BigInt) -> Self {
        HpReal { mantissa: self.mantissa.div_floor(n), frac_bits: self.frac_bits }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        HpReal { mantissa: (&self.mantissa * r.numer()).div_floor(r.denom()), frac_bits: self.frac_bits }
    }

    /// Number of leading decimal digits after the point that are zero in
    /// `|self|`, i.e. the largest `k <= cap` with `|self| < 10^-k`.
    pub fn decimal_smallness(&self, cap: u32) -> u32 {
        let limit = BigInt::one() << self.frac_bits;
        let mut scaled = self.mantissa.abs();
        let ten = BigInt::from(10);
        let mut k = 0;
        if scaled >= limit {
            return 0;
        }
        while k < cap {
            scaled *= &ten;
            if scaled >= limit {
                break;
            }
            k += 1;
        }
        k
    }

    /// Decimal rendering truncated toward zero at `digits` places.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scaled = (self.mantissa.abs() * BigInt::from(10).pow(digits)) >> self.frac_bits;
        let s = scaled.to_string();
        let (int_part, frac_part) = if s.len() > digits as usize {
            let cut = s.len() - digits as usize;
            (s[..cut].to_string(), s[cut..].to_string())
        } else {
            ("0".to_string(), format!("{:0>width$}", s, width = digits as usize))
        };
        let sign = if self.mantissa.is_negative() && !scaled.is_zero() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.frac_bits.saturating_sub(60);
        let m: BigInt = &self.mantissa >> shift;
        let m = num_traits::ToPrimitive::to_f64(&m).unwrap_or(f64::NAN);
        m / 2f64.powi((self.frac_bits - shift) as i32)
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.frac_bits as f64 / LOG2_10).floor() as u32;
        f.write_str(&self.to_decimal(digits))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpComplex {
    pub re: HpReal,
    pub im: HpReal,
}

impl HpComplex {
    pub fn zero(frac_bits: u32) -> Self {
        HpComplex { re: HpReal::zero(frac_bits), im: HpReal::zero(frac_bits) }
    }

    pub fn one(frac_bits: u32) -> Self {
        HpComplex { re: HpReal::one(frac_bits), im: HpReal::zero(frac_bits) }
    }

    pub fn real(re: HpReal) -> Self {
        let frac_bits = re.frac_bits();
        HpComplex { re, im: HpReal::zero(frac_bits) }
    }

    pub fn frac_bits(&self) -> u32 {
        self.re.frac_bits()
    }

    pub fn with_frac_bits(&self, frac_bits: u32) -> Self {
        HpComplex { re: self.re.with_frac_bits(frac_bits), im: self.im.with_frac_bits(frac_bits) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        HpComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        HpComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        HpComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        HpComplex { re: self.re.mul_rational(r), im: self.im.mul_rational(r) }
    }

    /// `max(|re|, |im|)`, within a factor sqrt(2) of the modulus.
    pub fn max_abs(&self) -> HpReal {
        let (a, b) = (self.re.abs(), self.im.abs());
        if a.mantissa() >= b.mantissa() {
            a
        } else {
            b
        }
    }
}

impl fmt::Display for HpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.im.mantissa().is_negative() {
            write!(f, "{} - {}i", self.re, self.im.abs())
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

/// `arctan(1/x)` by its Taylor series in fixed point.
fn arctan_inv(x: u64, frac_bits: u32) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << frac_bits) / &x;
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// Pi by Machin's formula `16 arctan(1/5) - 4 arctan(1/239)`.
pub fn pi(frac_bits: u32) -> HpReal {
    let guard = 32;
    let w = frac_bits + guard;
    let v = arctan_inv(5, w) * 16 - arctan_inv(239, w) * 4;
    HpReal::from_mantissa(v >> guard, frac_bits)
}

/// `1/x`, for `x` well away from zero.
pub fn reciprocal(x: &HpReal) -> HpReal {
    let fb = x.frac_bits();
    let num = BigInt::one() << (2 * fb);
    HpReal::from_mantissa(num.div_floor(x.mantissa()), fb)
}
