//! Numeric check that `scale * sum A_n poly(n) z^n` equals its target constant.
//!
//! The sum is evaluated in binary fixed point. Working precision is the
//! requested number of digits, plus `10 + ceil(log10 terms)` guard digits,
//! plus enough bits to absorb the magnitudes of `A_n`, `poly(n)`, `z^n` and
//! the scale factor. Pi comes from Machin's formula, never from a series in
//! the catalog.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::catalog::{SeriesSpec, SeriesTarget};
use crate::numeric::{bits_for_digits, pi, reciprocal, HpComplex, HpReal};
use crate::rational::Rational;
use crate::sequences::term_stream;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalyticError {
    #[error("series {0} has no target constant")]
    NoTarget(String),
    #[error("at least one term is required")]
    NoTerms,
    #[error("precision must be at least 10 digits, got {0}")]
    PrecisionTooLow(u32),
}

pub fn guard_digits(terms: u64) -> u32 {
    10 + (terms.max(1) as f64).log10().ceil() as u32
}

fn bit_length(n: &BigInt) -> u32 {
    n.bits() as u32
}

/// Bits needed above the binary point to hold `|r|`.
fn integer_bits(r: &Rational) -> u32 {
    (r.numer().abs() / r.denom()).bits() as u32 + 1
}

/// 1/pi or 1/pi^2 with `frac_bits` fractional bits.
pub fn target_constant_bits(target: SeriesTarget, frac_bits: u32) -> Option<HpReal> {
    let guard = 16;
    let inv_pi = reciprocal(&pi(frac_bits + guard));
    let value = match target {
        SeriesTarget::PiInverse => inv_pi,
        SeriesTarget::PiSquaredInverse => inv_pi.mul(&inv_pi),
        SeriesTarget::None => return None,
    };
    Some(value.with_frac_bits(frac_bits))
}

/// The target constant to at least `digits` decimal digits.
pub fn target_constant(target: SeriesTarget, digits: u32) -> Result<HpReal, AnalyticError> {
    if digits < 10 {
        return Err(AnalyticError::PrecisionTooLow(digits));
    }
    target_constant_bits(target, bits_for_digits(digits + 10)).ok_or_else(|| AnalyticError::NoTarget(target.to_string()))
}

fn working_bits(spec: &SeriesSpec, coefficients: &[Rational], terms: u64, digits: u32) -> u32 {
    let a_bits = coefficients.iter().map(integer_bits).max().unwrap_or(1);
    let poly_bound = spec
        .poly
        .iter()
        .rev()
        .fold(BigInt::from(0), |acc, c| acc * BigInt::from(terms) + c.magnitude_bound());
    let z_bound = spec.z.magnitude_bound();
    let z_bits = if z_bound > BigInt::from(1) { bit_length(&z_bound) * terms as u32 } else { 0 };
    bits_for_digits(digits + guard_digits(terms))
        + a_bits
        + bit_length(&poly_bound)
        + bit_length(&spec.scale.magnitude_bound())
        + z_bits
        + 2 * bit_length(&BigInt::from(terms))
        + 16
}

/// `scale * sum_{n < terms} A_n poly(n) z^n`, accurate to `10^-digits`.
pub fn evaluate_series(spec: &SeriesSpec, terms: u64, digits: u32) -> Result<HpComplex, AnalyticError> {
    if terms == 0 {
        return Err(AnalyticError::NoTerms);
    }
    if digits < 10 {
        return Err(AnalyticError::PrecisionTooLow(digits));
    }
    let coefficients: Vec<Rational> = term_stream(&spec.kind).take(terms as usize).collect();
    let bits = working_bits(spec, &coefficients, terms, digits);
    let z = spec.z.embed_bits(bits);
    let mut z_power = HpComplex::one(bits);
    let mut sum = HpComplex::zero(bits);
    for (n, a_n) in coefficients.iter().enumerate() {
        let term = spec.poly_at(n as u64).embed_bits(bits).mul(&z_power).mul_rational(a_n);
        sum = sum.add(&term);
        z_power = z_power.mul(&z);
    }
    Ok(sum.mul(&spec.scale.embed_bits(bits)))
}

/// An evaluated series next to its target constant.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub value: HpComplex,
    pub target: HpReal,
    /// Largest `k <= digits` with `|value - target| < 10^-k`.
    pub matched_digits: u32,
    pub digits: u32,
}

pub fn matched_digits(value: &HpComplex, target: &HpReal, cap: u32) -> u32 {
    let bits = value.frac_bits();
    let diff = HpComplex { re: value.re.sub(&target.with_frac_bits(bits)), im: value.im.clone() };
    diff.max_abs().decimal_smallness(cap)
}

pub fn compare_with_target(spec: &SeriesSpec, terms: u64, digits: u32) -> Result<Comparison, AnalyticError> {
    if spec.target == SeriesTarget::None {
        return Err(AnalyticError::NoTarget(spec.id.clone()));
    }
    let value = evaluate_series(spec, terms, digits)?;
    let target = target_constant_bits(spec.target, value.frac_bits()).expect("target checked above");
    let matched = matched_digits(&value, &target, digits);
    Ok(Comparison { value, target, matched_digits: matched, digits })
}
