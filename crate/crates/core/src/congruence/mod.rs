//! Mosaic supercongruence checks.
//!
//! For a series with partial sums `sum_{n<p} A_n poly(n) z^n = sum_i alpha_i(p) sqrt(d_i)`
//! each rational component is compared against `a_i (m_i/p) p^e` modulo
//! `p^k`, where `(e, k)` is `(1, 3)` for 1/pi series and `(2, 5)` for
//! 1/pi^2 series. The residual valuation is always measured, so a weaker
//! or stronger modulus than the one claimed is observable.

mod jacobi;
mod partial_sum;
mod primes;
pub mod report;
mod verify;

pub use jacobi::jacobi_symbol;
pub use partial_sum::{partial_sum_exact, partial_sum_modular, partial_sum_terms, ExactPrefixSums};
pub use primes::primes_in;
pub use verify::{verify_series, PrimeReport, Summary, VerificationReport, VerifyOptions, VerifyPath};

use num_bigint::BigInt;

use crate::modular::{residue_of_rational, ArithError, ResidueClass};
use crate::quad_ring::Radicand;
use crate::rational::{padic_valuation, Rational, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CongruenceError {
    #[error("Jacobi symbol needs an odd modulus, got {0}")]
    EvenModulus(u64),
    #[error("invalid congruence target: {0}")]
    InvalidTarget(String),
    #[error("prime {prime} is not above the series threshold {p_min}")]
    BelowThreshold { prime: u64, p_min: u64 },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("exact and modular paths disagree for {series} at p = {prime}, radicand {radicand}")]
    PathMismatch { series: String, prime: u64, radicand: i64 },
    #[error("invalid prime range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// One piece of the mosaic: `alpha_d(p) == coefficient * (jacobi/p) * p^p_exponent (mod p^modulus_exponent)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CongruenceTarget {
    pub component: Radicand,
    pub coefficient: Rational,
    pub jacobi_radicand: i64,
    pub p_exponent: u32,
    pub modulus_exponent: u32,
}

impl CongruenceTarget {
    pub fn new(
        component: Radicand,
        coefficient: Rational,
        jacobi_radicand: i64,
        p_exponent: u32,
        modulus_exponent: u32,
    ) -> Result<Self, CongruenceError> {
        let t = CongruenceTarget { component, coefficient, jacobi_radicand, p_exponent, modulus_exponent };
        t.validate()?;
        Ok(t)
    }

    /// The default 1/pi piece, with Jacobi argument `-d`.
    pub fn mosaic(component: Radicand, coefficient: Rational) -> Self {
        CongruenceTarget {
            component,
            coefficient,
            jacobi_radicand: -component.get(),
            p_exponent: 1,
            modulus_exponent: 3,
        }
    }

    pub fn validate(&self) -> Result<(), CongruenceError> {
        if !matches!((self.p_exponent, self.modulus_exponent), (1, 3) | (2, 5)) {
            return Err(CongruenceError::InvalidTarget(format!(
                "(p_exponent, modulus_exponent) must be (1, 3) or (2, 5), got ({}, {})",
                self.p_exponent, self.modulus_exponent
            )));
        }
        if self.jacobi_radicand == 0 {
            return Err(CongruenceError::InvalidTarget("jacobi radicand must be nonzero".into()));
        }
        Ok(())
    }

    /// `coefficient * (jacobi/p) * p^p_exponent` as an exact rational.
    pub fn expected_value(&self, p: u64) -> Result<Rational, CongruenceError> {
        let chi = jacobi_symbol(self.jacobi_radicand, p)?;
        let power = BigInt::from(p).pow(self.p_exponent);
        Ok(&self.coefficient * &Rational::from(power * BigInt::from(chi)))
    }
}

/// Outcome of one component check at one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentVerdict {
    pub prime: u64,
    pub radicand: Radicand,
    pub modulus_exponent: u32,
    pub expected_residue: Option<ResidueClass>,
    pub actual_residue: Option<ResidueClass>,
    /// `v_p(alpha - expected)`; `None` when nothing could be computed.
    pub residual_valuation: Option<Valuation>,
    /// The valuation is only known to be at least the reported value
    /// (the modular path saw a zero residual at its working modulus).
    pub valuation_is_lower_bound: bool,
    pub pass: bool,
    pub applicable: bool,
}

impl ComponentVerdict {
    pub(crate) fn inapplicable(prime: u64, radicand: Radicand, modulus_exponent: u32) -> Self {
        ComponentVerdict {
            prime,
            radicand,
            modulus_exponent,
            expected_residue: None,
            actual_residue: None,
            residual_valuation: None,
            valuation_is_lower_bound: false,
            pass: false,
            applicable: false,
        }
    }
}

/// Checks an exact component against its target at the target's own modulus.
pub fn check_target(component: &Rational, target: &CongruenceTarget, p: u64) -> Result<ComponentVerdict, CongruenceError> {
    check_target_at(component, target, p, target.modulus_exponent)
}

/// Checks an exact component modulo `p^modulus_exponent`.
///
/// A component or target coefficient whose denominator is divisible by `p`
/// yields an inapplicable verdict (not a failure); its residual valuation is
/// still reported.
pub fn check_target_at(
    component: &Rational,
    target: &CongruenceTarget,
    p: u64,
    modulus_exponent: u32,
) -> Result<ComponentVerdict, CongruenceError> {
    if p == 2 || !crate::modular::is_prime_u64(p) {
        return Err(CongruenceError::NotOddPrime(p));
    }
    let expected = target.expected_value(p)?;
    let valuation = padic_valuation(&(component - &expected), p);
    let residues = residue_of_rational(component, p, modulus_exponent)
        .and_then(|actual| Ok((actual, residue_of_rational(&expected, p, modulus_exponent)?)));
    let verdict = match residues {
        Ok((actual, expected)) => ComponentVerdict {
            prime: p,
            radicand: target.component,
            modulus_exponent,
            expected_residue: Some(expected),
            actual_residue: Some(actual),
            residual_valuation: Some(valuation),
            valuation_is_lower_bound: false,
            pass: valuation.at_least(modulus_exponent as i64),
            applicable: true,
        },
        Err(ArithError::DenominatorNotInvertible { .. }) => ComponentVerdict {
            residual_valuation: Some(valuation),
            ..ComponentVerdict::inapplicable(p, target.component, modulus_exponent)
        },
        Err(e) => return Err(e.into()),
    };
    Ok(verdict)
}
