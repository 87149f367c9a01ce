//! Series definitions: the built-in examples and user catalog files.

mod builtin;
mod file;

pub use builtin::{builtin, builtins, BUILTIN_IDS};
pub use file::{load_catalog, merge_catalogs, serialize_catalog};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::congruence::CongruenceTarget;
use crate::quad_ring::MultiQuadElement;
use crate::rational::Rational;
use crate::sequences::SequenceKind;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("series {id}: {message}")]
    Validation { id: String, message: String },
    #[error("duplicate series id {0}")]
    DuplicateId(String),
    #[error("unknown series {0}")]
    UnknownSeries(String),
}

/// The constant a convergent series is claimed to equal after scaling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesTarget {
    PiInverse,
    PiSquaredInverse,
    None,
}

impl SeriesTarget {
    /// Length of the polynomial `a + bn (+ cn^2)` this target implies.
    pub fn arity(self) -> Option<usize> {
        match self {
            SeriesTarget::PiInverse => Some(2),
            SeriesTarget::PiSquaredInverse => Some(3),
            SeriesTarget::None => None,
        }
    }
}

impl fmt::Display for SeriesTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesTarget::PiInverse => "1/pi",
            SeriesTarget::PiSquaredInverse => "1/pi^2",
            SeriesTarget::None => "none",
        })
    }
}

/// One series `scale * sum A_n poly(n) z^n = target`.
///
/// `poly` is the normalization used for the congruences (the partial sums
/// are taken of `A_n poly(n) z^n` without `scale`); `scale` only enters the
/// numeric identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesSpec {
    pub id: String,
    pub kind: SequenceKind,
    pub z: MultiQuadElement,
    pub poly: Vec<MultiQuadElement>,
    pub scale: MultiQuadElement,
    pub target: SeriesTarget,
    pub p_min: u64,
    pub targets: Vec<CongruenceTarget>,
    pub convergent: bool,
}

impl SeriesSpec {
    pub fn validate(&self) -> Result<(), CatalogError> {
        let fail = |message: String| Err(CatalogError::Validation { id: self.id.clone(), message });
        if self.id.trim().is_empty() {
            return fail("id must be nonempty".into());
        }
        if let SequenceKind::Hypergeometric { upper, lower } = &self.kind {
            if upper.len() != lower.len() {
                return fail("hypergeometric upper and lower lists differ in length".into());
            }
            if upper.len() != 3 && upper.len() != 5 {
                return fail(format!("hypergeometric parameter count must be 3 or 5, got {}", upper.len()));
            }
            let unit = |r: &Rational| !r.is_negative() && !r.is_zero() && *r <= Rational::one();
            if !upper.iter().all(unit) {
                return fail("hypergeometric parameters must lie in (0, 1]".into());
            }
            if !lower.iter().all(|r| *r == Rational::one()) {
                return fail("hypergeometric lower parameters must all be 1".into());
            }
        }
        let arity = self.poly.len();
        if arity != 2 && arity != 3 {
            return fail(format!("poly must have 2 or 3 coefficients, got {arity}"));
        }
        if let Some(expected) = self.target.arity() {
            if expected != arity {
                return fail(format!("target {} requires {expected} poly coefficients, got {arity}", self.target));
            }
        }
        if self.target != SeriesTarget::None && self.scale.is_zero() {
            return fail("scale must be nonzero when a target constant is given".into());
        }
        if self.p_min < 2 {
            return fail("p_min must be at least 2".into());
        }
        if self.targets.is_empty() {
            return fail("at least one congruence target is required".into());
        }
        let modulus = if arity == 2 { 3 } else { 5 };
        for t in &self.targets {
            if let Err(e) = t.validate() {
                return fail(e.to_string());
            }
            if t.modulus_exponent != modulus {
                return fail(format!(
                    "congruence at radicand {} has modulus exponent {} but a {}-term poly requires {}",
                    t.component, t.modulus_exponent, arity, modulus
                ));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for t in &self.targets {
            if !seen.insert(t.component) {
                return fail(format!("radicand {} has more than one congruence target", t.component));
            }
        }
        Ok(())
    }

    /// `poly(n) = sum_j poly[j] n^j`.
    pub fn poly_at(&self, n: u64) -> MultiQuadElement {
        let n = Rational::from(n as i64);
        let mut acc = MultiQuadElement::zero();
        for c in self.poly.iter().rev() {
            acc = &acc.scale(&n) + c;
        }
        acc
    }

    /// Every radicand appearing in z, poly, scale or the targets.
    pub fn radicands(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .poly
            .iter()
            .chain([&self.z, &self.scale])
            .flat_map(|e| e.radicands())
            .chain(self.targets.iter().map(|t| t.component))
            .map(i64::from)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
