use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use crate::catalog::SeriesSpec;
use crate::modular::{ArithError, ModRing, Scalars};
use crate::quad_ring::Radicand;
use crate::rational::{Rational, Valuation};

use super::partial_sum::{decompose, modular_sum, ExactPrefixSums};
use super::{check_target_at, primes_in, ComponentVerdict, CongruenceError, CongruenceTarget};

/// Extra powers of `p` carried by the modular path beyond the checked
/// modulus, so that residual valuations above the claim stay visible.
const MODULAR_HEADROOM: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyPath {
    Exact,
    Modular,
    /// Both paths at every prime; verdicts come from the exact path.
    Both,
    /// Modular verdicts, with the exact path recomputed at every `every`-th prime.
    Audited { every: usize },
}

impl Default for VerifyPath {
    fn default() -> Self {
        VerifyPath::Audited { every: 10 }
    }
}

impl fmt::Display for VerifyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyPath::Exact => f.write_str("exact"),
            VerifyPath::Modular => f.write_str("modular"),
            VerifyPath::Both => f.write_str("both"),
            VerifyPath::Audited { every } => write!(f, "modular+audit/{every}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub p_lo: u64,
    pub p_hi: u64,
    pub path: VerifyPath,
    /// Overrides every target's modulus exponent.
    pub mod_power: Option<u32>,
    /// Worker threads for the modular path; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl VerifyOptions {
    pub fn new(p_lo: u64, p_hi: u64, path: VerifyPath) -> Self {
        VerifyOptions { p_lo, p_hi, path, mod_power: None, jobs: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeReport {
    pub prime: u64,
    /// Whether the exact path was evaluated at this prime.
    pub exact_checked: bool,
    /// Whether the modular path was evaluated at this prime.
    pub modular_checked: bool,
    pub applicable: bool,
    pub components: Vec<ComponentVerdict>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub primes: usize,
    pub passed: usize,
    pub failed: usize,
    pub inapplicable: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub series: String,
    pub p_lo: u64,
    pub p_hi: u64,
    pub path: VerifyPath,
    pub mod_power: Option<u32>,
    pub primes: Vec<PrimeReport>,
    pub summary: Summary,
}

impl VerificationReport {
    /// No applicable check failed.
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn verdicts(&self) -> impl Iterator<Item = &ComponentVerdict> {
        self.primes.iter().flat_map(|p| p.components.iter())
    }
}

fn check_exponent(target: &CongruenceTarget, mod_power: Option<u32>) -> u32 {
    mod_power.unwrap_or(target.modulus_exponent)
}

fn modular_ring(spec: &SeriesSpec, p: u64, mod_power: Option<u32>) -> Result<ModRing, ArithError> {
    let k = spec.targets.iter().map(|t| check_exponent(t, mod_power)).max().unwrap_or(1).max(1);
    if ModRing::fits(p, k + MODULAR_HEADROOM) {
        ModRing::new(p, k + MODULAR_HEADROOM)
    } else {
        ModRing::new(p, k)
    }
}

fn modular_verdict(
    ring: &ModRing,
    sum: &BTreeMap<Radicand, u64>,
    target: &CongruenceTarget,
    p: u64,
    k: u32,
) -> Result<ComponentVerdict, CongruenceError> {
    let expected = target.expected_value(p)?;
    let expected = match ring.from_rational(&expected) {
        Ok(v) => v,
        Err(ArithError::DenominatorNotInvertible { .. }) => {
            return Ok(ComponentVerdict::inapplicable(p, target.component, k));
        }
        Err(e) => return Err(e.into()),
    };
    let actual = sum.get(&target.component).copied().unwrap_or(0);
    let residual = ring.add(&actual, &ring.neg(&expected));
    let v = ring.valuation(residual);
    Ok(ComponentVerdict {
        prime: p,
        radicand: target.component,
        modulus_exponent: k,
        expected_residue: Some(ring.residue_class(expected, k)),
        actual_residue: Some(ring.residue_class(actual, k)),
        residual_valuation: Some(Valuation::Finite(v as i64)),
        valuation_is_lower_bound: residual == 0,
        pass: v >= k,
        applicable: true,
    })
}

fn cross_check(
    spec: &SeriesSpec,
    p: u64,
    ring: &ModRing,
    exact: &BTreeMap<Radicand, Rational>,
    modular: &BTreeMap<Radicand, u64>,
) -> Result<(), CongruenceError> {
    let radicands: BTreeSet<Radicand> = exact.keys().chain(modular.keys()).copied().collect();
    for d in radicands {
        let want = match exact.get(&d) {
            Some(c) => match ring.from_rational(c) {
                Ok(v) => v,
                // an exact component with p in its denominator has no residue to compare
                Err(_) => continue,
            },
            None => 0,
        };
        let got = modular.get(&d).copied().unwrap_or(0);
        if want != got {
            return Err(CongruenceError::PathMismatch { series: spec.id.clone(), prime: p, radicand: d.get() });
        }
    }
    Ok(())
}

type ModularOutcome = Result<Result<(ModRing, BTreeMap<Radicand, u64>), ArithError>, CongruenceError>;

fn run_modular(spec: &SeriesSpec, primes: &[u64], mod_power: Option<u32>) -> Vec<ModularOutcome> {
    primes
        .par_iter()
        .map(|&p| {
            let ring = modular_ring(spec, p, mod_power)?;
            Ok(modular_sum(spec, &ring, p).map(|sum| (ring, sum)))
        })
        .collect()
}

fn run_exact(spec: &SeriesSpec, primes: &[u64]) -> Vec<BTreeMap<Radicand, Rational>> {
    let mut prefix = ExactPrefixSums::new(spec);
    primes.iter().map(|&p| decompose(spec, prefix.advance_to(p))).collect()
}

/// Checks every congruence target at every prime `p` with
/// `max(p_lo, p_min + 1) <= p <= p_hi`.
///
/// Verdicts are listed in ascending prime order whatever the number of
/// workers. Primes where a denominator is divisible by `p` are reported as
/// inapplicable.
pub fn verify_series(spec: &SeriesSpec, opts: &VerifyOptions) -> Result<VerificationReport, CongruenceError> {
    if opts.p_lo > opts.p_hi {
        return Err(CongruenceError::InvalidRange { lo: opts.p_lo, hi: opts.p_hi });
    }
    let lo = opts.p_lo.max(spec.p_min + 1).max(3);
    let primes = primes_in(lo, opts.p_hi);

    let exact_wanted: Vec<bool> = (0..primes.len())
        .map(|i| match opts.path {
            VerifyPath::Exact | VerifyPath::Both => true,
            VerifyPath::Modular => false,
            VerifyPath::Audited { every } => i % every.max(1) == 0,
        })
        .collect();
    let exact_primes: Vec<u64> = primes.iter().zip(&exact_wanted).filter(|(_, &w)| w).map(|(&p, _)| p).collect();
    let modular_primes: Vec<u64> = if opts.path == VerifyPath::Exact { Vec::new() } else { primes.clone() };

    let work = || rayon::join(|| run_exact(spec, &exact_primes), || run_modular(spec, &modular_primes, opts.mod_power));
    let (exact, modular) = match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| CongruenceError::Pool(e.to_string()))?
            .install(work),
        None => work(),
    };

    let mut exact = exact.into_iter();
    let mut modular = modular.into_iter();
    let mut reports = Vec::with_capacity(primes.len());
    for (i, &p) in primes.iter().enumerate() {
        let exact_sum = if exact_wanted[i] { exact.next() } else { None };
        let modular_sum = if opts.path == VerifyPath::Exact { None } else { Some(modular.next().expect("one result per prime")?) };

        if let (Some(e), Some(Ok((ring, m)))) = (&exact_sum, &modular_sum) {
            cross_check(spec, p, ring, e, m)?;
        }

        let use_exact = matches!(opts.path, VerifyPath::Exact | VerifyPath::Both);
        let mut components = Vec::with_capacity(spec.targets.len());
        for t in &spec.targets {
            let k = check_exponent(t, opts.mod_power);
            let verdict = if use_exact {
                let e = exact_sum.as_ref().expect("exact sums are computed for this path");
                check_target_at(&e[&t.component], t, p, k)?
            } else {
                match modular_sum.as_ref().expect("modular sums are computed for this path") {
                    Ok((ring, m)) => modular_verdict(ring, m, t, p, k)?,
                    Err(ArithError::DenominatorNotInvertible { .. }) => ComponentVerdict::inapplicable(p, t.component, k),
                    Err(e) => return Err(e.clone().into()),
                }
            };
            components.push(verdict);
        }
        reports.push(PrimeReport {
            prime: p,
            exact_checked: exact_sum.is_some(),
            modular_checked: modular_sum.is_some(),
            applicable: components.iter().all(|c| c.applicable),
            components,
        });
    }

    let mut summary = Summary { primes: reports.len(), ..Summary::default() };
    for v in reports.iter().flat_map(|r| &r.components) {
        if !v.applicable {
            summary.inapplicable += 1;
        } else if v.pass {
            summary.passed += 1;
        } else {
            summary.failed += 1;
        }
    }
    Ok(VerificationReport {
        series: spec.id.clone(),
        p_lo: opts.p_lo,
        p_hi: opts.p_hi,
        path: opts.path,
        mod_power: opts.mod_power,
        primes: reports,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;

    #[test]
    fn ex1_small_range_all_paths_agree() {
        let spec = builtin("EX1").unwrap();
        for path in [VerifyPath::Exact, VerifyPath::Modular, VerifyPath::Both, VerifyPath::default()] {
            let r = verify_series(&spec, &VerifyOptions::new(2, 50, path)).unwrap();
            let primes: Vec<u64> = r.primes.iter().map(|p| p.prime).collect();
            assert_eq!(primes, [7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47], "{path}");
            assert!(r.all_passed(), "{path}");
            assert_eq!(r.summary.passed, 12);
            assert_eq!(r.summary.inapplicable, 0);
        }
    }

    #[test]
    fn audit_marks_every_tenth_prime() {
        let spec = builtin("EX2").unwrap();
        let r = verify_series(&spec, &VerifyOptions::new(2, 100, VerifyPath::Audited { every: 10 })).unwrap();
        let audited: Vec<u64> = r.primes.iter().filter(|p| p.exact_checked).map(|p| p.prime).collect();
        assert_eq!(audited, [11, 47, 97]);
        assert!(r.primes.iter().all(|p| p.modular_checked));
    }

    #[test]
    fn modular_valuations_are_lower_bounds_only_when_residual_vanishes() {
        let spec = builtin("EX1").unwrap();
        let modular = verify_series(&spec, &VerifyOptions::new(2, 60, VerifyPath::Modular)).unwrap();
        let exact = verify_series(&spec, &VerifyOptions::new(2, 60, VerifyPath::Exact)).unwrap();
        for (m, e) in modular.verdicts().zip(exact.verdicts()) {
            let mv = m.residual_valuation.unwrap();
            let ev = e.residual_valuation.unwrap();
            if m.valuation_is_lower_bound {
                assert!(ev >= mv);
            } else {
                assert_eq!(mv, ev);
            }
            assert_eq!(m.expected_residue, e.expected_residue);
            assert_eq!(m.actual_residue, e.actual_residue);
        }
    }

    #[test]
    fn jobs_do_not_change_the_report() {
        let spec = builtin("EX4").unwrap();
        let mut opts = VerifyOptions::new(2, 80, VerifyPath::Modular);
        let base = verify_series(&spec, &opts).unwrap();
        opts.jobs = Some(3);
        assert_eq!(verify_series(&spec, &opts).unwrap(), base);
    }

    #[test]
    fn inverted_range_is_rejected() {
        let spec = builtin("EX1").unwrap();
        assert!(matches!(
            verify_series(&spec, &VerifyOptions::new(50, 10, VerifyPath::Exact)),
            Err(CongruenceError::InvalidRange { .. })
        ));
    }

    #[test]
    fn inapplicable_primes_are_not_failures() {
        let mut spec = builtin("EX1").unwrap();
        spec.p_min = 3;
        for path in [VerifyPath::Exact, VerifyPath::Modular] {
            let r = verify_series(&spec, &VerifyOptions::new(2, 7, path)).unwrap();
            assert_eq!(r.primes[0].prime, 5);
            assert!(!r.primes[0].applicable, "{path}");
            assert_eq!(r.summary.inapplicable, 1);
            assert!(r.all_passed());
        }
    }

    #[test]
    fn wrong_target_fails() {
        let mut spec = builtin("EX1").unwrap();
        spec.targets[0].coefficient = Rational::from(264);
        let r = verify_series(&spec, &VerifyOptions::new(2, 30, VerifyPath::Both)).unwrap();
        assert!(!r.all_passed());
        assert!(r.verdicts().all(|v| v.residual_valuation == Some(Valuation::Finite(1))));
    }
}
