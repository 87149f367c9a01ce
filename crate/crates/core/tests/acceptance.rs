//! Acceptance criteria 1-11. Each test writes one `PASS`/`FAIL` line to
//! stderr (bypassing the test harness capture) before asserting.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mosaic_core::analytic::compare_with_target;
use mosaic_core::catalog::{builtin, builtins};
use mosaic_core::congruence::{
    jacobi_symbol, partial_sum_exact, partial_sum_modular, primes_in, verify_series, CongruenceTarget,
    VerificationReport, VerifyOptions, VerifyPath,
};
use mosaic_core::modular::residue_of_rational;
use mosaic_core::numeric::bits_for_digits;
use mosaic_core::quad_ring::{MultiQuadElement, Radicand};
use mosaic_core::rational::{Rational, Valuation};
use mosaic_core::sequences::{term_direct, term_stream, SequenceKind};

const SEED: u64 = 0x6d6f_7361_6963;

fn report_line(criterion: u32, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    let line = format!("acceptance criterion {criterion:>2}: {status} - {detail}\n");
    std::io::stderr().write_all(line.as_bytes()).expect("stderr is writable");
}

/// `(radicand, coefficient, jacobi, p_exponent, modulus_exponent)`.
type TargetRow = (i64, i64, i64, u32, u32);

fn targets_are(spec_targets: &[CongruenceTarget], rows: &[TargetRow]) -> bool {
    let expected: Vec<CongruenceTarget> = rows
        .iter()
        .map(|&(d, a, m, e, k)| CongruenceTarget::new(Radicand::new(d).unwrap(), Rational::from(a), m, e, k).unwrap())
        .collect();
    spec_targets == expected.as_slice()
}

struct RangeCheck {
    id: &'static str,
    lo: u64,
    hi: u64,
    targets: &'static [TargetRow],
    path: VerifyPath,
    budget: Option<Duration>,
}

fn run_range(criterion: u32, check: RangeCheck) {
    let spec = builtin(check.id).unwrap();
    let started = Instant::now();
    let report: VerificationReport =
        verify_series(&spec, &VerifyOptions::new(check.lo, check.hi, check.path)).expect("verification runs");
    let elapsed = started.elapsed();
    let primes: Vec<u64> = report.primes.iter().map(|p| p.prime).collect();
    let expected_primes = primes_in(check.lo, check.hi);
    let targets_ok = targets_are(&spec.targets, check.targets);
    let in_budget = check.budget.is_none_or(|b| elapsed < b);
    let s = report.summary;
    let ok = targets_ok
        && primes == expected_primes
        && s.failed == 0
        && s.inapplicable == 0
        && s.passed == expected_primes.len() * check.targets.len()
        && in_budget;
    let detail = format!(
        "{} primes {}..{} via {}: {} passed, {} failed, {} inapplicable, targets {}, {:.1?}{}",
        check.id,
        check.lo,
        check.hi,
        check.path,
        s.passed,
        s.failed,
        s.inapplicable,
        if targets_ok { "as stated" } else { "DIFFER" },
        elapsed,
        check.budget.map(|b| format!(" (budget {b:?})")).unwrap_or_default(),
    );
    report_line(criterion, ok, &detail);
    assert!(ok, "{detail}");
}

#[test]
fn criterion_01_ex1_mod_p3() {
    run_range(
        1,
        RangeCheck {
            id: "EX1",
            lo: 7,
            hi: 199,
            targets: &[(1, 263, -15, 1, 3)],
            path: VerifyPath::Exact,
            budget: Some(Duration::from_secs(60)),
        },
    );
}

#[test]
fn criterion_02_ex2_two_components() {
    run_range(
        2,
        RangeCheck {
            id: "EX2",
            lo: 11,
            hi: 199,
            targets: &[(1, -10, -1, 1, 3), (7, 7, -7, 1, 3)],
            path: VerifyPath::Both,
            budget: None,
        },
    );
}

#[test]
fn criterion_03_ex3_apery() {
    run_range(
        3,
        RangeCheck {
            id: "EX3",
            lo: 7,
            hi: 101,
            targets: &[(3, -134, -3, 1, 3), (15, 60, -15, 1, 3)],
            path: VerifyPath::Exact,
            budget: Some(Duration::from_secs(120)),
        },
    );
}

#[test]
fn criterion_04_ex4_four_components() {
    run_range(
        4,
        RangeCheck {
            id: "EX4",
            lo: 5,
            hi: 151,
            targets: &[(1, 73, -1, 1, 3), (2, 52, -2, 1, 3), (3, -42, -3, 1, 3), (6, -30, -6, 1, 3)],
            path: VerifyPath::Both,
            budget: None,
        },
    );
}

#[test]
fn criterion_05_ex5_complex() {
    let spec = builtin("EX5").unwrap();
    let radicands: Vec<i64> = spec.targets.iter().map(|t| t.component.get()).collect();
    assert_eq!(radicands, [-1, 7]);
    run_range(
        5,
        RangeCheck {
            id: "EX5",
            lo: 11,
            hi: 151,
            targets: &[(-1, -13, 1, 1, 3), (7, 7, -7, 1, 3)],
            path: VerifyPath::Both,
            budget: None,
        },
    );
}

#[test]
fn criterion_06_ex6_mod_p5() {
    run_range(
        6,
        RangeCheck {
            id: "EX6",
            lo: 5,
            hi: 151,
            targets: &[(1, 45, 1, 2, 5)],
            path: VerifyPath::Both,
            budget: None,
        },
    );
}

#[test]
fn criterion_07_ex7_algebraic_z() {
    run_range(
        7,
        RangeCheck {
            id: "EX7",
            lo: 7,
            hi: 151,
            targets: &[(1, 56, 1, 2, 5), (5, -25, 5, 2, 5)],
            path: VerifyPath::Both,
            budget: None,
        },
    );
}

#[test]
fn criterion_08_path_equivalence() {
    let mut compared = 0;
    let mut mismatches = Vec::new();
    for spec in builtins() {
        let k = spec.targets.iter().map(|t| t.modulus_exponent).max().unwrap();
        for p in primes_in(spec.p_min + 1, 50) {
            let exact = partial_sum_exact(&spec, p).unwrap();
            let modular = partial_sum_modular(&spec, p, k).unwrap();
            let reduced: BTreeMap<Radicand, _> =
                exact.iter().map(|(d, c)| (*d, residue_of_rational(c, p, k).unwrap())).collect();
            compared += reduced.len();
            if modular != reduced {
                mismatches.push(format!("{}@{p}", spec.id));
            }
        }
    }
    let ok = mismatches.is_empty() && compared > 0;
    let detail = format!("{compared} components compared over EX1-EX7, p <= 50; mismatches: {mismatches:?}");
    report_line(8, ok, &detail);
    assert!(ok, "{detail}");
}

#[test]
fn criterion_09_numeric_identities() {
    let checks: [(&str, u64, u32); 5] = [("EX1", 50, 250), ("EX3", 15, 30), ("EX4", 15, 30), ("EX6", 200, 100), ("EX7", 40, 50)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (id, terms, required) in checks {
        let spec = builtin(id).unwrap();
        let c = compare_with_target(&spec, terms, required + 20).unwrap();
        let hit = c.matched_digits >= required;
        ok &= hit;
        parts.push(format!("{id}@{terms}: {}/{required}{}", c.matched_digits, if hit { "" } else { " (short)" }));
    }
    let detail = parts.join(", ");
    report_line(9, ok, &detail);
    assert!(ok, "matched digits below requirement: {detail}");
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn euler_criterion_holds() -> (bool, usize) {
    let mut checked = 0;
    for p in primes_in(3, 499) {
        for a in 1..p {
            let euler = pow_mod(a, (p - 1) / 2, p);
            let expected = if euler == 1 { 1 } else { -1 };
            if euler != 1 && euler != p - 1 || jacobi_symbol(a as i64, p).unwrap() != expected {
                return (false, checked);
            }
            checked += 1;
        }
    }
    (true, checked)
}

fn jacobi_multiplicative(rng: &mut ChaCha8Rng) -> bool {
    (0..10_000).all(|_| {
        let a = rng.gen_range(-1_000_000i64..1_000_000);
        let b = rng.gen_range(-1_000_000i64..1_000_000);
        let n = 2 * rng.gen_range(0u64..50_000) + 1;
        jacobi_symbol(a * b, n).unwrap() == jacobi_symbol(a, n).unwrap() * jacobi_symbol(b, n).unwrap()
    })
}

fn random_element(rng: &mut ChaCha8Rng) -> MultiQuadElement {
    const POOL: [i64; 10] = [1, 2, 3, 5, 6, 7, 15, -1, -3, -7];
    let len = rng.gen_range(0..4);
    let terms: Vec<(i64, Rational)> = (0..len)
        .map(|_| (POOL[rng.gen_range(0..POOL.len())], Rational::new(rng.gen_range(-50i64..50), rng.gen_range(1i64..12))))
        .collect();
    MultiQuadElement::from_terms(terms).unwrap()
}

fn quad_ring_laws(rng: &mut ChaCha8Rng) -> bool {
    let digits = 60;
    let guard = 10;
    let bits = bits_for_digits(digits);
    (0..1_000).all(|_| {
        let (x, y, w) = (random_element(rng), random_element(rng), random_element(rng));
        let axioms = &(&x + &y) + &w == &x + &(&y + &w)
            && &x + &y == &y + &x
            && &(&x * &y) * &w == &x * &(&y * &w)
            && &x * &y == &y * &x
            && &x * &(&y + &w) == &(&x * &y) + &(&x * &w)
            && &x * &MultiQuadElement::one() == x;
        let (ex, ey) = (x.embed_bits(bits), y.embed_bits(bits));
        let product = (&x * &y).embed_bits(bits).sub(&ex.mul(&ey));
        let sum = (&x + &y).embed_bits(bits).sub(&ex.add(&ey));
        axioms
            && product.max_abs().decimal_smallness(digits) >= digits - guard
            && sum.max_abs().decimal_smallness(digits) >= digits - guard
    })
}

fn all_kinds() -> Vec<SequenceKind> {
    let q = |n, d| Rational::new(n, d);
    let mut kinds = vec![
        SequenceKind::hypergeometric(&[q(1, 2), q(1, 6), q(5, 6)]),
        SequenceKind::hypergeometric(&[q(1, 2), q(1, 3), q(2, 3), q(1, 6), q(5, 6)]),
    ];
    kinds.extend(SequenceKind::integer_kinds());
    kinds
}

fn streams_match_oracle() -> bool {
    all_kinds()
        .iter()
        .all(|kind| term_stream(kind).take(26).enumerate().all(|(n, a)| a == term_direct(kind, n as u64)))
}

fn residue_homomorphism(rng: &mut ChaCha8Rng) -> bool {
    const PRIMES: [u64; 6] = [3, 5, 7, 11, 13, 199];
    let mut tested = 0;
    while tested < 10_000 {
        let p = PRIMES[rng.gen_range(0..PRIMES.len())];
        let k = rng.gen_range(1u32..6);
        let r = Rational::new(rng.gen_range(-10_000_000i64..10_000_000), rng.gen_range(1i64..100_000));
        let s = Rational::new(rng.gen_range(-10_000_000i64..10_000_000), rng.gen_range(1i64..100_000));
        let (Ok(a), Ok(b)) = (residue_of_rational(&r, p, k), residue_of_rational(&s, p, k)) else {
            continue;
        };
        let m: BigUint = a.modulus();
        let sum = residue_of_rational(&(&r + &s), p, k).unwrap();
        let product = residue_of_rational(&(&r * &s), p, k).unwrap();
        if *sum.value() != (a.value() + b.value()) % &m || *product.value() != (a.value() * b.value()) % &m {
            return false;
        }
        tested += 1;
    }
    true
}

#[test]
fn criterion_10_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (euler, euler_count) = euler_criterion_holds();
    let multiplicative = jacobi_multiplicative(&mut rng);
    let ring = quad_ring_laws(&mut rng);
    let oracle = streams_match_oracle();
    let residues = residue_homomorphism(&mut rng);
    let ok = euler && multiplicative && ring && oracle && residues;
    let detail = format!(
        "euler ({euler_count} residues) {euler}, jacobi multiplicativity {multiplicative}, \
         ring axioms + embedding {ring}, stream oracle {oracle}, residue homomorphism {residues}"
    );
    report_line(10, ok, &detail);
    assert!(ok, "{detail}");
}

#[test]
fn criterion_11_valuation_observability() {
    let spec = builtin("EX1").unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for k in [2, 1] {
        let opts = VerifyOptions { mod_power: Some(k), ..VerifyOptions::new(2, 199, VerifyPath::Exact) };
        let report = verify_series(&spec, &opts).unwrap();
        let min_valuation = report.verdicts().filter_map(|v| v.residual_valuation).min().unwrap_or(Valuation::Infinite);
        let measured = report.verdicts().all(|v| !v.valuation_is_lower_bound && v.modulus_exponent == k);
        let pass = report.all_passed() && report.summary.inapplicable == 0 && min_valuation.at_least(3) && measured;
        ok &= pass;
        parts.push(format!("mod p^{k}: {} passed, min valuation {min_valuation}", report.summary.passed));
    }
    let detail = parts.join("; ");
    report_line(11, ok, &detail);
    assert!(ok, "{detail}");
}

#[test]
fn criterion_cross_reference_values() {
    // Spot values the criteria rest on.
    assert_eq!(jacobi_symbol(-15, 7).unwrap(), -1);
    let alpha = &partial_sum_exact(&builtin("EX1").unwrap(), 7).unwrap()[&Radicand::ONE];
    assert_eq!(residue_of_rational(alpha, 7, 3).unwrap().value(), &BigUint::from(217u32));
    let ex6 = partial_sum_modular(&builtin("EX6").unwrap(), 5, 5).unwrap();
    assert_eq!(ex6[&Radicand::ONE].value(), &BigUint::from(1125u32));
    assert_eq!(BigInt::from(47 * 47 + 45 * 45 * 7), BigInt::from(128 * 128));
}
