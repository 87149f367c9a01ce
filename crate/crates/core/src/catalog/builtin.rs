use super::{CatalogError, SeriesSpec, SeriesTarget};
use crate::congruence::CongruenceTarget;
use crate::quad_ring::{MultiQuadElement, Radicand};
use crate::rational::Rational;
use crate::sequences::SequenceKind;

pub const BUILTIN_IDS: [&str; 7] = ["EX1", "EX2", "EX3", "EX4", "EX5", "EX6", "EX7"];

fn q(s: &str) -> Rational {
    s.parse().expect("built-in rational literal")
}

/// `sum c * sqrt(d)` from `(d, "c")` pairs with square-free `d`.
fn mq(terms: &[(i64, &str)]) -> MultiQuadElement {
    terms.iter().fold(MultiQuadElement::zero(), |acc, &(d, c)| {
        &acc + &MultiQuadElement::from_basis(Radicand::new(d).expect("built-in radicand"), q(c))
    })
}

fn hyper(upper: &[&str]) -> SequenceKind {
    SequenceKind::hypergeometric(&upper.iter().map(|s| q(s)).collect::<Vec<_>>())
}

fn pi_target(d: i64, a: &str, jacobi: i64) -> CongruenceTarget {
    CongruenceTarget::new(Radicand::new(d).expect("built-in radicand"), q(a), jacobi, 1, 3)
        .expect("built-in congruence target")
}

fn pi2_target(d: i64, a: &str, jacobi: i64) -> CongruenceTarget {
    CongruenceTarget::new(Radicand::new(d).expect("built-in radicand"), q(a), jacobi, 2, 5)
        .expect("built-in congruence target")
}

fn ex1() -> SeriesSpec {
    // sqrt(15)/(2^7 5^2) * sum (1/2)(1/6)(5/6)/(1)^3 (263 + 5418n) (-1)^n / 80^(3n) = 1/pi,
    // with the sqrt(15) kept outside the partial sums.
    SeriesSpec {
        id: "EX1".into(),
        kind: hyper(&["1/2", "1/6", "5/6"]),
        z: mq(&[(1, "-1/512000")]),
        poly: vec![mq(&[(1, "263")]), mq(&[(1, "5418")])],
        scale: mq(&[(15, "1/3200")]),
        target: SeriesTarget::PiInverse,
        p_min: 5,
        targets: vec![pi_target(1, "263", -15)],
        convergent: true,
    }
}

fn ex2() -> SeriesSpec {
    // congruence form (7 sqrt7 - 10) + (39 sqrt7 - 21) n is 27 times the series form
    SeriesSpec {
        id: "EX2".into(),
        kind: hyper(&["1/2", "1/3", "2/3"]),
        z: mq(&[(1, "-34/54"), (7, "13/54")]),
        poly: vec![mq(&[(1, "-10"), (7, "7")]), mq(&[(1, "-21"), (7, "39")])],
        scale: mq(&[(1, "1/27")]),
        target: SeriesTarget::PiInverse,
        p_min: 7,
        targets: vec![pi_target(1, "-10", -1), pi_target(7, "7", -7)],
        convergent: true,
    }
}

fn ex3() -> SeriesSpec {
    // z = ((sqrt5 - 1)/2)^12
    let golden = mq(&[(1, "-1/2"), (5, "1/2")]);
    SeriesSpec {
        id: "EX3".into(),
        kind: SequenceKind::Apery,
        z: golden.pow(12),
        poly: vec![mq(&[(3, "-134"), (15, "60")]), mq(&[(3, "-160"), (15, "72")])],
        scale: mq(&[(1, "1")]),
        target: SeriesTarget::PiInverse,
        p_min: 5,
        targets: vec![pi_target(3, "-134", -3), pi_target(15, "60", -15)],
        convergent: true,
    }
}

fn ex4() -> SeriesSpec {
    // The term is (1/2)_n^3/(1)_n^3: with (1/2)(1/6)(5/6) neither the 1/pi
    // identity nor the congruences hold for these a, b, z.
    SeriesSpec {
        id: "EX4".into(),
        kind: hyper(&["1/2", "1/2", "1/2"]),
        z: mq(&[(1, "-18872"), (2, "-13344"), (3, "10896"), (6, "7704")]),
        poly: vec![
            mq(&[(1, "73"), (2, "52"), (3, "-42"), (6, "-30")]),
            mq(&[(1, "168"), (2, "120"), (3, "-96"), (6, "-69")]),
        ],
        scale: mq(&[(1, "1")]),
        target: SeriesTarget::PiInverse,
        p_min: 3,
        targets: vec![
            pi_target(1, "73", -1),
            pi_target(2, "52", -2),
            pi_target(3, "-42", -3),
            pi_target(6, "-30", -6),
        ],
        convergent: true,
    }
}

fn ex5() -> SeriesSpec {
    // congruence form is 64 times the series form; |z| = 1
    SeriesSpec {
        id: "EX5".into(),
        kind: hyper(&["1/2", "1/2", "1/2"]),
        z: mq(&[(1, "47/128"), (-7, "45/128")]),
        poly: vec![mq(&[(-1, "-13"), (7, "7")]), mq(&[(-1, "-42"), (7, "30")])],
        scale: mq(&[(1, "1/64")]),
        target: SeriesTarget::PiInverse,
        p_min: 7,
        targets: vec![pi_target(-1, "-13", 1), pi_target(7, "7", -7)],
        convergent: true,
    }
}

fn ex6() -> SeriesSpec {
    SeriesSpec {
        id: "EX6".into(),
        kind: hyper(&["1/2", "1/3", "2/3", "1/6", "5/6"]),
        z: mq(&[(1, "-729/4096")]),
        poly: vec![mq(&[(1, "45")]), mq(&[(1, "549")]), mq(&[(1, "1930")])],
        scale: mq(&[(1, "1/384")]),
        target: SeriesTarget::PiSquaredInverse,
        p_min: 3,
        targets: vec![pi2_target(1, "45", 1)],
        convergent: true,
    }
}

fn ex7() -> SeriesSpec {
    // z = ((15 sqrt5 - 33)/2)^3
    let base = mq(&[(1, "-33/2"), (5, "15/2")]);
    SeriesSpec {
        id: "EX7".into(),
        kind: hyper(&["1/2", "1/2", "1/2", "1/3", "2/3"]),
        z: base.pow(3),
        poly: vec![
            mq(&[(1, "56"), (5, "-25")]),
            mq(&[(1, "303"), (5, "-135")]),
            mq(&[(1, "1220/3"), (5, "-180")]),
        ],
        scale: mq(&[(1, "1")]),
        target: SeriesTarget::PiSquaredInverse,
        p_min: 5,
        targets: vec![pi2_target(1, "56", 1), pi2_target(5, "-25", 5)],
        convergent: true,
    }
}

/// One of the seven built-in series, by id (case-insensitive).
pub fn builtin(id: &str) -> Result<SeriesSpec, CatalogError> {
    match id.to_ascii_uppercase().as_str() {
        "EX1" => Ok(ex1()),
        "EX2" => Ok(ex2()),
        "EX3" => Ok(ex3()),
        "EX4" => Ok(ex4()),
        "EX5" => Ok(ex5()),
        "EX6" => Ok(ex6()),
        "EX7" => Ok(ex7()),
        _ => Err(CatalogError::UnknownSeries(id.to_string())),
    }
}

pub fn builtins() -> Vec<SeriesSpec> {
    BUILTIN_IDS.iter().map(|id| builtin(id).expect("built-in id")).collect()
}
