//! Ramanujan-Sato-type sequences `A_n`.
//!
//! Each kind has two independent evaluations: a stream that produces
//! `A_0, A_1, ...` incrementally (term ratios for hypergeometric products,
//! cached Pascal rows for binomial sums) and [`term_direct`], which evaluates
//! the defining formula literally and serves as the oracle for the stream.
//! Adding a kind means adding both.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::modular::{ArithError, ExactField, Scalars};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[non_exhaustive]
pub enum SequenceKind {
    /// `prod (upper_i)_n / prod (lower_i)_n`.
    Hypergeometric { upper: Vec<Rational>, lower: Vec<Rational> },
    /// `sum_k C(n,k)^2 C(n+k,k)^2`.
    Apery,
    /// `sum_k C(n,k)^2 C(2k,k) C(2n-2k,n-k)`.
    Domb,
    /// `sum_k (-1)^(n-k) 3^(n-3k) (3k)!/(k!)^3 C(n,3k) C(n+k,k)`.
    AlmkvistZudilin,
    /// `sum_k C(2k,k)^2 C(2n-2k,n-k)^2`.
    ConvolutionSquares,
    /// `C(2n,n) sum_k C(n,k)^3`.
    CentralTimesCubes,
    /// `C(2n,n) sum_k C(n,k)^2 C(2k,k)`.
    CentralTimesSquareCatalan,
}

impl SequenceKind {
    /// Hypergeometric kind with all lower parameters equal to one.
    pub fn hypergeometric(upper: &[Rational]) -> Self {
        SequenceKind::Hypergeometric { upper: upper.to_vec(), lower: vec![Rational::one(); upper.len()] }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SequenceKind::Hypergeometric { .. } => "hypergeometric",
            SequenceKind::Apery => "apery",
            SequenceKind::Domb => "domb",
            SequenceKind::AlmkvistZudilin => "almkvist_zudilin",
            SequenceKind::ConvolutionSquares => "convolution_squares",
            SequenceKind::CentralTimesCubes => "central_times_cubes",
            SequenceKind::CentralTimesSquareCatalan => "central_times_square_catalan",
        }
    }

    pub fn is_integral(&self) -> bool {
        !matches!(self, SequenceKind::Hypergeometric { .. })
    }

    /// Every built-in kind except hypergeometric ones, for exhaustive tests.
    pub fn integer_kinds() -> [SequenceKind; 6] {
        [
            SequenceKind::Apery,
            SequenceKind::Domb,
            SequenceKind::AlmkvistZudilin,
            SequenceKind::ConvolutionSquares,
            SequenceKind::CentralTimesCubes,
            SequenceKind::CentralTimesSquareCatalan,
        ]
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceKind::Hypergeometric { upper, .. } => {
                let params: Vec<String> = upper.iter().map(|r| r.to_string()).collect();
                write!(f, "hypergeometric({})", params.join(","))
            }
            other => f.write_str(other.name()),
        }
    }
}

/// Pascal's triangle over an arbitrary scalar ring, grown on demand.
struct Pascal<S: Scalars> {
    rows: Vec<Vec<S::Elem>>,
}

impl<S: Scalars> Pascal<S> {
    fn new(ring: &S) -> Self {
        Pascal { rows: vec![vec![ring.one()]] }
    }

    fn ensure(&mut self, ring: &S, n: usize) {
        while self.rows.len() <= n {
            let prev = self.rows.last().expect("row 0 always present");
            let mut row = Vec::with_capacity(prev.len() + 1);
            row.push(ring.one());
            for w in prev.windows(2) {
                row.push(ring.add(&w[0], &w[1]));
            }
            row.push(ring.one());
            self.rows.push(row);
        }
    }

    fn get(&self, n: usize, k: usize) -> &S::Elem {
        &self.rows[n][k]
    }
}

enum StreamState<S: Scalars> {
    Hyper { current: S::Elem, upper: Vec<S::Elem>, lower: Vec<S::Elem> },
    Binomial { pascal: Pascal<S>, powers_of_three: Vec<S::Elem> },
}

/// Yields `A_0, A_1, ...` over any scalar ring.
///
/// Over `Z/p^k` an item is an error as soon as a term ratio needs an inverse
/// that does not exist; the stream stops after reporting it.
pub struct TermStream<S: Scalars> {
    kind: SequenceKind,
    ring: S,
    n: u64,
    state: Result<StreamState<S>, ArithError>,
}

impl<S: Scalars> TermStream<S> {
    pub fn new(kind: &SequenceKind, ring: S) -> Self {
        let state = match kind {
            SequenceKind::Hypergeometric { upper, lower } => {
                let conv = |v: &[Rational]| v.iter().map(|r| ring.from_rational(r)).collect::<Result<Vec<_>, _>>();
                conv(upper).and_then(|upper| {
                    let lower = conv(lower)?;
                    Ok(StreamState::Hyper { current: ring.one(), upper, lower })
                })
            }
            _ => Ok(StreamState::Binomial { pascal: Pascal::new(&ring), powers_of_three: vec![ring.one()] }),
        };
        TermStream { kind: kind.clone(), ring, n: 0, state }
    }

    fn next_term(&mut self) -> Result<S::Elem, ArithError> {
        let n = self.n;
        let ring = &self.ring;
        let state = self.state.as_mut().map_err(|e| e.clone())?;
        match state {
            StreamState::Hyper { current, upper, lower } => {
                if n > 0 {
                    // A_n = A_{n-1} * prod(u + n - 1) / prod(l + n - 1)
                    let shift = ring.from_int(n as i64 - 1);
                    let mut num = current.clone();
                    for u in upper.iter() {
                        num = ring.mul(&num, &ring.add(u, &shift));
                    }
                    let mut den = ring.one();
                    for l in lower.iter() {
                        den = ring.mul(&den, &ring.add(l, &shift));
                    }
                    *current = ring.div(&num, &den)?;
                }
                Ok(current.clone())
            }
            StreamState::Binomial { pascal, powers_of_three } => {
                let n = n as usize;
                pascal.ensure(ring, 2 * n);
                while powers_of_three.len() <= n {
                    let last = powers_of_three.last().expect("nonempty");
                    powers_of_three.push(ring.mul(last, &ring.from_int(3)));
                }
                Ok(binomial_sum(&self.kind, ring, pascal, powers_of_three, n))
            }
        }
    }
}

fn binomial_sum<S: Scalars>(
    kind: &SequenceKind,
    ring: &S,
    pascal: &Pascal<S>,
    pow3: &[S::Elem],
    n: usize,
) -> S::Elem {
    let c = |a: usize, b: usize| pascal.get(a, b);
    let sq = |x: &S::Elem| ring.mul(x, x);
    let mut sum = ring.zero();
    match kind {
        SequenceKind::Apery => {
            for k in 0..=n {
                let t = ring.mul(&sq(c(n, k)), &sq(c(n + k, k)));
                sum = ring.add(&sum, &t);
            }
        }
        SequenceKind::Domb => {
            for k in 0..=n {
                let t = ring.mul(&ring.mul(&sq(c(n, k)), c(2 * k, k)), c(2 * n - 2 * k, n - k));
                sum = ring.add(&sum, &t);
            }
        }
        SequenceKind::AlmkvistZudilin => {
            for k in 0..=n / 3 {
                // (3k)!/(k!)^3 = C(3k,k) C(2k,k)
                let multinomial = ring.mul(c(3 * k, k), c(2 * k, k));
                let mut t = ring.mul(&ring.mul(&pow3[n - 3 * k], &multinomial), &ring.mul(c(n, 3 * k), c(n + k, k)));
                if (n - k) % 2 == 1 {
                    t = ring.neg(&t);
                }
                sum = ring.add(&sum, &t);
            }
        }
        SequenceKind::ConvolutionSquares => {
            for k in 0..=n {
                let t = ring.mul(&sq(c(2 * k, k)), &sq(c(2 * n - 2 * k, n - k)));
                sum = ring.add(&sum, &t);
            }
        }
        SequenceKind::CentralTimesCubes => {
            for k in 0..=n {
                sum = ring.add(&sum, &ring.mul(&sq(c(n, k)), c(n, k)));
            }
            sum = ring.mul(&sum, c(2 * n, n));
        }
        SequenceKind::CentralTimesSquareCatalan => {
            for k in 0..=n {
                sum = ring.add(&sum, &ring.mul(&sq(c(n, k)), c(2 * k, k)));
            }
            sum = ring.mul(&sum, c(2 * n, n));
        }
        SequenceKind::Hypergeometric { .. } => unreachable!("hypergeometric kinds use the ratio state"),
    }
    sum
}

impl<S: Scalars> Iterator for TermStream<S> {
    type Item = Result<S::Elem, ArithError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.state.is_err() && self.n > 0 {
            return None;
        }
        let out = self.next_term();
        if let Err(e) = &out {
            self.state = Err(e.clone());
        }
        self.n += 1;
        Some(out)
    }
}

/// Exact stream of `A_n` as rationals.
pub fn term_stream(kind: &SequenceKind) -> impl Iterator<Item = Rational> {
    TermStream::new(kind, ExactField).map(|t| t.expect("exact arithmetic cannot fail"))
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn pochhammer(s: &Rational, n: u64) -> Rational {
    (0..n).fold(Rational::one(), |acc, j| acc * (s + &Rational::from(j as i64)))
}

/// `A_n` from the defining formula, term by term.
pub fn term_direct(kind: &SequenceKind, n: u64) -> Rational {
    let c = binomial;
    let int = |v: BigInt| Rational::from(v);
    match kind {
        SequenceKind::Hypergeometric { upper, lower } => {
            let num = upper.iter().fold(Rational::one(), |acc, s| acc * pochhammer(s, n));
            let den = lower.iter().fold(Rational::one(), |acc, s| acc * pochhammer(s, n));
            num / den
        }
        SequenceKind::Apery => int((0..=n).map(|k| c(n, k).pow(2) * c(n + k, k).pow(2)).sum()),
        SequenceKind::Domb => int((0..=n).map(|k| c(n, k).pow(2) * c(2 * k, k) * c(2 * n - 2 * k, n - k)).sum()),
        SequenceKind::AlmkvistZudilin => int((0..=n / 3)
            .map(|k| {
                let sign = if (n - k).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
                let multinomial = factorial(3 * k) / factorial(k).pow(3);
                sign * BigInt::from(3).pow((n - 3 * k) as u32) * multinomial * c(n, 3 * k) * c(n + k, k)
            })
            .sum()),
        SequenceKind::ConvolutionSquares => {
            int((0..=n).map(|k| c(2 * k, k).pow(2) * c(2 * n - 2 * k, n - k).pow(2)).sum())
        }
        SequenceKind::CentralTimesCubes => int(c(2 * n, n) * (0..=n).map(|k| c(n, k).pow(3)).sum::<BigInt>()),
        SequenceKind::CentralTimesSquareCatalan => {
            int(c(2 * n, n) * (0..=n).map(|k| c(n, k).pow(2) * c(2 * k, k)).sum::<BigInt>())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::ModRing;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn nth(kind: &SequenceKind, n: usize) -> Rational {
        term_stream(kind).nth(n).unwrap()
    }

    #[test]
    fn stream_examples() {
        let ramanujan6 = SequenceKind::hypergeometric(&[q("1/2"), q("1/6"), q("5/6")]);
        assert_eq!(nth(&ramanujan6, 1), q("5/72"));
        assert_eq!(nth(&SequenceKind::Apery, 2), q("73"));
        assert_eq!(nth(&SequenceKind::Domb, 2), q("28"));
        assert_eq!(nth(&SequenceKind::AlmkvistZudilin, 1), q("-3"));
        assert_eq!(nth(&SequenceKind::ConvolutionSquares, 1), q("8"));
        assert_eq!(nth(&SequenceKind::CentralTimesCubes, 1), q("4"));
        assert_eq!(nth(&SequenceKind::CentralTimesSquareCatalan, 1), q("6"));
    }

    #[test]
    fn direct_examples() {
        let halves = SequenceKind::hypergeometric(&[q("1/2"), q("1/2"), q("1/2")]);
        assert_eq!(term_direct(&halves, 1), q("1/8"));
        assert_eq!(term_direct(&SequenceKind::Apery, 1), q("5"));
        for kind in SequenceKind::integer_kinds() {
            assert_eq!(term_direct(&kind, 0), Rational::one(), "{kind}");
        }
        assert_eq!(term_direct(&halves, 0), Rational::one());
    }

    #[test]
    fn known_prefixes() {
        // OEIS A005259, A002895, A125143
        let apery: Vec<Rational> = term_stream(&SequenceKind::Apery).take(5).collect();
        assert_eq!(apery, [1, 5, 73, 1445, 33001].map(Rational::from));
        let domb: Vec<Rational> = term_stream(&SequenceKind::Domb).take(5).collect();
        assert_eq!(domb, [1, 4, 28, 256, 2716].map(Rational::from));
        let az: Vec<Rational> = term_stream(&SequenceKind::AlmkvistZudilin).take(5).collect();
        assert_eq!(az, [1, -3, 9, -3, -279].map(Rational::from));
    }

    #[test]
    fn modular_stream_matches_reduction() {
        let ring = ModRing::new(11, 3).unwrap();
        let kind = SequenceKind::hypergeometric(&[q("1/2"), q("1/3"), q("2/3")]);
        let exact: Vec<Rational> = term_stream(&kind).take(11).collect();
        let modular: Vec<u64> = TermStream::new(&kind, ring).take(11).map(Result::unwrap).collect();
        for (e, m) in exact.iter().zip(&modular) {
            assert_eq!(ring.from_rational(e).unwrap(), *m);
        }
    }

    #[test]
    fn modular_stream_reports_noninvertible_ratio() {
        let ring = ModRing::new(5, 3).unwrap();
        let kind = SequenceKind::hypergeometric(&[q("1/2")]);
        let items: Vec<_> = TermStream::new(&kind, ring).take(10).collect();
        // dividing by (1 + 4) at n = 5 fails
        assert!(items[..5].iter().all(Result::is_ok));
        assert_eq!(items[5], Err(ArithError::DenominatorNotInvertible { prime: 5 }));
        assert_eq!(items.len(), 6);
    }
}
