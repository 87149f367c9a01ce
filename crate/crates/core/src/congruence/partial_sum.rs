use std::collections::BTreeMap;

use crate::catalog::SeriesSpec;
use crate::modular::{ArithError, ModRing, ResidueClass, Scalars};
use crate::quad_ring::{basis_product, MultiQuadElement, Radicand};
use crate::rational::Rational;
use crate::sequences::{term_stream, TermStream};

use super::CongruenceError;

/// Running partial sums `sum_{n < count} A_n poly(n) z^n` in exact arithmetic.
///
/// Partial sums at successive primes share prefixes, so one pass can serve
/// every prime of a range.
pub struct ExactPrefixSums<'a> {
    spec: &'a SeriesSpec,
    terms: Box<dyn Iterator<Item = Rational> + 'a>,
    z_power: MultiQuadElement,
    sum: MultiQuadElement,
    count: u64,
}

impl<'a> ExactPrefixSums<'a> {
    pub fn new(spec: &'a SeriesSpec) -> Self {
        ExactPrefixSums {
            spec,
            terms: Box::new(term_stream(&spec.kind)),
            z_power: MultiQuadElement::one(),
            sum: MultiQuadElement::zero(),
            count: 0,
        }
    }

    /// Number of terms summed so far.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Extends the sum to `count` terms (never shrinks).
    pub fn advance_to(&mut self, count: u64) -> &MultiQuadElement {
        while self.count < count {
            let n = self.count;
            let a_n = self.terms.next().expect("sequence streams are infinite");
            let term = (&self.spec.poly_at(n) * &self.z_power).scale(&a_n);
            self.sum = &self.sum + &term;
            self.z_power = &self.z_power * &self.spec.z;
            self.count += 1;
        }
        &self.sum
    }
}

/// `sum_{n < count} A_n poly(n) z^n`; zero for `count = 0`.
pub fn partial_sum_terms(spec: &SeriesSpec, count: u64) -> MultiQuadElement {
    ExactPrefixSums::new(spec).advance_to(count).clone()
}

pub(crate) fn check_prime(spec: &SeriesSpec, p: u64) -> Result<(), CongruenceError> {
    if p == 2 || !crate::modular::is_prime_u64(p) {
        return Err(CongruenceError::NotOddPrime(p));
    }
    if p <= spec.p_min {
        return Err(CongruenceError::BelowThreshold { prime: p, p_min: spec.p_min });
    }
    Ok(())
}

/// Splits a partial sum into components, listing every target radicand even
/// when its coefficient is zero.
pub(crate) fn decompose(spec: &SeriesSpec, sum: &MultiQuadElement) -> BTreeMap<Radicand, Rational> {
    let mut out: BTreeMap<Radicand, Rational> = sum.components().map(|(d, c)| (d, c.clone())).collect();
    for t in &spec.targets {
        out.entry(t.component).or_insert_with(Rational::zero);
    }
    out
}

/// The rational components `alpha_d(p)` of `sum_{n=0}^{p-1} A_n poly(n) z^n`.
pub fn partial_sum_exact(spec: &SeriesSpec, p: u64) -> Result<BTreeMap<Radicand, Rational>, CongruenceError> {
    check_prime(spec, p)?;
    Ok(decompose(spec, &partial_sum_terms(spec, p)))
}

/// Formal combination `sum c_d sqrt(d)` with coefficients in `Z/p^k`.
type ModElement = BTreeMap<Radicand, u64>;

fn mod_element(ring: &ModRing, x: &MultiQuadElement) -> Result<ModElement, ArithError> {
    x.components().map(|(d, c)| Ok((d, ring.from_rational(c)?))).collect()
}

fn mod_accumulate(ring: &ModRing, acc: &mut ModElement, d: Radicand, c: u64) {
    let slot = acc.entry(d).or_insert(0);
    *slot = ring.add(slot, &c);
}

fn mod_mul(ring: &ModRing, x: &ModElement, y: &ModElement) -> ModElement {
    let mut out = ModElement::new();
    for (a, u) in x {
        for (b, v) in y {
            let (factor, d) = basis_product(*a, *b);
            let c = ring.mul(&ring.mul(u, v), &ring.from_int(factor));
            mod_accumulate(ring, &mut out, d, c);
        }
    }
    out
}

/// The same accumulation as the exact path, over `Z/p^k` where `p^k` is the
/// ring modulus. Radicands whose coefficient is zero are dropped.
pub(crate) fn modular_sum(spec: &SeriesSpec, ring: &ModRing, count: u64) -> Result<ModElement, ArithError> {
    let z = mod_element(ring, &spec.z)?;
    let poly = spec.poly.iter().map(|c| mod_element(ring, c)).collect::<Result<Vec<_>, _>>()?;
    let mut terms = TermStream::new(&spec.kind, *ring);
    let mut z_power: ModElement = [(Radicand::ONE, ring.one())].into_iter().collect();
    let mut sum = ModElement::new();
    for n in 0..count {
        let a_n = terms.next().expect("sequence streams are infinite")?;
        let n_res = ring.from_int(n as i64);
        // Horner evaluation of poly(n)
        let mut poly_n = ModElement::new();
        for c in poly.iter().rev() {
            let mut next = ModElement::new();
            for (d, v) in &poly_n {
                mod_accumulate(ring, &mut next, *d, ring.mul(v, &n_res));
            }
            for (d, v) in c {
                mod_accumulate(ring, &mut next, *d, *v);
            }
            poly_n = next;
        }
        for (d, v) in mod_mul(ring, &poly_n, &z_power) {
            mod_accumulate(ring, &mut sum, d, ring.mul(&v, &a_n));
        }
        if n + 1 < count {
            z_power = mod_mul(ring, &z_power, &z);
        }
    }
    sum.retain(|_, v| *v != 0);
    Ok(sum)
}

/// Residues of the components of the partial sum at `p`, modulo `p^k`.
pub fn partial_sum_modular(
    spec: &SeriesSpec,
    p: u64,
    k: u32,
) -> Result<BTreeMap<Radicand, ResidueClass>, CongruenceError> {
    check_prime(spec, p)?;
    let ring = ModRing::new(p, k)?;
    let sum = modular_sum(spec, &ring, p)?;
    let mut out: BTreeMap<Radicand, ResidueClass> =
        sum.into_iter().map(|(d, v)| (d, ring.residue_class(v, k))).collect();
    for t in &spec.targets {
        out.entry(t.component).or_insert_with(|| ring.residue_class(0, k));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use crate::modular::residue_of_rational;
    use num_bigint::BigUint;

    #[test]
    fn ex1_at_seven() {
        let spec = builtin("EX1").unwrap();
        let exact = partial_sum_exact(&spec, 7).unwrap();
        assert_eq!(exact.len(), 1);
        let alpha = &exact[&Radicand::ONE];
        let r = residue_of_rational(alpha, 7, 3).unwrap();
        assert_eq!(r.value(), &BigUint::from(217u32));
        let modular = partial_sum_modular(&spec, 7, 3).unwrap();
        assert_eq!(modular[&Radicand::ONE], r);
    }

    #[test]
    fn ex3_at_seven() {
        let spec = builtin("EX3").unwrap();
        let exact = partial_sum_exact(&spec, 7).unwrap();
        let keys: Vec<i64> = exact.keys().map(|d| d.get()).collect();
        assert_eq!(keys, [3, 15]);
        let r = residue_of_rational(&exact[&Radicand::new(3).unwrap()], 7, 3).unwrap();
        assert_eq!(r.value(), &BigUint::from(91u32));
    }

    #[test]
    fn ex6_modular_at_five() {
        let spec = builtin("EX6").unwrap();
        let m = partial_sum_modular(&spec, 5, 5).unwrap();
        assert_eq!(m[&Radicand::ONE].value(), &BigUint::from(1125u32));
    }

    #[test]
    fn threshold_is_enforced() {
        let spec = builtin("EX2").unwrap();
        assert_eq!(
            partial_sum_modular(&spec, 3, 3),
            Err(CongruenceError::BelowThreshold { prime: 3, p_min: 7 })
        );
        assert_eq!(partial_sum_exact(&spec, 7), Err(CongruenceError::BelowThreshold { prime: 7, p_min: 7 }));
        assert_eq!(partial_sum_exact(&spec, 15), Err(CongruenceError::NotOddPrime(15)));
    }

    #[test]
    fn empty_sum_is_zero() {
        for spec in crate::catalog::builtins() {
            assert!(partial_sum_terms(&spec, 0).is_zero());
        }
    }

    #[test]
    fn prefix_sums_match_fresh_sums() {
        let spec = builtin("EX5").unwrap();
        let mut prefix = ExactPrefixSums::new(&spec);
        for p in [11u64, 13, 17] {
            assert_eq!(*prefix.advance_to(p), partial_sum_terms(&spec, p));
        }
        assert_eq!(prefix.count(), 17);
    }

    #[test]
    fn modular_path_flags_bad_denominators() {
        // p = 5 divides the denominator of z = -1/512000
        let mut spec = builtin("EX1").unwrap();
        spec.p_min = 3;
        assert_eq!(
            partial_sum_modular(&spec, 5, 3),
            Err(CongruenceError::Arith(ArithError::DenominatorNotInvertible { prime: 5 }))
        );
    }
}
