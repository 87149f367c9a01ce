/// Primes in the closed range `[lo, hi]`, ascending, by a segmented sieve.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let lo = lo.max(2);
    let root = (hi as f64).sqrt() as u64 + 1;
    let mut small = vec![true; root as usize + 1];
    let mut base = Vec::new();
    for i in 2..=root {
        if small[i as usize] {
            base.push(i);
            let mut j = i * i;
            while j <= root {
                small[j as usize] = false;
                j += i;
            }
        }
    }

    const SEGMENT: u64 = 1 << 16;
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = hi.min(start.saturating_add(SEGMENT - 1));
        let mut is_prime = vec![true; (end - start + 1) as usize];
        for &q in &base {
            if q * q > end {
                break;
            }
            let first = (q * q).max(start.div_ceil(q) * q);
            let mut m = first;
            while m <= end {
                is_prime[(m - start) as usize] = false;
                m += q;
            }
        }
        out.extend(is_prime.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| start + i as u64));
        if end == u64::MAX {
            break;
        }
        start = end + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn examples() {
        assert_eq!(primes_in(2, 10), vec![2, 3, 5, 7]);
        assert!(primes_in(8, 10).is_empty());
        assert_eq!(primes_in(191, 200), vec![191, 193, 197, 199]);
        assert!(primes_in(0, 1).is_empty());
        assert!(primes_in(10, 2).is_empty());
    }

    #[test]
    fn matches_trial_division_across_segments() {
        let lo = 60_000;
        let hi = 200_000;
        let expect: Vec<u64> = (lo..=hi).filter(|&n| trial(n)).collect();
        assert_eq!(primes_in(lo, hi), expect);
    }
}
