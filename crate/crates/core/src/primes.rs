//! Prime generation: sieves, Miller-Rabin, and random probable primes.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

const SEGMENT_THRESHOLD: u64 = 10_000_000;
const SEGMENT_LEN: u64 = 1 << 18;

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let r = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with `rounds` random bases.
pub fn is_probable_prime_big<G: Rng + ?Sized>(n: &BigUint, rounds: u32, rng: &mut G) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for p in SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let r = nm1.trailing_zeros().unwrap();
    let d = &nm1 >> r;
    let two = BigUint::from(2u32);
    'witness: for _ in 0..rounds.max(1) {
        let a = rng.gen_biguint_range(&two, &nm1);
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..r {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const SMALL_PRIMES: [u32; 25] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// All primes in `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    if hi <= SEGMENT_THRESHOLD {
        return simple_sieve(hi).into_iter().filter(|&p| p >= lo).collect();
    }
    let base = simple_sieve(hi.isqrt() + 1);
    let mut out = Vec::new();
    let mut start = lo.max(2);
    while start <= hi {
        let end = (start + SEGMENT_LEN - 1).min(hi);
        let mut composite = vec![false; (end - start + 1) as usize];
        for &p in &base {
            if p * p > end {
                break;
            }
            let first = (start.div_ceil(p) * p).max(p * p);
            let mut m = first;
            while m <= end {
                composite[(m - start) as usize] = true;
                m += p;
            }
        }
        out.extend(composite.iter().enumerate().filter(|(_, &c)| !c).map(|(i, _)| start + i as u64));
        start = end + 1;
    }
    out
}

/// The first `n` primes.
pub fn first_n_primes(n: usize) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let mut bound = if n >= 6 {
        let nf = n as f64;
        (nf * (nf.ln() + nf.ln().ln())).ceil() as u64
    } else {
        13
    };
    loop {
        let ps = primes_between(2, bound);
        if ps.len() >= n {
            return ps[..n].to_vec();
        }
        bound *= 2;
    }
}

/// Primes `p` with `lambda < p < 2 lambda`.
pub fn primes_in_interval(lambda: u64) -> Result<Vec<u64>> {
    if lambda < 21 {
        return Err(Error::InvalidArgument(format!("prime interval needs lambda >= 21, got {lambda}")));
    }
    Ok(primes_between(lambda + 1, 2 * lambda - 1))
}

/// Miller-Rabin rounds for failure probability at most `delta`.
pub fn mr_rounds(delta: f64) -> u32 {
    ((1.0 / delta).log2() / 2.0).ceil().max(1.0) as u32
}

/// A uniformly drawn probable prime in `]n, 2n[`, accepted after
/// `ceil(log2(1/delta)/2)` Miller-Rabin rounds.
pub fn random_probable_prime<G: Rng + ?Sized>(n: &BigUint, delta: f64, rng: &mut G) -> Result<BigUint> {
    if *n < BigUint::from(4u32) {
        return Err(Error::InvalidArgument("random prime needs n >= 4".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta must lie in (0,1), got {delta}")));
    }
    let rounds = mr_rounds(delta);
    let lo = n + 1u32;
    let hi = n << 1u32;
    loop {
        let c = rng.gen_biguint_range(&lo, &hi);
        if c.is_even() {
            continue;
        }
        if is_probable_prime_big(&c, rounds, rng) {
            return Ok(c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn first_25_primes_end_at_97() {
        let ps = first_n_primes(25);
        assert_eq!(ps.len(), 25);
        assert_eq!(*ps.last().unwrap(), 97);
        assert_eq!(&ps[..5], &[2, 3, 5, 7, 11]);
    }

    #[test]
    fn small_counts_use_fallback_bound() {
        for n in 1..10 {
            let ps = first_n_primes(n);
            assert_eq!(ps.len(), n);
            assert!(ps.iter().all(|&p| trial_division(p)));
        }
    }

    #[test]
    fn interval_at_21() {
        assert_eq!(primes_in_interval(21).unwrap(), vec![23, 29, 31, 37, 41]);
    }

    #[test]
    fn interval_at_100_is_strict() {
        let ps = primes_in_interval(100).unwrap();
        assert!(ps.contains(&101) && ps.contains(&199));
        assert!(!ps.contains(&97) && !ps.contains(&211));
        assert!(ps.iter().all(|&p| p > 100 && p < 200));
    }

    #[test]
    fn interval_rejects_small_lambda() {
        assert!(matches!(primes_in_interval(20), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn random_prime_near_ten() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = random_probable_prime(&BigUint::from(10u32), 0.01, &mut rng).unwrap();
            assert!([11u32, 13, 17, 19].iter().any(|&x| p == BigUint::from(x)));
        }
    }

    #[test]
    fn random_prime_rejects_tiny_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(random_probable_prime(&BigUint::from(3u32), 0.1, &mut rng).is_err());
    }

    #[test]
    fn segmented_sieve_agrees_with_miller_rabin() {
        let lo = SEGMENT_THRESHOLD + 1_000;
        let hi = lo + 3 * SEGMENT_LEN;
        let seg = primes_between(lo, hi);
        let mr: Vec<u64> = (lo..=hi).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(seg, mr);
    }

    #[test]
    fn sum_of_first_primes_bound() {
        let ps = first_n_primes(10_000);
        let mut sum = 0u64;
        for (i, p) in ps.iter().enumerate() {
            sum += p;
            let n = (i + 1) as f64;
            if i + 1 > 3 {
                assert!((sum as f64) <= n * n * n.ln(), "N = {}", i + 1);
            }
        }
    }

    #[test]
    fn big_miller_rabin_known_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_probable_prime_big(&m127, 20, &mut rng));
        let m128 = (BigUint::one() << 128u32) - 1u32;
        assert!(!is_probable_prime_big(&m128, 20, &mut rng));
        // Carmichael-like composite above 2^64: product of two primes
        let c = BigUint::from(18446744073709551557u64) * BigUint::from(18446744073709551533u64);
        assert!(!is_probable_prime_big(&c, 20, &mut rng));
    }

    proptest! {
        #[test]
        fn prefixes_are_consistent(a in 1usize..400, b in 1usize..400) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let short = first_n_primes(lo);
            let long = first_n_primes(hi);
            prop_assert_eq!(&long[..lo], &short[..]);
        }

        #[test]
        fn u64_miller_rabin_matches_trial_division(n in 0u64..200_000) {
            prop_assert_eq!(is_prime_u64(n), trial_division(n));
        }
    }
}
