use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::cyclic::CyclicPoly;
use crate::ff::Field;
use crate::sparse_poly::SparsePoly;

/// Recovers terms from reductions `probes[j][i] = Q(alpha_j X) mod X^{p_i} - 1`.
///
/// At each point `alpha_j` the dilated coefficients of distinct terms are
/// distinct with high probability, so a coefficient value seen at a single
/// residue in more than half of the primes pins down its exponent by CRT.
/// The undilated candidate `c alpha_j^{-e}` must lie in the prime subfield
/// and must be found at more than half of the points to be emitted.
pub fn crt_lift<F: Field>(probes: &[Vec<CyclicPoly<F>>], primes: &[usize], alphas: &[F::Elem], d: u64) -> SparsePoly<F> {
    assert_eq!(probes.len(), alphas.len());
    let f = match probes.first().and_then(|row| row.first()) {
        Some(pr) => pr.ring().clone(),
        None => panic!("crt_lift needs at least one probe"),
    };
    let gamma = primes.len();
    let m = alphas.len();
    let mut votes: HashMap<(u64, F::Elem), usize> = HashMap::new();
    for (row, alpha) in probes.iter().zip(alphas) {
        assert_eq!(row.len(), gamma);
        // coefficient value -> per prime index, the residues where it occurs
        let mut seen: HashMap<F::Elem, Vec<(usize, usize)>> = HashMap::new();
        for (i, pr) in row.iter().enumerate() {
            for (r, c) in pr.coeffs().iter().enumerate() {
                if !f.is_zero(c) {
                    seen.entry(c.clone()).or_default().push((i, r));
                }
            }
        }
        let alpha_inv = f.inv(alpha).expect("dilation points are nonzero");
        for (c, occ) in seen {
            let Some(e) = exponent_from_residues(&occ, primes, d) else {
                continue;
            };
            let coef = f.mul(&c, &f.pow_u64(&alpha_inv, e));
            if f.to_prime_subfield(&coef).is_some() {
                *votes.entry((e, coef)).or_default() += 1;
            }
        }
    }
    let mut by_exp: HashMap<u64, Vec<(F::Elem, usize)>> = HashMap::new();
    for ((e, c), v) in votes {
        if 2 * v > m {
            by_exp.entry(e).or_default().push((c, v));
        }
    }
    // two different confirmed coefficients for one exponent means both are suspect
    let terms = by_exp.into_iter().filter(|(_, cs)| cs.len() == 1).map(|(e, mut cs)| (e, cs.pop().unwrap().0)).collect();
    SparsePoly::new(f, terms)
}

/// CRT over the primes at which the value occurs exactly once; needs a
/// strict majority of the prime slots and a combined modulus above `d`.
fn exponent_from_residues(occ: &[(usize, usize)], primes: &[usize], d: u64) -> Option<u64> {
    let gamma = primes.len();
    let mut count = vec![0usize; gamma];
    for &(i, _) in occ {
        count[i] += 1;
    }
    // distinct prime value -> residue; repeated primes must agree
    let mut residues: Vec<(u64, u64)> = Vec::new();
    let mut support = 0usize;
    for &(i, r) in occ {
        if count[i] != 1 {
            continue;
        }
        support += 1;
        let p = primes[i] as u64;
        match residues.iter().find(|(q, _)| *q == p) {
            Some(&(_, r0)) if r0 != r as u64 => return None,
            Some(_) => {}
            None => residues.push((p, r as u64)),
        }
    }
    if 2 * support <= gamma {
        return None;
    }
    let mut modulus = BigUint::from(1u32);
    let mut value = BigUint::zero();
    for &(p, r) in &residues {
        // value + modulus * t = r (mod p)
        let v_mod = (&value % p).to_u64().unwrap();
        let m_mod = (&modulus % p).to_u64().unwrap();
        let diff = (r + p - v_mod) % p;
        let t = (diff as u128 * inv_mod(m_mod, p) as u128 % p as u128) as u64;
        value += &modulus * t;
        modulus *= p;
    }
    if modulus <= BigUint::from(d) {
        return None;
    }
    value.to_u64().filter(|&e| e <= d)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{build_ext_field, Fp, Ring};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_zero_probes() {
        let f = Fp::new(5).unwrap();
        let z = CyclicPoly::new(f.clone(), 23, vec![]);
        let probes = vec![vec![z.clone(), z.clone(), z]];
        assert!(crt_lift(&probes, &[23, 29, 31], &[f.one()], 1000).is_zero());
    }

    #[test]
    fn single_term() {
        let base = Fp::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ext = build_ext_field(&base, 20, &mut rng).unwrap();
        let q = SparsePoly::from_i64(ext.clone(), &[(123_456, 1)]);
        let primes = [23usize, 29, 31, 37, 41];
        let alphas: Vec<_> = (0..3).map(|_| ext.random_nonzero(&mut rng)).collect();
        let probes: Vec<Vec<_>> = alphas.iter().map(|a| primes.iter().map(|&p| q.dilate_reduce(a, p).1).collect()).collect();
        assert_eq!(crt_lift(&probes, &primes, &alphas, 1 << 20), q);
    }

    #[test]
    fn two_terms_without_collisions() {
        let base = Fp::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ext = build_ext_field(&base, 16, &mut rng).unwrap();
        let q = SparsePoly::from_i64(ext.clone(), &[(1000, 1), (77_777, 2)]);
        let primes = [23usize, 29, 31, 37, 41];
        for &p in &primes {
            assert_ne!(1000 % p, 77_777 % p);
        }
        let alphas: Vec<_> = (0..3).map(|_| ext.random_nonzero(&mut rng)).collect();
        let probes: Vec<Vec<_>> = alphas.iter().map(|a| primes.iter().map(|&p| q.dilate_reduce(a, p).1).collect()).collect();
        assert_eq!(crt_lift(&probes, &primes, &alphas, 100_000), q);
    }

    #[test]
    fn residues_combine() {
        // 100 = 8 mod 23, 13 mod 29, 7 mod 31
        let e = exponent_from_residues(&[(0, 8), (1, 13), (2, 7)], &[23, 29, 31], 10_000);
        assert_eq!(e, Some(100));
        // below majority
        assert_eq!(exponent_from_residues(&[(0, 8)], &[23, 29, 31], 10_000), None);
        // combined modulus too small for the degree bound
        assert_eq!(exponent_from_residues(&[(0, 8), (1, 13)], &[23, 29, 31], 10_000), None);
    }
}
