//! Random sparse polynomials and exact division instances.

use std::collections::BTreeSet;

use num_bigint::{BigInt, RandBigInt};
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ff::{Field, Integers};
use crate::sparse_poly::{SparsePoly, MAX_EXPONENT};

/// `terms` distinct exponents in `[0, degree]`, always containing both ends
/// when `terms >= 2`.
pub fn random_support<G: Rng + ?Sized>(terms: usize, degree: u64, rng: &mut G) -> Result<Vec<u64>> {
    if degree > MAX_EXPONENT {
        return Err(Error::ExponentOverflow);
    }
    if terms == 0 || terms as u128 > degree as u128 + 1 {
        return Err(Error::InvalidArgument(format!("cannot place {terms} terms in degree {degree}")));
    }
    let mut set = BTreeSet::from([degree]);
    if terms >= 2 {
        set.insert(0);
    }
    if terms as u128 * 2 > degree as u128 + 1 {
        // dense enough that rejection sampling would crawl
        let picks = rand::seq::index::sample(rng, degree as usize + 1, degree as usize + 1);
        for e in picks {
            if set.len() == terms {
                break;
            }
            set.insert(e as u64);
        }
    }
    while set.len() < terms {
        set.insert(rng.gen_range(0..=degree));
    }
    Ok(set.into_iter().collect())
}

/// Random polynomial with exactly `terms` terms and the given degree.
pub fn random_sparse<F: Field, G: Rng + ?Sized>(field: &F, terms: usize, degree: u64, rng: &mut G) -> Result<SparsePoly<F>> {
    let support = random_support(terms, degree, rng)?;
    let raw = support.into_iter().map(|e| (e, field.random_nonzero(rng))).collect();
    Ok(SparsePoly::new(field.clone(), raw))
}

/// Random nonzero integer of absolute value below `2^bits`.
pub fn random_signed<G: Rng + ?Sized>(bits: u64, rng: &mut G) -> BigInt {
    loop {
        let c = rng.gen_biguint(bits.max(1));
        if !c.is_zero() {
            let c = BigInt::from(c);
            return if rng.gen() { -c } else { c };
        }
    }
}

pub fn random_sparse_z<G: Rng + ?Sized>(terms: usize, degree: u64, height_bits: u64, rng: &mut G) -> Result<SparsePoly<Integers>> {
    let support = random_support(terms, degree, rng)?;
    let raw = support.into_iter().map(|e| (e, random_signed(height_bits, rng))).collect();
    Ok(SparsePoly::new(Integers, raw))
}

/// `(F, G, Q)` with `F = G Q`.
pub struct Instance<R: crate::ff::Ring> {
    pub f: SparsePoly<R>,
    pub g: SparsePoly<R>,
    pub q: SparsePoly<R>,
}

/// Exact instance over a field. Zero divisors of the product cannot occur,
/// so `deg F = deg G + deg Q`.
pub fn field_instance<F: Field, G: Rng + ?Sized>(
    field: &F,
    q_terms: usize,
    q_degree: u64,
    g_terms: usize,
    g_degree: u64,
    rng: &mut G,
) -> Result<Instance<F>> {
    let g = random_sparse(field, g_terms, g_degree, rng)?;
    let q = random_sparse(field, q_terms, q_degree, rng)?;
    let f = g.mul_naive(&q)?;
    Ok(Instance { f, g, q })
}

pub fn integer_instance<G: Rng + ?Sized>(
    q_terms: usize,
    q_degree: u64,
    g_terms: usize,
    g_degree: u64,
    height_bits: u64,
    rng: &mut G,
) -> Result<Instance<Integers>> {
    let g = random_sparse_z(g_terms, g_degree, height_bits, rng)?;
    let q = random_sparse_z(q_terms, q_degree, height_bits, rng)?;
    let f = g.mul_naive(&q)?;
    Ok(Instance { f, g, q })
}
