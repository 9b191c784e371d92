//! Exact division over `Z[X]` through prime fields of growing size.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Pow, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::ff::{biguint_to_u64, Fp, FpBig, Integers, PrimeField};
use crate::interp_div::{exact_division, verify_product_z, DivOptions};
use crate::sparse_poly::SparsePoly;

/// Largest absolute value of a coefficient.
pub fn height(a: &SparsePoly<Integers>) -> BigUint {
    a.terms().iter().map(|(_, c)| c.magnitude().clone()).max().unwrap_or_default()
}

/// `(|G| + 1)^ceil((t - 1) / 2) * |F|`, a bound on the height of `F / G`
/// when the quotient has `t` terms.
pub fn height_bound(f: &SparsePoly<Integers>, g: &SparsePoly<Integers>, t: usize) -> BigUint {
    let exp = t.saturating_sub(1).div_ceil(2) as u32;
    Pow::pow(height(g) + 1u32, exp) * height(f)
}

#[derive(Clone, Debug)]
pub struct ZDivisionReport {
    pub quotient: SparsePoly<Integers>,
    /// Number of primes tried.
    pub iterations: usize,
    /// The prime whose image lifted to the verified quotient.
    pub prime: Option<BigUint>,
}

pub fn exact_division_z<G: Rng + ?Sized>(
    f: &SparsePoly<Integers>,
    g: &SparsePoly<Integers>,
    epsilon: f64,
    rng: &mut G,
    opts: &DivOptions,
) -> Result<SparsePoly<Integers>> {
    exact_division_z_report(f, g, epsilon, rng, opts).map(|r| r.quotient)
}

pub fn exact_division_z_report<G: Rng + ?Sized>(
    f: &SparsePoly<Integers>,
    g: &SparsePoly<Integers>,
    epsilon: f64,
    rng: &mut G,
    opts: &DivOptions,
) -> Result<ZDivisionReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("failure probability must lie in (0,1), got {epsilon}")));
    }
    let dg = g.degree().ok_or(Error::DivisionByZero)?;
    let trivial = |quotient| Ok(ZDivisionReport { quotient, iterations: 0, prime: None });
    let Some(df) = f.degree() else {
        return trivial(SparsePoly::zero(Integers));
    };
    if df < dg {
        return Err(Error::NotDivisible);
    }
    if dg == 0 || df == dg {
        return trivial(scalar_quotient(f, g)?);
    }
    // Past this size the prime exceeds twice any admissible quotient height.
    let span = (df - dg + 1) as f64;
    let g_bits = (height(g) + 1u32).bits() as f64;
    let give_up_bits = ((span - 1.0) / 2.0).ceil() * g_bits + height(f).bits() as f64 + 2.0;
    let mut n = BigUint::from(df.max(4));
    let mut i = 1usize;
    let mut iterations = 0usize;
    loop {
        i *= 2;
        iterations += 1;
        let q = crate::primes::random_probable_prime(&n, epsilon / (2.0 * i as f64), rng)?;
        let attempt = match biguint_to_u64(&q) {
            Some(small) if small < 1 << 63 => modular_quotient(Fp::new(small)?, f, g, epsilon / (2.0 * i as f64), rng, opts),
            _ => modular_quotient(FpBig::new_unchecked(q.clone()), f, g, epsilon / (2.0 * i as f64), rng, opts),
        };
        n = &n * &n;
        match attempt {
            Ok(cand) => {
                if verify_product_z(f, g, &cand, epsilon / i as f64, rng) {
                    return Ok(ZDivisionReport { quotient: cand, iterations, prime: Some(q) });
                }
            }
            Err(Error::DivisorVanishedModQ(_)) | Err(Error::GaveUp(_)) | Err(Error::NotDivisible) => {}
            Err(e) => return Err(e),
        }
        if q.bits() as f64 > give_up_bits + 1.0 {
            return Err(Error::GaveUp(format!("no verified quotient with primes up to {} bits", q.bits())));
        }
    }
}

fn scalar_quotient(f: &SparsePoly<Integers>, g: &SparsePoly<Integers>) -> Result<SparsePoly<Integers>> {
    let lc = g.leading_coeff().unwrap();
    if g.num_terms() == 1 && g.degree() == Some(0) {
        let mut terms = Vec::with_capacity(f.num_terms());
        for (e, c) in f.terms() {
            let (qc, r) = c.div_rem(lc);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            terms.push((*e, qc));
        }
        return Ok(SparsePoly::new(Integers, terms));
    }
    let (qc, r) = f.leading_coeff().unwrap().div_rem(lc);
    let q = SparsePoly::new(Integers, vec![(0, qc)]);
    if !r.is_zero() || q.mul_naive(g)? != *f {
        return Err(Error::NotDivisible);
    }
    Ok(q)
}

fn modular_quotient<P: PrimeField, G: Rng + ?Sized>(
    field: P,
    f: &SparsePoly<Integers>,
    g: &SparsePoly<Integers>,
    epsilon: f64,
    rng: &mut G,
    opts: &DivOptions,
) -> Result<SparsePoly<Integers>> {
    let fq = f.map_coeffs(&field, |c| field.from_bigint(c));
    let gq = g.map_coeffs(&field, |c| field.from_bigint(c));
    if gq.degree() != g.degree() {
        return Err(Error::DivisorVanishedModQ(field.modulus()));
    }
    let qq = exact_division(&fq, &gq, epsilon, rng, opts)?;
    let modulus = BigInt::from(field.modulus());
    let half = &modulus >> 1u32;
    let lifted = qq
        .terms()
        .iter()
        .map(|(e, c)| {
            let v = BigInt::from(field.to_biguint(c));
            (*e, if v > half { v - &modulus } else { v })
        })
        .collect();
    Ok(SparsePoly::new(Integers, lifted))
}

/// `log2` of the height bound without materializing it.
pub fn height_bound_bits(f: &SparsePoly<Integers>, g: &SparsePoly<Integers>, t: usize) -> f64 {
    let exp = t.saturating_sub(1).div_ceil(2) as f64;
    let log2 = |n: &BigUint| n.to_f64().map(f64::log2).unwrap_or(n.bits() as f64);
    exp * log2(&(height(g) + 1u32)) + log2(&height(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z(t: &[(u64, i64)]) -> SparsePoly<Integers> {
        SparsePoly::from_i64(Integers, t)
    }

    #[test]
    fn bound_examples() {
        let f = z(&[(4, 2), (3, 2), (1, 3), (0, 3)]);
        let g = z(&[(1, 1), (0, 1)]);
        assert_eq!(height_bound(&f, &g, 1), BigUint::from(3u32));
        assert_eq!(height_bound(&f, &g, 3), BigUint::from(6u32));
        assert_eq!(height_bound(&f, &g, 2), BigUint::from(6u32));
        let (q, r) = f.classic_divrem(&g, None).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, z(&[(3, 2), (0, 3)]));
        assert!(height(&q) <= height_bound(&f, &g, q.num_terms()));
    }

    #[test]
    fn difference_of_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q = exact_division_z(&z(&[(2, 1), (0, -1)]), &z(&[(1, 1), (0, -1)]), 0.01, &mut rng, &DivOptions::default()).unwrap();
        assert_eq!(q, z(&[(1, 1), (0, 1)]));
    }

    #[test]
    fn negative_coefficients_survive_the_lift() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = z(&[(1_000_000, 1), (0, 3)]);
        let q = z(&[(999, 2), (0, -5)]);
        let f = g.mul_naive(&q).unwrap();
        let r = exact_division_z(&f, &g, 0.01, &mut rng, &DivOptions::default()).unwrap();
        assert_eq!(r, q);
    }

    #[test]
    fn huge_quotient_height() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let big = BigInt::from(1u32) << 200u32;
        let g = z(&[(40, 1), (7, -3), (0, 1)]);
        let q = SparsePoly::new(Integers, vec![(0, big.clone() + 17), (300, -big.clone()), (555, BigInt::from(12345))]);
        let f = g.mul_naive(&q).unwrap();
        let rep = exact_division_z_report(&f, &g, 0.01, &mut rng, &DivOptions::default()).unwrap();
        assert_eq!(rep.quotient, q);
        assert!(rep.prime.unwrap().bits() > 200);
    }

    #[test]
    fn trivial_routes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let opts = DivOptions::default();
        assert_eq!(exact_division_z(&z(&[(5, 6), (0, -9)]), &z(&[(0, 3)]), 0.1, &mut rng, &opts).unwrap(), z(&[(5, 2), (0, -3)]));
        assert_eq!(exact_division_z(&z(&[(5, 6), (0, -8)]), &z(&[(0, 3)]), 0.1, &mut rng, &opts), Err(Error::NotDivisible));
        assert_eq!(exact_division_z(&z(&[(5, 6), (1, -9)]), &z(&[(5, 2), (1, -3)]), 0.1, &mut rng, &opts).unwrap(), z(&[(0, 3)]));
        assert_eq!(exact_division_z(&z(&[(5, 6), (1, -9)]), &z(&[(5, 2), (1, 3)]), 0.1, &mut rng, &opts), Err(Error::NotDivisible));
        assert_eq!(exact_division_z(&z(&[(5, 6)]), &z(&[]), 0.1, &mut rng, &opts), Err(Error::DivisionByZero));
        assert!(exact_division_z(&z(&[]), &z(&[(3, 1)]), 0.1, &mut rng, &opts).unwrap().is_zero());
    }

    #[test]
    fn non_divisible_input_gives_up() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = exact_division_z(&z(&[(6, 1), (0, 1)]), &z(&[(1, 1), (0, -1)]), 0.01, &mut rng, &DivOptions::default());
        assert!(matches!(r, Err(Error::GaveUp(_))), "{r:?}");
    }
}
