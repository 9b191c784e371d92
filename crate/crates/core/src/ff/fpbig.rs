use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use std::sync::Arc;

use super::{Field, PrimeField, Ring};
use crate::error::{Error, Result};
use crate::primes::is_probable_prime_big;

/// `F_q` for an arbitrary-size prime `q`; used once the integer-division
/// driver's moduli outgrow 63 bits.
#[derive(Clone, Debug)]
pub struct FpBig {
    q: Arc<BigUint>,
}

impl FpBig {
    /// Checks primality with 64 Miller-Rabin rounds.
    pub fn new<G: Rng + ?Sized>(q: BigUint, rng: &mut G) -> Result<Self> {
        if !is_probable_prime_big(&q, 64, rng) {
            return Err(Error::NotPrime(q));
        }
        Ok(FpBig { q: Arc::new(q) })
    }

    /// Skips the primality check; the caller vouches for `q`.
    pub fn new_unchecked(q: BigUint) -> Self {
        FpBig { q: Arc::new(q) }
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn to_signed(&self, a: &BigUint) -> BigInt {
        let half = &*self.q >> 1u32;
        if *a > half {
            BigInt::from(a.clone()) - BigInt::from((*self.q).clone())
        } else {
            BigInt::from(a.clone())
        }
    }
}

impl Ring for FpBig {
    type Elem = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= *self.q {
            s - &*self.q
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + &*self.q - b
        }
    }
    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &*self.q - a
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &*self.q
    }
    fn from_u64(&self, n: u64) -> BigUint {
        BigUint::from(n) % &*self.q
    }
    fn from_bigint(&self, n: &BigInt) -> BigUint {
        let q = BigInt::from((*self.q).clone());
        n.mod_floor(&q).to_biguint().unwrap()
    }
    fn div_exact(&self, a: &BigUint, b: &BigUint) -> Option<BigUint> {
        self.div(a, b).ok()
    }
    fn characteristic(&self) -> BigUint {
        (*self.q).clone()
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.q == other.q
    }
    fn format_elem(&self, a: &BigUint) -> String {
        a.to_string()
    }
}

impl Field for FpBig {
    fn inv(&self, a: &BigUint) -> Result<BigUint> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = BigInt::from((*self.q).clone());
        let e = BigInt::from(a.clone()).extended_gcd(&q);
        if !e.gcd.is_one() {
            return Err(Error::DivisionByZero);
        }
        Ok(e.x.mod_floor(&q).to_biguint().unwrap())
    }
    fn order(&self) -> BigUint {
        (*self.q).clone()
    }
    fn ext_degree(&self) -> usize {
        1
    }
    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> BigUint {
        rng.gen_biguint_below(&self.q)
    }
    fn to_prime_subfield(&self, a: &BigUint) -> Option<BigUint> {
        Some(a.clone())
    }
}

impl PrimeField for FpBig {
    fn modulus(&self) -> BigUint {
        (*self.q).clone()
    }
    fn to_biguint(&self, a: &BigUint) -> BigUint {
        a.clone()
    }
    fn from_biguint(&self, n: &BigUint) -> BigUint {
        n % &*self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn big_prime_field_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // 2^127 - 1 is a Mersenne prime
        let q = (BigUint::one() << 127u32) - 1u32;
        let f = FpBig::new(q, &mut rng).unwrap();
        let a = f.from_u64(987654321);
        let ai = f.inv(&a).unwrap();
        assert!(f.mul(&a, &ai).is_one());
    }

    #[test]
    fn signed_lift() {
        let f = FpBig::new_unchecked(BigUint::from(11u32));
        assert_eq!(f.to_signed(&BigUint::from(10u32)), BigInt::from(-1));
        assert_eq!(f.to_signed(&BigUint::from(5u32)), BigInt::from(5));
    }
}
