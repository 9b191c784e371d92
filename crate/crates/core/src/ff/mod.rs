//! Coefficient rings: prime fields, their extensions and the integers.
//!
//! Every polynomial type in the crate is generic over [`Ring`]; the
//! interpolation machinery additionally needs [`Field`], and the division
//! drivers take their inputs over a [`PrimeField`] and work internally in an
//! [`ExtField`] built on top of it.

mod ext;
mod fp;
mod fpbig;
mod integers;

pub use ext::{build_ext_field, ext_degree_for, is_irreducible, ExtElem, ExtField};
pub use fp::Fp;
pub use fpbig::FpBig;
pub use integers::Integers;

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use rand::Rng;

use crate::error::Result;

pub trait Ring: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_u64(&self, n: u64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    /// `a / b` when the quotient exists in the ring, `None` otherwise.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    /// Zero for the integers.
    fn characteristic(&self) -> BigUint;

    fn same_ring(&self, other: &Self) -> bool;

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn sub_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.sub(a, b);
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn mul_u64(&self, a: &Self::Elem, n: u64) -> Self::Elem {
        self.mul(a, &self.from_u64(n))
    }

    fn format_elem(&self, a: &Self::Elem) -> String;

    fn pow_u64(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        let mut acc = self.one();
        if e == 0 {
            return acc;
        }
        for i in (0..64 - e.leading_zeros()).rev() {
            acc = self.mul(&acc, &acc);
            if (e >> i) & 1 == 1 {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// Number of elements.
    fn order(&self) -> BigUint;

    /// Degree over the prime subfield.
    fn ext_degree(&self) -> usize;

    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem;

    fn random_nonzero<G: Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem {
        loop {
            let a = self.random(rng);
            if !self.is_zero(&a) {
                return a;
            }
        }
    }

    /// Integer representative in `[0, char)` when `a` lies in the prime subfield.
    fn to_prime_subfield(&self, a: &Self::Elem) -> Option<BigUint>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Full product of two dense coefficient vectors (little endian).
    fn poly_mul(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        generic_poly_mul(self, a, b)
    }
}

/// A prime field `F_q`; the coefficient domain of division inputs.
pub trait PrimeField: Field {
    fn modulus(&self) -> BigUint;
    fn to_biguint(&self, a: &Self::Elem) -> BigUint;
    fn from_biguint(&self, n: &BigUint) -> Self::Elem;

    /// Optional fast kernel for products in `F_q[Y]/(m)`; `None` falls back
    /// to the generic schoolbook reduction.
    fn ext_mul_kernel(
        &self,
        _modulus: &[Self::Elem],
        _a: &[Self::Elem],
        _b: &[Self::Elem],
    ) -> Option<ExtElem<Self>> {
        None
    }

    /// Optional fast kernel for dense polynomial products over an extension.
    fn ext_poly_mul_kernel(
        _ext: &ExtField<Self>,
        _a: &[ExtElem<Self>],
        _b: &[ExtElem<Self>],
    ) -> Option<Vec<ExtElem<Self>>> {
        None
    }
}

const KARATSUBA_THRESHOLD: usize = 32;

/// Schoolbook below a length threshold, Karatsuba above it.
pub fn generic_poly_mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) < KARATSUBA_THRESHOLD {
        return schoolbook(f, a, b);
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    karatsuba_into(f, a, b, &mut out);
    out
}

fn schoolbook<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = f.mul(x, y);
            f.add_assign(&mut out[i + j], &t);
        }
    }
    out
}

// Accumulates a*b into out.
fn karatsuba_into<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem], out: &mut [F::Elem]) {
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if b.len() < KARATSUBA_THRESHOLD {
        let prod = schoolbook(f, a, b);
        for (o, x) in out.iter_mut().zip(prod.iter()) {
            f.add_assign(o, x);
        }
        return;
    }
    if a.len() >= 2 * b.len() {
        // unbalanced: split the long operand into chunks of b.len()
        let n = b.len();
        for (c, chunk) in a.chunks(n).enumerate() {
            karatsuba_into(f, chunk, b, &mut out[c * n..]);
        }
        return;
    }
    let h = a.len() / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = if b.len() > h { b.split_at(h) } else { (b, &b[b.len()..]) };
    let mut z0 = vec![f.zero(); a0.len() + b0.len() - 1];
    karatsuba_into(f, a0, b0, &mut z0);
    let z2 = if b1.is_empty() {
        Vec::new()
    } else {
        let mut z2 = vec![f.zero(); a1.len() + b1.len() - 1];
        karatsuba_into(f, a1, b1, &mut z2);
        z2
    };
    let sa = add_slices(f, a0, a1);
    let sb = add_slices(f, b0, b1);
    let mut z1 = vec![f.zero(); sa.len() + sb.len() - 1];
    karatsuba_into(f, &sa, &sb, &mut z1);
    for (i, x) in z0.iter().enumerate() {
        f.sub_assign(&mut z1[i], x);
        f.add_assign(&mut out[i], x);
    }
    for (i, x) in z2.iter().enumerate() {
        f.sub_assign(&mut z1[i], x);
        f.add_assign(&mut out[i + 2 * h], x);
    }
    for (i, x) in z1.iter().enumerate() {
        if i + h < out.len() {
            f.add_assign(&mut out[i + h], x);
        }
    }
}

fn add_slices<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

pub fn biguint_to_u64(n: &BigUint) -> Option<u64> {
    let digits = n.to_u64_digits();
    match digits.len() {
        0 => Some(0),
        1 => Some(digits[0]),
        _ => None,
    }
}
