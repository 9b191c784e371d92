use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::{biguint_to_u64, ExtElem, ExtField, Field, PrimeField, Ring};
use crate::error::{Error, Result};
use crate::ntt;
use crate::primes::is_prime_u64;

/// `F_q` for a prime `q < 2^63`, elements kept in Montgomery form.
///
/// `q = 2` bypasses Montgomery entirely and stores plain bits.
#[derive(Clone, Debug)]
pub struct Fp {
    q: u64,
    qinv_neg: u64,
    r2: u64,
    one: u64,
    mont: bool,
}

impl Fp {
    pub fn new(q: u64) -> Result<Self> {
        if q >= 1 << 63 {
            return Err(Error::InvalidArgument(format!("Fp needs q < 2^63, got {q}")));
        }
        if !is_prime_u64(q) {
            return Err(Error::NotPrime(BigUint::from(q)));
        }
        if q == 2 {
            return Ok(Fp { q, qinv_neg: 0, r2: 0, one: 1, mont: false });
        }
        // Newton iteration for q^{-1} mod 2^64
        let mut inv: u64 = 1;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(q.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % q as u128) as u64;
        let r2 = ((r as u128 * r as u128) % q as u128) as u64;
        Ok(Fp { q, qinv_neg: inv.wrapping_neg(), r2, one: r, mont: true })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.qinv_neg);
        let u = ((t + m as u128 * self.q as u128) >> 64) as u64;
        if u >= self.q {
            u - self.q
        } else {
            u
        }
    }

    /// Maps a canonical residue in `[0, q)` into the internal representation.
    #[inline]
    pub fn from_canonical(&self, a: u64) -> u64 {
        if self.mont {
            self.redc(a as u128 * self.r2 as u128)
        } else {
            a
        }
    }

    /// Canonical residue in `[0, q)`.
    #[inline]
    pub fn to_canonical(&self, a: u64) -> u64 {
        if self.mont {
            self.redc(a as u128)
        } else {
            a
        }
    }

    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        if self.mont {
            self.redc(a as u128 * b as u128)
        } else {
            a & b
        }
    }

    #[inline]
    pub fn add_raw(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub_raw(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }
}

fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let qt = r0 / r1;
        (r0, r1) = (r1, r0 - qt * r1);
        (t0, t1) = (t1, t0 - qt * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

impl Ring for Fp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        self.one
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.add_raw(*a, *b)
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.sub_raw(*a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.q - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_raw(*a, *b)
    }
    fn from_u64(&self, n: u64) -> u64 {
        self.from_canonical(n % self.q)
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.q));
        self.from_canonical(r.to_u64().unwrap())
    }
    fn div_exact(&self, a: &u64, b: &u64) -> Option<u64> {
        self.div(a, b).ok()
    }
    fn characteristic(&self) -> BigUint {
        BigUint::from(self.q)
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.q == other.q
    }
    fn format_elem(&self, a: &u64) -> String {
        self.to_canonical(*a).to_string()
    }
}

impl Field for Fp {
    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        let c = self.to_canonical(*a);
        Ok(self.from_canonical(inv_mod_u64(c, self.q).unwrap()))
    }
    fn order(&self) -> BigUint {
        BigUint::from(self.q)
    }
    fn ext_degree(&self) -> usize {
        1
    }
    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> u64 {
        self.from_canonical(rng.gen_range(0..self.q))
    }
    fn to_prime_subfield(&self, a: &u64) -> Option<BigUint> {
        Some(BigUint::from(self.to_canonical(*a)))
    }
    fn poly_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        if a.len().min(b.len()) < ntt::NTT_THRESHOLD {
            return super::generic_poly_mul(self, a, b);
        }
        let ca: Vec<u64> = a.iter().map(|&x| self.to_canonical(x)).collect();
        let cb: Vec<u64> = b.iter().map(|&x| self.to_canonical(x)).collect();
        ntt::mul_mod(&ca, &cb, self.q)
            .into_iter()
            .map(|x| self.from_canonical(x))
            .collect()
    }
}

impl PrimeField for Fp {
    fn modulus(&self) -> BigUint {
        BigUint::from(self.q)
    }
    fn to_biguint(&self, a: &u64) -> BigUint {
        BigUint::from(self.to_canonical(*a))
    }
    fn from_biguint(&self, n: &BigUint) -> u64 {
        let r = n % self.q;
        self.from_canonical(biguint_to_u64(&r).unwrap())
    }

    fn ext_mul_kernel(&self, modulus: &[u64], a: &[u64], b: &[u64]) -> Option<ExtElem<Self>> {
        let s = a.len();
        if !self.mont && s <= 64 {
            return Some(gf2_ext_mul(modulus, a, b));
        }
        if s > 1 && s <= 64 && self.mont {
            let mut acc = [0u128; 128];
            let acc = &mut acc[..2 * s - 1];
            let bound = (self.q as u128) << 64;
            for (i, &x) in a.iter().enumerate() {
                if x != 0 {
                    for (j, &y) in b.iter().enumerate() {
                        let v = acc[i + j] + x as u128 * y as u128;
                        acc[i + j] = if v >= bound { v - bound } else { v };
                    }
                }
            }
            return Some(self.reduce_ext_block(modulus, acc));
        }
        None
    }

    fn ext_poly_mul_kernel(ext: &ExtField<Self>, a: &[ExtElem<Self>], b: &[ExtElem<Self>]) -> Option<Vec<ExtElem<Self>>> {
        if a.len().min(b.len()) >= ntt::NTT_THRESHOLD {
            return Some(ntt::kronecker_ext_mul(ext, a, b));
        }
        let base = ext.base();
        if ext.degree() == 1 || !base.mont || a.is_empty() || b.is_empty() {
            return None;
        }
        Some(base.ext_schoolbook(ext.modulus(), a, b))
    }
}

/// Product in `F_2[Y]/(m)` for `deg m <= 64` using packed carry-less arithmetic.
fn gf2_ext_mul(modulus: &[u64], a: &[u64], b: &[u64]) -> ExtElem<Fp> {
    let s = a.len();
    let pack = |v: &[u64]| v.iter().enumerate().fold(0u128, |acc, (i, &x)| acc | ((x as u128) << i));
    let pa = pack(a) as u64;
    let pb = pack(b) as u64;
    let mut prod: u128 = 0;
    let mut x = pa as u128;
    let mut y = pb;
    while y != 0 {
        if y & 1 == 1 {
            prod ^= x;
        }
        y >>= 1;
        x <<= 1;
    }
    let pm = pack(modulus);
    for d in (s..2 * s).rev() {
        if (prod >> d) & 1 == 1 {
            prod ^= pm << (d - s);
        }
    }
    (0..s).map(|i| ((prod >> i) & 1) as u64).collect()
}

impl Fp {
    /// Reduces a product block `acc` (length `2s - 1`, entries below
    /// `q 2^64`, scaled by `R^2`) modulo the monic `modulus` and returns it
    /// in Montgomery form. Clobbers `acc`.
    pub(crate) fn reduce_ext_block(&self, modulus: &[u64], acc: &mut [u128]) -> ExtElem<Fp> {
        let s = modulus.len() - 1;
        let bound = (self.q as u128) << 64;
        for d in (s..acc.len()).rev() {
            let c = self.redc(acc[d]);
            if c == 0 {
                continue;
            }
            let c = self.q - c;
            for (k, &m) in modulus[..s].iter().enumerate() {
                if m != 0 {
                    let v = acc[d - s + k] + c as u128 * m as u128;
                    acc[d - s + k] = if v >= bound { v - bound } else { v };
                }
            }
        }
        acc[..s].iter().map(|&v| self.redc(v)).collect()
    }

    /// Quadratic product over `F_q[Y]/(modulus)` reducing once per output
    /// coefficient.
    fn ext_schoolbook(&self, modulus: &[u64], a: &[ExtElem<Fp>], b: &[ExtElem<Fp>]) -> Vec<ExtElem<Fp>> {
        let s = modulus.len() - 1;
        let stride = 2 * s - 1;
        let bound = (self.q as u128) << 64;
        let n = a.len() + b.len() - 1;
        let mut acc = vec![0u128; n * stride];
        for (i, x) in a.iter().enumerate() {
            if x.iter().all(|&c| c == 0) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let blk = &mut acc[(i + j) * stride..(i + j + 1) * stride];
                for (u, &xu) in x.iter().enumerate() {
                    if xu == 0 {
                        continue;
                    }
                    for (v, &yv) in y.iter().enumerate() {
                        let t = blk[u + v] + xu as u128 * yv as u128;
                        blk[u + v] = if t >= bound { t - bound } else { t };
                    }
                }
            }
        }
        acc.chunks_mut(stride).map(|blk| self.reduce_ext_block(modulus, blk)).collect()
    }

    /// Multiplier taking a canonical value into the `R^2` scale used by
    /// [`Fp::reduce_ext_block`].
    pub(crate) fn r2(&self) -> u64 {
        self.r2
    }

    pub(crate) fn is_montgomery(&self) -> bool {
        self.mont
    }

    /// Signed representative in `(-q/2, q/2]`.
    pub fn to_signed(&self, a: u64) -> BigInt {
        let c = self.to_canonical(a);
        if c > self.q / 2 {
            BigInt::from(c) - BigInt::from(self.q)
        } else {
            BigInt::from(c)
        }
    }
}
