use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::Pow;
use rand::Rng;
use smallvec::{smallvec, SmallVec};

use super::{Field, PrimeField, Ring};
use crate::dense;
use crate::error::{Error, Result};

pub type ExtElem<P> = SmallVec<[<P as Ring>::Elem; 8]>;

/// `F_{q^s} = F_q[Y]/(m)` for a monic irreducible `m` of degree `s`.
pub struct ExtField<P: PrimeField> {
    inner: Arc<Inner<P>>,
}

struct Inner<P: PrimeField> {
    base: P,
    s: usize,
    /// `s + 1` coefficients, monic.
    modulus: Vec<P::Elem>,
    order: BigUint,
}

impl<P: PrimeField> Clone for ExtField<P> {
    fn clone(&self) -> Self {
        ExtField { inner: Arc::clone(&self.inner) }
    }
}

impl<P: PrimeField> fmt::Debug for ExtField<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.inner.modulus.iter().map(|c| self.inner.base.format_elem(c)).collect();
        write!(f, "GF({}^{}) mod [{}]", self.inner.base.modulus(), self.inner.s, m.join(", "))
    }
}

impl<P: PrimeField> ExtField<P> {
    /// Wraps an already-verified irreducible modulus.
    pub fn from_modulus(base: P, modulus: Vec<P::Elem>) -> Result<Self> {
        let s = modulus.len().checked_sub(1).filter(|&s| s >= 1).ok_or_else(|| Error::InvalidArgument("extension modulus must have degree >= 1".into()))?;
        if !base.is_one(&modulus[s]) {
            return Err(Error::InvalidArgument("extension modulus must be monic".into()));
        }
        let order = Pow::pow(base.modulus(), s);
        Ok(ExtField { inner: Arc::new(Inner { base, s, modulus, order }) })
    }

    pub fn base(&self) -> &P {
        &self.inner.base
    }

    pub fn degree(&self) -> usize {
        self.inner.s
    }

    pub fn modulus(&self) -> &[P::Elem] {
        &self.inner.modulus
    }

    pub fn embed(&self, a: &P::Elem) -> ExtElem<P> {
        let mut v: ExtElem<P> = smallvec![self.inner.base.zero(); self.inner.s];
        v[0] = a.clone();
        v
    }

    pub fn from_coeffs(&self, c: &[P::Elem]) -> ExtElem<P> {
        let r = dense::rem(&self.inner.base, c, &self.inner.modulus).unwrap();
        let mut v: ExtElem<P> = smallvec![self.inner.base.zero(); self.inner.s];
        for (d, x) in v.iter_mut().zip(r) {
            *d = x;
        }
        v
    }

    fn generic_mul(&self, a: &[P::Elem], b: &[P::Elem]) -> ExtElem<P> {
        let base = &self.inner.base;
        let s = self.inner.s;
        let mut prod = vec![base.zero(); 2 * s - 1];
        for (i, x) in a.iter().enumerate() {
            if base.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = base.mul(x, y);
                base.add_assign(&mut prod[i + j], &t);
            }
        }
        let m = &self.inner.modulus;
        for d in (s..prod.len()).rev() {
            if base.is_zero(&prod[d]) {
                continue;
            }
            let c = std::mem::replace(&mut prod[d], base.zero());
            for (k, mk) in m[..s].iter().enumerate() {
                if !base.is_zero(mk) {
                    let t = base.mul(&c, mk);
                    base.sub_assign(&mut prod[d - s + k], &t);
                }
            }
        }
        prod.truncate(s);
        prod.into_iter().collect()
    }
}

impl<P: PrimeField> Ring for ExtField<P> {
    type Elem = ExtElem<P>;

    fn zero(&self) -> Self::Elem {
        smallvec![self.inner.base.zero(); self.inner.s]
    }
    fn one(&self) -> Self::Elem {
        self.embed(&self.inner.base.one())
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| self.inner.base.is_zero(c))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.inner.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.inner.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.inner.base.neg(x)).collect()
    }
    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        for (x, y) in a.iter_mut().zip(b) {
            *x = self.inner.base.add(x, y);
        }
    }
    fn sub_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        for (x, y) in a.iter_mut().zip(b) {
            *x = self.inner.base.sub(x, y);
        }
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let base = &self.inner.base;
        if self.inner.s == 1 {
            return smallvec![base.mul(&a[0], &b[0])];
        }
        match base.ext_mul_kernel(&self.inner.modulus, a, b) {
            Some(v) => v,
            None => self.generic_mul(a, b),
        }
    }
    fn mul_u64(&self, a: &Self::Elem, n: u64) -> Self::Elem {
        let c = self.inner.base.from_u64(n);
        a.iter().map(|x| self.inner.base.mul(x, &c)).collect()
    }
    fn from_u64(&self, n: u64) -> Self::Elem {
        self.embed(&self.inner.base.from_u64(n))
    }
    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        self.embed(&self.inner.base.from_bigint(n))
    }
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.div(a, b).ok()
    }
    fn characteristic(&self) -> BigUint {
        self.inner.base.characteristic()
    }
    fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.base.same_ring(&other.inner.base) && self.inner.modulus == other.inner.modulus)
    }
    fn format_elem(&self, a: &Self::Elem) -> String {
        if self.inner.s == 1 {
            return self.inner.base.format_elem(&a[0]);
        }
        let parts: Vec<String> = a.iter().map(|c| self.inner.base.format_elem(c)).collect();
        format!("[{}]", parts.join(","))
    }
}

impl<P: PrimeField> Field for ExtField<P> {
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        let base = &self.inner.base;
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        if self.inner.s == 1 {
            return Ok(smallvec![base.inv(&a[0])?]);
        }
        let inv = dense::inverse_mod(base, a, &self.inner.modulus).ok_or(Error::DivisionByZero)?;
        Ok(self.from_coeffs(&inv))
    }
    fn order(&self) -> BigUint {
        self.inner.order.clone()
    }
    fn ext_degree(&self) -> usize {
        self.inner.s
    }
    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> Self::Elem {
        (0..self.inner.s).map(|_| self.inner.base.random(rng)).collect()
    }
    fn to_prime_subfield(&self, a: &Self::Elem) -> Option<BigUint> {
        let base = &self.inner.base;
        if a[1..].iter().all(|c| base.is_zero(c)) {
            Some(base.to_biguint(&a[0]))
        } else {
            None
        }
    }
    fn poly_mul(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        match P::ext_poly_mul_kernel(self, a, b) {
            Some(v) => v,
            None => super::generic_poly_mul(self, a, b),
        }
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic `m` over `F_q`.
pub fn is_irreducible<P: PrimeField>(base: &P, m: &[P::Elem]) -> bool {
    let n = match m.len() {
        0 | 1 => return false,
        l => l - 1,
    };
    if n == 1 {
        return true;
    }
    let q = base.modulus();
    let y = vec![base.zero(), base.one()];
    let divs = prime_divisors(n);
    // frob[k] = Y^{q^k} mod m
    let mut frob = y.clone();
    let mut powers = vec![y.clone()];
    for _ in 0..n {
        frob = dense::powmod(base, &frob, &q, m);
        powers.push(frob.clone());
    }
    if dense::sub(base, &powers[n], &dense::rem(base, &y, m).unwrap()).iter().any(|c| !base.is_zero(c)) {
        return false;
    }
    divs.iter().all(|&r| {
        let h = dense::sub(base, &powers[n / r], &y);
        let g = dense::gcd(base, &h, m);
        g.len() == 1
    })
}

/// Constructs `F_{q^s}` with a random monic irreducible modulus.
///
/// `s = 1` yields the prime field itself presented as `F_q[Y]/(Y)`.
pub fn build_ext_field<P: PrimeField, G: Rng + ?Sized>(base: &P, s: usize, rng: &mut G) -> Result<ExtField<P>> {
    if s == 0 {
        return Err(Error::InvalidArgument("extension degree must be positive".into()));
    }
    if s == 1 {
        return ExtField::from_modulus(base.clone(), vec![base.zero(), base.one()]);
    }
    loop {
        let mut m: Vec<P::Elem> = (0..s).map(|_| base.random(rng)).collect();
        if base.is_zero(&m[0]) {
            continue;
        }
        m.push(base.one());
        if is_irreducible(base, &m) {
            return ExtField::from_modulus(base.clone(), m);
        }
    }
}

/// Smallest `s` with `q^s >= target`.
pub fn ext_degree_for(q: &BigUint, target: &BigUint) -> usize {
    let mut s = 1;
    let mut acc = q.clone();
    while acc < *target {
        acc *= q;
        s += 1;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Fp;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn x3_x_1_is_irreducible_over_f2() {
        let f = Fp::new(2).unwrap();
        assert!(is_irreducible(&f, &[1, 1, 0, 1]));
        // X^3 + X^2 + X + 1 = (X+1)^3
        assert!(!is_irreducible(&f, &[1, 1, 1, 1]));
    }

    #[test]
    fn f8_multiplication() {
        let f = Fp::new(2).unwrap();
        let e = ExtField::from_modulus(f, vec![1, 1, 0, 1]).unwrap();
        let x: ExtElem<Fp> = smallvec![0, 1, 0];
        let x2: ExtElem<Fp> = smallvec![0, 0, 1];
        let xp1: ExtElem<Fp> = smallvec![1, 1, 0];
        assert_eq!(e.mul(&x, &x2), xp1);
    }

    #[test]
    fn random_f8_modulus_is_accepted() {
        let f = Fp::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let e = build_ext_field(&f, 3, &mut rng).unwrap();
        assert_eq!(e.degree(), 3);
        // only two irreducible cubics over F_2
        let m = e.modulus().to_vec();
        assert!(m == vec![1, 1, 0, 1] || m == vec![1, 0, 1, 1]);
    }

    #[test]
    fn f25_modulus_has_no_root() {
        let f = Fp::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let e = build_ext_field(&f, 2, &mut rng).unwrap();
        for x in 0..5u64 {
            let v = dense::eval(&f, e.modulus(), &f.from_u64(x));
            assert!(!f.is_zero(&v));
        }
    }

    #[test]
    fn degree_one_uses_modulus_x() {
        let f = Fp::new(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e = build_ext_field(&f, 1, &mut rng).unwrap();
        assert_eq!(e.modulus(), &[f.zero(), f.one()]);
        let a = e.from_u64(5);
        assert_eq!(e.to_prime_subfield(&e.inv(&a).unwrap()), Some(BigUint::from(8u32)));
    }

    #[test]
    fn fermat_in_extension() {
        let f = Fp::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e = build_ext_field(&f, 5, &mut rng).unwrap();
        let order_minus_one = e.order() - 1u32;
        for _ in 0..10 {
            let a = e.random_nonzero(&mut rng);
            assert!(e.is_one(&e.pow(&a, &order_minus_one)));
            assert!(e.is_one(&e.mul(&a, &e.inv(&a).unwrap())));
        }
    }

    #[test]
    fn gf2_kernel_matches_generic() {
        let f = Fp::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let e = build_ext_field(&f, 40, &mut rng).unwrap();
        for _ in 0..20 {
            let a = e.random(&mut rng);
            let b = e.random(&mut rng);
            assert_eq!(e.mul(&a, &b), e.generic_mul(&a, &b));
        }
    }

    #[test]
    fn delayed_reduction_kernel_matches_generic() {
        let f = Fp::new(1_000_003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let e = build_ext_field(&f, 4, &mut rng).unwrap();
        for _ in 0..20 {
            let a = e.random(&mut rng);
            let b = e.random(&mut rng);
            assert_eq!(e.mul(&a, &b), e.generic_mul(&a, &b));
        }
    }
}
