//! Dense arithmetic in `R[X]/(X^p - 1)`.

use crate::dense;
use crate::error::{Error, Result};
use crate::ff::{Field, Ring};

/// A residue modulo `X^p - 1`, stored as exactly `p` coefficients.
#[derive(Clone, Debug)]
pub struct CyclicPoly<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> PartialEq for CyclicPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<R: Ring> CyclicPoly<R> {
    /// Panics if `p == 0`; folds longer vectors modulo `X^p - 1`.
    pub fn new(ring: R, p: usize, v: Vec<R::Elem>) -> Self {
        assert!(p > 0, "cyclic length must be positive");
        let mut coeffs = vec![ring.zero(); p];
        for (i, c) in v.into_iter().enumerate() {
            ring.add_assign(&mut coeffs[i % p], &c);
        }
        CyclicPoly { ring, coeffs }
    }

    pub(crate) fn from_vec(ring: R, coeffs: Vec<R::Elem>) -> Self {
        CyclicPoly { ring, coeffs }
    }

    pub fn one(ring: R, p: usize) -> Self {
        let one = ring.one();
        CyclicPoly::new(ring, p, vec![one])
    }

    pub fn p(&self) -> usize {
        self.coeffs.len()
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !self.ring.is_zero(c)).count()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let r = &self.ring;
        CyclicPoly::from_vec(r.clone(), self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| r.add(a, b)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let r = &self.ring;
        CyclicPoly::from_vec(r.clone(), self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| r.sub(a, b)).collect())
    }
}

impl<F: Field> CyclicPoly<F> {
    /// Coefficient `k` of the result is `sum_{i+j = k mod p} a_i b_j`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p(), other.p(), "cyclic operands must share p");
        let f = &self.ring;
        let p = self.p();
        let a = dense::trimmed(f, self.coeffs.clone());
        let b = dense::trimmed(f, other.coeffs.clone());
        let prod = f.poly_mul(&a, &b);
        let mut out = vec![f.zero(); p];
        for (i, c) in prod.into_iter().enumerate() {
            f.add_assign(&mut out[i % p], &c);
        }
        CyclicPoly::from_vec(f.clone(), out)
    }

    /// Inverse via extended Euclid against `X^p - 1`.
    pub fn inv(&self) -> Result<Self> {
        let f = &self.ring;
        let p = self.p();
        let mut m = vec![f.zero(); p + 1];
        m[0] = f.neg(&f.one());
        m[p] = f.one();
        let g = dense::trimmed(f, self.coeffs.clone());
        if g.is_empty() {
            return Err(Error::NotInvertible(p));
        }
        let h = dense::inverse_mod(f, &g, &m).ok_or(Error::NotInvertible(p))?;
        Ok(CyclicPoly::new(f.clone(), p, h))
    }
}

pub fn cyclic_mul<F: Field>(a: &CyclicPoly<F>, b: &CyclicPoly<F>) -> CyclicPoly<F> {
    a.mul(b)
}

pub fn cyclic_inv<F: Field>(g: &CyclicPoly<F>) -> Result<CyclicPoly<F>> {
    g.inv()
}
