//! Sparse univariate polynomials stored as sorted `(exponent, coefficient)`
//! lists.
//!
//! Exponents are `u64` restricted to `[0, 2^63)`; every operation that can
//! push an exponent past that range reports [`Error::ExponentOverflow`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use crate::cyclic::CyclicPoly;
use crate::error::{Error, Result};
use crate::ff::{Field, Ring};

/// Largest admissible exponent.
pub const MAX_EXPONENT: u64 = (1 << 63) - 1;

pub(crate) fn checked_exp_add(a: u64, b: u64) -> Result<u64> {
    a.checked_add(b).filter(|&e| e <= MAX_EXPONENT).ok_or(Error::ExponentOverflow)
}

#[derive(Clone)]
pub struct SparsePoly<R: Ring> {
    ring: R,
    terms: Vec<(u64, R::Elem)>,
}

impl<R: Ring> PartialEq for SparsePoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<R: Ring> Eq for SparsePoly<R> {}

impl<R: Ring> fmt::Debug for SparsePoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<R: Ring> fmt::Display for SparsePoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let c = self.ring.format_elem(c);
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*X")?,
                _ => write!(f, "{c}*X^{e}")?,
            }
        }
        Ok(())
    }
}

impl<R: Ring> SparsePoly<R> {
    /// Sorts, merges duplicate exponents and drops zero coefficients.
    pub fn new(ring: R, mut raw: Vec<(u64, R::Elem)>) -> Self {
        raw.sort_by_key(|(e, _)| *e);
        let mut terms: Vec<(u64, R::Elem)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match terms.last_mut() {
                Some((le, lc)) if *le == e => ring.add_assign(lc, &c),
                _ => {
                    if let Some((_, lc)) = terms.last() {
                        if ring.is_zero(lc) {
                            terms.pop();
                        }
                    }
                    terms.push((e, c));
                }
            }
        }
        if terms.last().is_some_and(|(_, c)| ring.is_zero(c)) {
            terms.pop();
        }
        SparsePoly { ring, terms }
    }

    /// Caller guarantees strictly increasing exponents and nonzero coefficients.
    pub(crate) fn from_sorted(ring: R, terms: Vec<(u64, R::Elem)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !ring.is_zero(c)));
        SparsePoly { ring, terms }
    }

    pub fn zero(ring: R) -> Self {
        SparsePoly { ring, terms: Vec::new() }
    }

    pub fn one(ring: R) -> Self {
        let c = ring.one();
        SparsePoly::monomial(ring, 0, c)
    }

    pub fn monomial(ring: R, e: u64, c: R::Elem) -> Self {
        SparsePoly::new(ring, vec![(e, c)])
    }

    /// Builds from signed integer coefficients mapped into the ring.
    pub fn from_i64(ring: R, raw: &[(u64, i64)]) -> Self {
        let terms = raw.iter().map(|&(e, c)| (e, ring.from_bigint(&c.into()))).collect();
        SparsePoly::new(ring, terms)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn terms(&self) -> &[(u64, R::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(u64, R::Elem)> {
        self.terms
    }

    /// Number of nonzero terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn leading_coeff(&self) -> Option<&R::Elem> {
        self.terms.last().map(|(_, c)| c)
    }

    pub fn coeff(&self, e: u64) -> R::Elem {
        match self.terms.binary_search_by_key(&e, |(x, _)| *x) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.ring.zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    pub fn map_coeffs<S: Ring>(&self, target: &S, f: impl Fn(&R::Elem) -> S::Elem) -> SparsePoly<S> {
        let terms = self.terms.iter().map(|(e, c)| (*e, f(c))).filter(|(_, c)| !target.is_zero(c)).collect();
        SparsePoly::from_sorted(target.clone(), terms)
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let r = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let conv = |c: &R::Elem| if negate_other { r.neg(c) } else { c.clone() };
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((other.terms[j].0, conv(&other.terms[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        r.sub(&self.terms[i].1, &other.terms[j].1)
                    } else {
                        r.add(&self.terms[i].1, &other.terms[j].1)
                    };
                    if !r.is_zero(&c) {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        SparsePoly::from_sorted(r.clone(), out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn neg(&self) -> Self {
        let r = &self.ring;
        SparsePoly::from_sorted(r.clone(), self.terms.iter().map(|(e, c)| (*e, r.neg(c))).collect())
    }

    pub fn scale(&self, k: &R::Elem) -> Self {
        let r = &self.ring;
        let terms = self.terms.iter().map(|(e, c)| (*e, r.mul(c, k))).filter(|(_, c)| !r.is_zero(c)).collect();
        SparsePoly::from_sorted(r.clone(), terms)
    }

    /// `self * c X^e`.
    pub fn mul_monomial(&self, e: u64, c: &R::Elem) -> Result<Self> {
        let r = &self.ring;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (x, a) in &self.terms {
            let v = r.mul(a, c);
            if !r.is_zero(&v) {
                terms.push((checked_exp_add(*x, e)?, v));
            }
        }
        Ok(SparsePoly::from_sorted(r.clone(), terms))
    }

    /// Full product by expanding all `#A * #B` term pairs.
    pub fn mul_naive(&self, other: &Self) -> Result<Self> {
        let r = &self.ring;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                raw.push((checked_exp_add(*ea, *eb)?, r.mul(ca, cb)));
            }
        }
        Ok(SparsePoly::new(r.clone(), raw))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = SparsePoly::one(self.ring.clone());
        for _ in 0..k {
            acc = acc.mul_naive(self)?;
        }
        Ok(acc)
    }

    /// Term `c X^e` becomes `c (e mod char) X^{e-1}`.
    pub fn derivative(&self) -> Self {
        let r = &self.ring;
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| *e > 0)
            .map(|(e, c)| (e - 1, r.mul_u64(c, *e)))
            .filter(|(_, c)| !r.is_zero(c))
            .collect();
        SparsePoly::from_sorted(r.clone(), terms)
    }

    /// `X^{deg A} A(1/X)`.
    pub fn reciprocal(&self) -> Result<Self> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        let terms = self.terms.iter().rev().map(|(e, c)| (d - e, c.clone())).collect();
        Ok(SparsePoly::from_sorted(self.ring.clone(), terms))
    }

    /// Splits off the largest power of `X` dividing `A`.
    pub fn strip_x_power(&self) -> Result<(u64, Self)> {
        let a = self.terms.first().ok_or(Error::ZeroPolynomial)?.0;
        let terms = self.terms.iter().map(|(e, c)| (e - a, c.clone())).collect();
        Ok((a, SparsePoly::from_sorted(self.ring.clone(), terms)))
    }

    /// Evaluates with one exponentiation per exponent gap.
    pub fn eval(&self, x: &R::Elem) -> R::Elem {
        let r = &self.ring;
        let mut acc = r.zero();
        let mut pw = r.one();
        let mut last = 0u64;
        for (e, c) in &self.terms {
            pw = r.mul(&pw, &r.pow_u64(x, e - last));
            last = *e;
            r.add_assign(&mut acc, &r.mul(c, &pw));
        }
        acc
    }

    /// Coefficients folded onto `X^p - 1` (no dilation).
    pub fn reduce(&self, p: usize) -> CyclicPoly<R> {
        let r = &self.ring;
        let mut v = vec![r.zero(); p];
        for (e, c) in &self.terms {
            r.add_assign(&mut v[(*e % p as u64) as usize], c);
        }
        CyclicPoly::from_vec(r.clone(), v)
    }

    /// Quotient and remainder by classic sparse long division.
    ///
    /// Pending products `q_i X^{e_i} g_j` are kept in a max-heap keyed by
    /// exponent with one stream per quotient term, so the cost is
    /// `O(#F + #Q #G log #Q)`. Over the integers each quotient coefficient
    /// must be an exact multiple of the divisor's leading coefficient.
    pub fn classic_divrem(&self, g: &Self, term_budget: Option<usize>) -> Result<(Self, Self)> {
        let r = &self.ring;
        let dg = g.degree().ok_or(Error::DivisionByZero)?;
        let g_desc: Vec<&(u64, R::Elem)> = g.terms.iter().rev().collect();
        let lc = &g_desc[0].1;
        let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
        let mut quot: Vec<(u64, R::Elem)> = Vec::new();
        let mut rem: Vec<(u64, R::Elem)> = Vec::new();
        let mut fi = self.terms.len();
        loop {
            let fe = fi.checked_sub(1).map(|i| self.terms[i].0);
            let he = heap.peek().map(|h| h.exp);
            let cur = match (fe, he) {
                (None, None) => break,
                (a, b) => a.max(b).unwrap(),
            };
            let mut coef = r.zero();
            if fe == Some(cur) {
                fi -= 1;
                coef = self.terms[fi].1.clone();
            }
            while heap.peek().is_some_and(|h| h.exp == cur) {
                let h = heap.pop().unwrap();
                let t = r.mul(&quot[h.q].1, &g_desc[h.g].1);
                r.sub_assign(&mut coef, &t);
                if h.g + 1 < g_desc.len() {
                    heap.push(HeapEntry { exp: quot[h.q].0 + g_desc[h.g + 1].0, q: h.q, g: h.g + 1 });
                }
            }
            if r.is_zero(&coef) {
                continue;
            }
            if cur >= dg {
                let qc = r.div_exact(&coef, lc).ok_or(Error::NonExactIntegerStep)?;
                let qe = cur - dg;
                if term_budget.is_some_and(|b| quot.len() >= b) {
                    return Err(Error::BudgetExceeded(term_budget.unwrap()));
                }
                quot.push((qe, qc));
                if g_desc.len() > 1 {
                    heap.push(HeapEntry { exp: qe + g_desc[1].0, q: quot.len() - 1, g: 1 });
                }
            } else {
                rem.push((cur, coef));
            }
        }
        quot.reverse();
        rem.reverse();
        Ok((SparsePoly::from_sorted(r.clone(), quot), SparsePoly::from_sorted(r.clone(), rem)))
    }

    /// `true` when `g` divides `self` exactly (by long division).
    pub fn is_divisible_by(&self, g: &Self, term_budget: Option<usize>) -> Result<bool> {
        match self.classic_divrem(g, term_budget) {
            Ok((_, rem)) => Ok(rem.is_zero()),
            Err(Error::NonExactIntegerStep) => Ok(false),
            Err(e) => Err(e),
        }
    }
}

#[derive(PartialEq, Eq)]
struct HeapEntry {
    exp: u64,
    q: usize,
    g: usize,
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exp.cmp(&other.exp).then(other.q.cmp(&self.q))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Field> SparsePoly<F> {
    /// `A(alpha X)`.
    pub fn dilate(&self, alpha: &F::Elem) -> Self {
        let f = &self.ring;
        let mut pw = f.one();
        let mut last = 0u64;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                pw = f.mul(&pw, &f.pow_u64(alpha, e - last));
                last = *e;
                (*e, f.mul(c, &pw))
            })
            .filter(|(_, c)| !f.is_zero(c))
            .collect();
        SparsePoly::from_sorted(f.clone(), terms)
    }

    /// `(A(alpha X), A(alpha X) mod X^p - 1)`.
    pub fn dilate_reduce(&self, alpha: &F::Elem, p: usize) -> (Self, CyclicPoly<F>) {
        let d = self.dilate(alpha);
        let c = d.reduce(p);
        (d, c)
    }

    pub fn make_monic(&self) -> Result<Self> {
        let lc = self.leading_coeff().ok_or(Error::ZeroPolynomial)?;
        Ok(self.scale(&self.ring.inv(lc)?))
    }
}
