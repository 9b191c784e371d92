//! Deterministic divisibility tests for divisors of bounded or gapped shape.
//!
//! Every route either answers exactly or declines with
//! [`Verdict::NotApplicable`]; nothing here is probabilistic.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::dense;
use crate::error::{Error, Result};
use crate::ff::{Field, Ring};
use crate::sparse_poly::SparsePoly;

pub const DEFAULT_T_MAX: u64 = 8;
/// Deepest nesting of structured steps.
const MAX_DEPTH: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::Yes => Some(true),
            Verdict::No => Some(false),
            Verdict::NotApplicable => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "true",
            Verdict::No => "false",
            Verdict::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DivTestOptions {
    /// Admission threshold for chunk degrees, repetition counts and term
    /// caps. `None` means [`default_budget`].
    pub budget: Option<usize>,
    pub t_max: u64,
}

impl Default for DivTestOptions {
    fn default() -> Self {
        DivTestOptions { budget: None, t_max: DEFAULT_T_MAX }
    }
}

/// `(T * ceil(log2(deg F + 2)))^3` with `T = max(#F, #G)`.
pub fn default_budget<R: Ring>(f: &SparsePoly<R>, g: &SparsePoly<R>) -> usize {
    let t = f.num_terms().max(g.num_terms()) as u128;
    let d = f.degree().unwrap_or(0) as u128 + 2;
    let log = 128 - (d - 1).leading_zeros() as u128;
    (t * log).saturating_pow(3).min(usize::MAX as u128) as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SparsityBudget {
    pub t: u64,
    /// Saturates at `u64::MAX`.
    pub bound: u64,
}

/// `ceil(tf * (tg + t - 2)^(t-1) / (t-1)!)`.
fn scaled_bound(tf: usize, tg: usize, t: u64) -> u64 {
    let base = BigUint::from(tg.max(1) as u64 + t - 2 + (t == 0) as u64);
    let mut num = BigUint::from(tf as u64);
    let mut den = BigUint::from(1u32);
    let cap = BigUint::from(u64::MAX);
    // Each factor base/j is at least 1, so the running ratio never shrinks.
    for j in 1..t {
        num *= &base;
        den *= j;
        if &num / &den > cap {
            return u64::MAX;
        }
    }
    ((num + &den - 1u32) / den).to_u64().unwrap_or(u64::MAX)
}

/// Sparsity bound for `F quo G` when the divisor has a gap of `k` below its
/// top chunk and the quotient has `n` coefficients.
pub fn quotient_sparsity_bound(tf: usize, tg: usize, n: u64, k: u64) -> SparsityBudget {
    let t = n.div_ceil(k.max(1)).max(1);
    SparsityBudget { t, bound: scaled_bound(tf, tg, t) }
}

/// Sparsity bound for `G0^t / G mod X^{tk}`.
pub fn series_sparsity_bound(tg: usize, t: u64) -> u64 {
    if t == 0 {
        return 0;
    }
    scaled_bound(1, tg, t)
}

/// `F / G mod X^n` as a power series, by eliminating the lowest term at
/// each step. Stops with `BudgetExceeded` once more than `cap` terms appear.
pub fn bounded_series_quotient<F: Field>(
    f: &SparsePoly<F>,
    g: &SparsePoly<F>,
    n: u64,
    cap: usize,
) -> Result<SparsePoly<F>> {
    let ring = f.ring();
    let gt = g.terms();
    let Some((g_low, g0)) = gt.first() else {
        return Err(Error::DivisionByZero);
    };
    if *g_low != 0 {
        return Err(Error::InvalidArgument("series divisor must have a nonzero constant term".into()));
    }
    let g0_inv = ring.inv(g0)?;
    let ft = f.terms();
    let mut fi = 0;
    let mut q: Vec<(u64, F::Elem)> = Vec::new();
    // (exponent of q_i * g_j, i, j)
    let mut heap: BinaryHeap<Reverse<(u64, usize, usize)>> = BinaryHeap::new();
    loop {
        let next_f = ft.get(fi).map(|t| t.0);
        let next_h = heap.peek().map(|Reverse(h)| h.0);
        let e = match (next_f, next_h) {
            (None, None) => break,
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.min(b),
        };
        if e >= n {
            break;
        }
        let mut c = ring.zero();
        if next_f == Some(e) {
            c = ft[fi].1.clone();
            fi += 1;
        }
        while let Some(&Reverse((he, i, j))) = heap.peek() {
            if he != e {
                break;
            }
            heap.pop();
            ring.sub_assign(&mut c, &ring.mul(&q[i].1, &gt[j].1));
            if j + 1 < gt.len() {
                heap.push(Reverse((q[i].0 + gt[j + 1].0, i, j + 1)));
            }
        }
        if !ring.is_zero(&c) {
            if q.len() == cap {
                return Err(Error::BudgetExceeded(cap));
            }
            q.push((e, ring.mul(&c, &g0_inv)));
            if gt.len() > 1 {
                heap.push(Reverse((e + gt[1].0, q.len() - 1, 1)));
            }
        }
    }
    Ok(SparsePoly::new(ring.clone(), q))
}

/// A split `G = g0 + X^k g1 + X^l g2` along the gaps of the support. The
/// two-chunk form has no `l` and a zero `g2`.
#[derive(Clone, Debug, PartialEq)]
pub struct GapShape<R: Ring> {
    pub g0: SparsePoly<R>,
    pub k: u64,
    pub g1: SparsePoly<R>,
    pub l: Option<u64>,
    pub g2: SparsePoly<R>,
    /// Number of copies of the lower part multiplied into the dividend.
    pub t: u64,
}

impl<R: Ring> GapShape<R> {
    pub fn gap1(&self) -> u64 {
        self.k - self.g0.degree().unwrap_or(0)
    }

    pub fn gap2(&self) -> Option<u64> {
        self.l.map(|l| l - self.k - self.g1.degree().unwrap_or(0))
    }

    /// Offset of the highest chunk.
    pub fn top_offset(&self) -> u64 {
        self.l.unwrap_or(self.k)
    }

    /// Everything below the highest chunk.
    pub fn lower(&self) -> SparsePoly<R> {
        match self.l {
            None => self.g0.clone(),
            Some(_) => self.g0.add(&shift(&self.g1, self.k)),
        }
    }

    pub fn reconstruct(&self) -> SparsePoly<R> {
        let mut g = self.g0.add(&shift(&self.g1, self.k));
        if let Some(l) = self.l {
            g = g.add(&shift(&self.g2, l));
        }
        g
    }
}

fn shift<R: Ring>(a: &SparsePoly<R>, by: u64) -> SparsePoly<R> {
    let terms = a.terms().iter().map(|(e, c)| (e + by, c.clone())).collect();
    SparsePoly::new(a.ring().clone(), terms)
}

fn slice<R: Ring>(g: &SparsePoly<R>, from: usize, to: usize, offset: u64) -> SparsePoly<R> {
    let terms = g.terms()[from..to].iter().map(|(e, c)| (e - offset, c.clone())).collect();
    SparsePoly::new(g.ring().clone(), terms)
}

/// Looks for a split of `G` (with `G(0) != 0`) usable by the structured
/// test when the quotient has `n` coefficients and the dividend `tf` terms.
/// Only the two widest gaps of the support are considered.
pub fn detect_gap_structure<R: Ring>(
    g: &SparsePoly<R>,
    n: u64,
    tf: usize,
    budget: usize,
    t_max: u64,
) -> Option<GapShape<R>> {
    detect(g, n, tf, budget, t_max, true)
}

fn detect<R: Ring>(
    g: &SparsePoly<R>,
    n: u64,
    tf: usize,
    budget: usize,
    t_max: u64,
    allow_three: bool,
) -> Option<GapShape<R>> {
    let es: Vec<u64> = g.terms().iter().map(|t| t.0).collect();
    if es.len() < 2 || es[0] != 0 || n == 0 {
        return None;
    }
    let budget = budget as u64;
    let tg = es.len();
    let mut widest: Vec<(u64, usize)> = es.windows(2).enumerate().map(|(i, w)| (w[1] - w[0], i)).collect();
    widest.sort_by_key(|&(gap, i)| (Reverse(gap), i));
    widest.truncate(2);

    let admissible = |gap: u64| {
        let t = n.div_ceil(gap);
        (t <= t_max && scaled_bound(tf, tg, t) <= budget).then_some(t)
    };
    // (t, chunks, chunk degree, shape)
    let mut best: Option<(u64, u8, u64, GapShape<R>)> = None;
    let mut consider = |cand: (u64, u8, u64, GapShape<R>)| {
        if best.as_ref().is_none_or(|b| (cand.0, cand.1, cand.2) < (b.0, b.1, b.2)) {
            best = Some(cand);
        }
    };
    for &(gap, i) in &widest {
        let low = es[i];
        let Some(t) = admissible(gap) else { continue };
        if t.saturating_mul(low) > budget {
            continue;
        }
        let shape = GapShape {
            g0: slice(g, 0, i + 1, 0),
            k: es[i + 1],
            g1: slice(g, i + 1, tg, es[i + 1]),
            l: None,
            g2: SparsePoly::zero(g.ring().clone()),
            t,
        };
        consider((t, 2, low, shape));
    }
    if allow_three && widest.len() == 2 {
        let (i, j) = (widest[0].1.min(widest[1].1), widest[0].1.max(widest[1].1));
        let gap1 = es[i + 1] - es[i];
        let gap2 = es[j + 1] - es[j];
        let mid = es[j] - es[i + 1];
        if let Some(t) = admissible(gap2) {
            // Gap left under the top chunk of (g0 + X^k g1)^t.
            let inner = gap1 as i128 - (t as i128 - 1) * mid as i128;
            let inner_ok = inner > 0 && n.div_ceil(inner as u64) <= t_max;
            if mid <= budget && inner_ok {
                let shape = GapShape {
                    g0: slice(g, 0, i + 1, 0),
                    k: es[i + 1],
                    g1: slice(g, i + 1, j + 1, es[i + 1]),
                    l: Some(es[j + 1]),
                    g2: slice(g, j + 1, tg, es[j + 1]),
                    t,
                };
                consider((t, 3, mid, shape));
            }
        }
    }
    best.map(|b| b.3)
}

fn to_dense<F: Field>(a: &SparsePoly<F>) -> Vec<F::Elem> {
    let mut v = vec![a.ring().zero(); a.degree().map_or(0, |d| d as usize + 1)];
    for (e, c) in a.terms() {
        v[*e as usize] = c.clone();
    }
    v
}

/// Decides `G | F` when either the quotient length or `deg G` is at most
/// `budget`.
pub fn divides_smallcases<F: Field>(f: &SparsePoly<F>, g: &SparsePoly<F>, budget: usize) -> Result<Verdict> {
    let dg = g.degree().ok_or(Error::DivisionByZero)?;
    let Some(df) = f.degree() else {
        return Ok(Verdict::Yes);
    };
    if df < dg {
        return Ok(Verdict::No);
    }
    let n = df - dg + 1;
    if n <= budget as u64 {
        let (_, r) = f.classic_divrem(g, Some(n as usize))?;
        return Ok(Verdict::from_bool(r.is_zero()));
    }
    if dg > budget as u64 {
        return Ok(Verdict::NotApplicable);
    }
    if dg == 0 {
        return Ok(Verdict::Yes);
    }
    let ring = f.ring();
    let modulus = to_dense(g);
    let x = [ring.zero(), ring.one()];
    let zero = || vec![ring.zero(); dg as usize];
    let r = f
        .terms()
        .par_iter()
        .map(|(e, c)| {
            let xe = dense::powmod(ring, &x, &BigUint::from(*e), &modulus);
            let mut out = zero();
            for (o, v) in out.iter_mut().zip(&xe) {
                *o = ring.mul(c, v);
            }
            out
        })
        .reduce(zero, |mut a, b| {
            for (x, y) in a.iter_mut().zip(&b) {
                ring.add_assign(x, y);
            }
            a
        });
    Ok(Verdict::from_bool(r.iter().all(|c| ring.is_zero(c))))
}

/// Structured test on divisors that split along wide gaps, in either
/// orientation.
pub fn divides_structured<F: Field>(f: &SparsePoly<F>, g: &SparsePoly<F>, opts: &DivTestOptions) -> Result<Verdict> {
    if g.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if f.is_zero() {
        return Ok(Verdict::Yes);
    }
    let budget = opts.budget.unwrap_or_else(|| default_budget(f, g));
    let (a, f1) = f.strip_x_power()?;
    let (b, g1) = g.strip_x_power()?;
    if b > a {
        return Ok(Verdict::No);
    }
    structured_inner(&f1, &g1, budget, opts.t_max, 0)
}

/// Both arguments nonzero with nonzero constant terms.
fn structured_inner<F: Field>(
    f: &SparsePoly<F>,
    g: &SparsePoly<F>,
    budget: usize,
    t_max: u64,
    depth: usize,
) -> Result<Verdict> {
    if depth >= MAX_DEPTH {
        return Ok(Verdict::NotApplicable);
    }
    let (df, dg) = (f.degree().unwrap(), g.degree().unwrap());
    if df < dg {
        return Ok(Verdict::No);
    }
    if dg == 0 {
        return Ok(Verdict::Yes);
    }
    let n = df - dg + 1;
    for reversed in [false, true] {
        let (ff, gg) = if reversed { (f.reciprocal()?, g.reciprocal()?) } else { (f.clone(), g.clone()) };
        let Some(shape) = detect(&gg, n, ff.num_terms(), budget, t_max, depth == 0) else {
            continue;
        };
        match structured_step(&ff, &gg, &shape, budget, t_max, depth) {
            Ok(Verdict::NotApplicable) | Err(Error::BudgetExceeded(_)) | Err(Error::ExponentOverflow) => {}
            other => return other,
        }
    }
    Ok(Verdict::NotApplicable)
}

/// With `C = lower^t`: `G | F` iff `G | F C` and `C | F C / G`. The first
/// quotient is a truncated power series whose sparsity the shape bounds.
fn structured_step<F: Field>(
    f: &SparsePoly<F>,
    g: &SparsePoly<F>,
    shape: &GapShape<F>,
    budget: usize,
    t_max: u64,
    depth: usize,
) -> Result<Verdict> {
    let t = u32::try_from(shape.t).map_err(|_| Error::BudgetExceeded(budget))?;
    let c = shape.lower().pow(t)?;
    if c.num_terms() > budget {
        return Ok(Verdict::NotApplicable);
    }
    let p = f.mul_naive(&c)?;
    let len = p.degree().unwrap() - g.degree().unwrap() + 1;
    let n = f.degree().unwrap() - g.degree().unwrap() + 1;
    let gap = shape.top_offset() - shape.lower().degree().unwrap();
    let cap = quotient_sparsity_bound(f.num_terms(), g.num_terms(), n, gap).bound;
    let q0 = bounded_series_quotient(&p, g, len, cap.min(budget as u64) as usize)?;
    if q0.mul_naive(g)? != p {
        return Ok(Verdict::No);
    }
    if c.is_constant() {
        return Ok(Verdict::Yes);
    }
    match divides_smallcases(&q0, &c, budget)? {
        Verdict::NotApplicable => structured_inner(&q0, &c, budget, t_max, depth + 1),
        v => Ok(v),
    }
}

/// Tries the bounded cases, then the structured test in both orientations.
pub fn divides<F: Field>(f: &SparsePoly<F>, g: &SparsePoly<F>, opts: &DivTestOptions) -> Result<Verdict> {
    let dg = g.degree().ok_or(Error::DivisionByZero)?;
    let Some(df) = f.degree() else {
        return Ok(Verdict::Yes);
    };
    if dg == 0 {
        return Ok(Verdict::Yes);
    }
    if dg > df {
        return Ok(Verdict::No);
    }
    let budget = opts.budget.unwrap_or_else(|| default_budget(f, g));
    let (a, f1) = f.strip_x_power()?;
    let (b, g1) = g.strip_x_power()?;
    if b > a {
        return Ok(Verdict::No);
    }
    match divides_smallcases(&f1, &g1, budget)? {
        Verdict::NotApplicable => structured_inner(&f1, &g1, budget, opts.t_max, 0),
        v => Ok(v),
    }
}
