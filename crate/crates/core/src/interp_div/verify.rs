use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use rand::Rng;

use super::params::ln_biguint;
use crate::ff::{build_ext_field, ext_degree_for, Field, FpBig, Integers, PrimeField, Ring};
use crate::primes::random_probable_prime;
use crate::sparse_poly::SparsePoly;

/// Deterministic necessary conditions for `F = G Q` over an integral domain:
/// degrees, leading and trailing terms.
fn shape_matches<R: Ring>(f: &SparsePoly<R>, g: &SparsePoly<R>, q: &SparsePoly<R>) -> Option<bool> {
    if g.is_zero() || q.is_zero() || f.is_zero() {
        return Some(f.is_zero() && (g.is_zero() || q.is_zero()));
    }
    let r = f.ring();
    let (fl, gl, ql) = (f.terms().last()?, g.terms().last()?, q.terms().last()?);
    let (ff, gf, qf) = (&f.terms()[0], &g.terms()[0], &q.terms()[0]);
    let ok = gl.0.checked_add(ql.0) == Some(fl.0)
        && gf.0.checked_add(qf.0) == Some(ff.0)
        && r.mul(&gl.1, &ql.1) == fl.1
        && r.mul(&gf.1, &qf.1) == ff.1;
    if !ok {
        return Some(false);
    }
    None
}

/// Randomized test of `F = G Q` over `F_q`; never rejects a true identity
/// and accepts a false one with probability at most `epsilon`.
pub fn verify_product<P: PrimeField, G: Rng + ?Sized>(
    f: &SparsePoly<P>,
    g: &SparsePoly<P>,
    q: &SparsePoly<P>,
    epsilon: f64,
    rng: &mut G,
) -> bool {
    if let Some(v) = shape_matches(f, g, q) {
        return v;
    }
    let base = f.ring();
    let d = f.degree().unwrap().max(1);
    // q^u >= 2d/eps, so one point errs with probability <= eps/2
    let target = BigUint::from((2.0 * d as f64 / epsilon).ceil() as u128);
    let u = ext_degree_for(&base.modulus(), &target);
    let ext = match build_ext_field(base, u, rng) {
        Ok(e) => e,
        Err(_) => return false,
    };
    let per_point = ((d as f64).ln() - ln_biguint(&ext.order())).exp();
    let rounds = rounds_for(per_point.min(0.5), epsilon);
    let fe = f.map_coeffs(&ext, |c| ext.embed(c));
    let ge = g.map_coeffs(&ext, |c| ext.embed(c));
    let qe = q.map_coeffs(&ext, |c| ext.embed(c));
    (0..rounds).all(|_| {
        let beta = ext.random(rng);
        fe.eval(&beta) == ext.mul(&ge.eval(&beta), &qe.eval(&beta))
    })
}

/// Smallest `r >= 1` with `per_point^r <= epsilon`.
fn rounds_for(per_point: f64, epsilon: f64) -> usize {
    if per_point <= 0.0 {
        return 1;
    }
    ((epsilon.ln() / per_point.ln()).ceil() as usize).max(1)
}

fn height(a: &SparsePoly<Integers>) -> BigUint {
    a.terms().iter().map(|(_, c)| c.abs().magnitude().clone()).max().unwrap_or_default()
}

/// Randomized test of `F = G Q` over `Z` by evaluation modulo a random
/// prime large enough that `F - G Q` cannot vanish coefficientwise.
pub fn verify_product_z<G: Rng + ?Sized>(
    f: &SparsePoly<Integers>,
    g: &SparsePoly<Integers>,
    q: &SparsePoly<Integers>,
    epsilon: f64,
    rng: &mut G,
) -> bool {
    if let Some(v) = shape_matches(f, g, q) {
        return v;
    }
    let d = f.degree().unwrap().max(1);
    let h = height(f).max(height(g)).max(height(q));
    let t = f.num_terms().max(g.num_terms()).max(q.num_terms());
    // |coefficients of F - GQ| <= H + T H^2 < 2 H^2 (T + 1)
    let coeff_bound = BigUint::from(2u32) * &h * &h * BigUint::from(t as u64 + 1) * BigUint::from(d + 1);
    let sz_bound = BigUint::from((4.0 * d as f64 / epsilon).ceil() as u128);
    let n = coeff_bound.max(sz_bound).max(BigUint::one() << 61u32);
    let prime = match random_probable_prime(&n, epsilon / 4.0, rng) {
        Ok(p) => p,
        Err(_) => return false,
    };
    let field = FpBig::new_unchecked(prime);
    let reduce = |a: &SparsePoly<Integers>| a.map_coeffs(&field, |c: &BigInt| field.from_bigint(c));
    let beta = field.random(rng);
    let lhs = reduce(f).eval(&beta);
    let rhs = field.mul(&reduce(g).eval(&beta), &reduce(q).eval(&beta));
    lhs == rhs
}
