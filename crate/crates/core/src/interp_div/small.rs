use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use super::params::{params_small_char, SmallCharParams};
use super::{ceil_log2, check_degree, crt_lift, embed, restrict, DivOptions};
use crate::error::{Error, Result};
use crate::ff::{build_ext_field, Field, PrimeField};
use crate::primes::primes_in_interval;
use crate::probe::Dilated;
use crate::sparse_poly::SparsePoly;

/// Quotient of an exact division over `F_q` for any characteristic, using
/// CRT-based exponent recovery instead of derivatives.
pub fn div_small_char<P: PrimeField, G: Rng + ?Sized>(
    f: &SparsePoly<P>,
    g: &SparsePoly<P>,
    t: usize,
    epsilon: f64,
    rng: &mut G,
    opts: &DivOptions,
) -> Result<SparsePoly<P>> {
    check_degree(f, g)?;
    let d = f.degree().unwrap_or(0);
    let params = params_small_char(t, d, &f.ring().modulus(), epsilon, opts.profile)?;
    div_small_char_with(f, g, &params, rng, opts)
}

pub fn div_small_char_with<P: PrimeField, G: Rng + ?Sized>(
    f: &SparsePoly<P>,
    g: &SparsePoly<P>,
    params: &SmallCharParams,
    rng: &mut G,
    opts: &DivOptions,
) -> Result<SparsePoly<P>> {
    check_degree(f, g)?;
    let base = f.ring();
    if f.is_zero() {
        return Ok(SparsePoly::zero(base.clone()));
    }
    let d = f.degree().unwrap();
    let ext = build_ext_field(base, params.s, rng)?;
    let pool = primes_in_interval(params.lambda)?;
    let fe = embed(&ext, f);
    let ge = embed(&ext, g);
    let mut approx = SparsePoly::zero(ext.clone());
    for _ in 0..ceil_log2(params.t).max(1) {
        let primes: Vec<usize> = if pool.len() >= params.gamma {
            let mut idx = sample(rng, pool.len(), params.gamma).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| pool[i] as usize).collect()
        } else {
            (0..params.gamma).map(|_| pool[rng.gen_range(0..pool.len())] as usize).collect()
        };
        let alphas: Vec<_> = (0..params.m).map(|_| ext.random_nonzero(rng)).collect();
        let run_row = |alpha: &_| -> Result<Vec<_>> {
            let dil = Dilated::new(&fe, &ge, alpha, false);
            let approx_a = approx.dilate(alpha);
            primes
                .iter()
                .map(|&p| Ok(dil.probe(p)?.q_p.sub(&approx_a.reduce(p))))
                .collect()
        };
        let rows: Result<Vec<Vec<_>>> = if opts.parallel {
            alphas.par_iter().map(run_row).collect()
        } else {
            alphas.iter().map(run_row).collect()
        };
        let rows = match rows {
            Err(Error::NotCoprime(p)) => {
                return Err(Error::Failure(format!("dilated divisor not coprime with X^{p}-1")));
            }
            other => other?,
        };
        approx = approx.add(&crt_lift(&rows, &primes, &alphas, d));
    }
    restrict(base, &approx)
}
