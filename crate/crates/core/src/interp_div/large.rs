use std::collections::HashMap;

use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;

use super::params::{params_large_char, LargeCharParams};
use super::{ceil_log2, check_degree, dlift, embed, restrict, DivOptions};
use crate::cyclic::CyclicPoly;
use crate::error::{Error, Result};
use crate::ff::{build_ext_field, ExtElem, ExtField, Field, PrimeField};
use crate::primes::first_n_primes;
use crate::probe::{Dilated, ProbePair};
use crate::sparse_poly::SparsePoly;

/// Fresh dilation points tried before a coprimality failure is reported.
const MAX_ALPHA_DRAWS: usize = 8;

/// Called after every iteration with the iteration index, the current
/// dilated approximation and the dilation point.
pub type IterationObserver<'a, P> = dyn FnMut(usize, &SparsePoly<ExtField<P>>, &ExtElem<P>) + 'a;

/// Quotient of an exact division over `F_q` with `char > deg F`, given a
/// bound `t` on the sparsities of `F`, `G` and `F/G`.
pub fn div_large_char<P: PrimeField, G: Rng + ?Sized>(
    f: &SparsePoly<P>,
    g: &SparsePoly<P>,
    t: usize,
    epsilon: f64,
    rng: &mut G,
    opts: &DivOptions,
) -> Result<SparsePoly<P>> {
    check_degree(f, g)?;
    let d = f.degree().unwrap_or(0);
    let params = params_large_char(t, d, &f.ring().modulus(), epsilon, opts.profile)?;
    div_large_char_with(f, g, &params, rng, opts, None)
}

/// Same as [`div_large_char`] with explicit parameters and an optional
/// per-iteration observer.
pub fn div_large_char_with<P: PrimeField, G: Rng + ?Sized>(
    f: &SparsePoly<P>,
    g: &SparsePoly<P>,
    params: &LargeCharParams,
    rng: &mut G,
    opts: &DivOptions,
    mut observer: Option<&mut IterationObserver<'_, P>>,
) -> Result<SparsePoly<P>> {
    check_degree(f, g)?;
    let base = f.ring();
    let d = f.degree().unwrap_or(0);
    if base.characteristic() <= BigUint::from(d) {
        return Err(Error::InvalidArgument("large-characteristic division needs char > deg F".into()));
    }
    if f.is_zero() {
        return Ok(SparsePoly::zero(base.clone()));
    }
    let ext = build_ext_field(base, params.s, rng)?;
    let pool = first_n_primes(params.n);
    let fe = embed(&ext, f);
    let ge = embed(&ext, g);
    for _ in 0..MAX_ALPHA_DRAWS {
        let alpha = ext.random_nonzero(rng);
        match run_with_alpha(&fe, &ge, &alpha, params, &pool, rng, opts, observer.as_deref_mut()) {
            Err(Error::NotCoprime(_)) => continue,
            Ok(qa) => {
                let q = qa.dilate(&ext.inv(&alpha)?);
                return restrict(base, &q);
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::Failure(format!("divisor stayed non-coprime after {MAX_ALPHA_DRAWS} dilation points")))
}

type ProbeCache<F> = HashMap<usize, ProbePair<F>>;

pub(crate) fn compute_probes<F: Field>(dil: &Dilated<F>, primes: &[usize], parallel: bool) -> Result<Vec<ProbePair<F>>> {
    if parallel {
        primes.par_iter().map(|&p| dil.probe(p)).collect()
    } else {
        primes.iter().map(|&p| dil.probe(p)).collect()
    }
}

#[allow(clippy::too_many_arguments)]
fn run_with_alpha<P: PrimeField, G: Rng + ?Sized>(
    fe: &SparsePoly<ExtField<P>>,
    ge: &SparsePoly<ExtField<P>>,
    alpha: &ExtElem<P>,
    params: &LargeCharParams,
    pool: &[u64],
    rng: &mut G,
    opts: &DivOptions,
    mut observer: Option<&mut IterationObserver<'_, P>>,
) -> Result<SparsePoly<ExtField<P>>> {
    let ext = fe.ring().clone();
    let dil = Dilated::new(fe, ge, alpha, true);
    let mut cache: ProbeCache<ExtField<P>> = HashMap::new();
    let mut approx = SparsePoly::zero(ext.clone());
    let d = fe.degree().unwrap_or(0);
    for it in 0..ceil_log2(params.t).max(1) {
        let mut chosen: Vec<usize> = (0..params.k).map(|_| pool[rng.gen_range(0..pool.len())] as usize).collect();
        chosen.sort_unstable();
        chosen.dedup();
        let missing: Vec<usize> = chosen.iter().copied().filter(|p| !cache.contains_key(p)).collect();
        for pr in compute_probes(&dil, &missing, opts.parallel)? {
            cache.insert(pr.p, pr);
        }
        // the prime whose residual image has the most terms; ties go to the smallest p
        let mut best: Option<(usize, usize, CyclicPoly<ExtField<P>>)> = None;
        for &p in &chosen {
            let residual = cache[&p].q_p.sub(&approx.reduce(p));
            let w = residual.weight();
            if best.as_ref().is_none_or(|(_, bw, _)| w > *bw) {
                best = Some((p, w, residual));
            }
        }
        let (p, _, residual) = best.expect("k >= 1");
        let dq = cache[&p].dq_p.as_ref().expect("derivative probes requested");
        let residual_d = dq.sub(&approx.derivative().reduce(p));
        approx = approx.add(&dlift(&residual, &residual_d, d));
        if let Some(obs) = observer.as_deref_mut() {
            obs(it, &approx, alpha);
        }
    }
    Ok(approx)
}
