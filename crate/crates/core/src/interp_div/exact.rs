use rand::Rng;

use super::{check_degree, div_large_char, div_small_char, verify_product, DivOptions};
use crate::error::{Error, Result};
use crate::ff::PrimeField;
use crate::sparse_poly::SparsePoly;

#[derive(Clone, Debug)]
pub struct DivisionReport<P: PrimeField> {
    pub quotient: SparsePoly<P>,
    /// Sparsity guess at which the quotient verified.
    pub t: usize,
    /// Inner attempts that ended in a coprimality failure.
    pub failed_attempts: usize,
    /// Tentative quotients rejected by verification.
    pub rejected: usize,
}

/// Output-sensitive exact division over `F_q`: doubles a sparsity guess
/// until the tentative quotient passes product verification.
pub fn exact_division<P: PrimeField, G: Rng + ?Sized>(
    f: &SparsePoly<P>,
    g: &SparsePoly<P>,
    epsilon: f64,
    rng: &mut G,
    opts: &DivOptions,
) -> Result<SparsePoly<P>> {
    exact_division_report(f, g, epsilon, rng, opts).map(|r| r.quotient)
}

pub fn exact_division_report<P: PrimeField, G: Rng + ?Sized>(
    f: &SparsePoly<P>,
    g: &SparsePoly<P>,
    epsilon: f64,
    rng: &mut G,
    opts: &DivOptions,
) -> Result<DivisionReport<P>> {
    check_degree(f, g)?;
    let base = f.ring();
    let report = |quotient, t| DivisionReport { quotient, t, failed_attempts: 0, rejected: 0 };
    if f.is_zero() {
        return Ok(report(SparsePoly::zero(base.clone()), 1));
    }
    if g.is_constant() {
        let c = base.inv(g.leading_coeff().unwrap())?;
        return Ok(report(f.scale(&c), 1));
    }
    let d = f.degree().unwrap();
    let large = base.characteristic() > d.into();
    // no quotient has more than deg F - deg G + 1 terms
    let span = (d - g.degree().unwrap()) as usize;
    let t_cap = opts.max_t.min(span.saturating_add(1).next_power_of_two().saturating_mul(2));
    let mut out = report(SparsePoly::zero(base.clone()), 1);
    loop {
        out.t *= 2;
        if out.t > t_cap.max(2) {
            return Err(Error::GaveUp(format!("no verified quotient up to sparsity {}", out.t / 2)));
        }
        let candidate = if large {
            div_large_char(f, g, out.t, epsilon / 2.0, rng, opts)
        } else {
            div_small_char(f, g, out.t, epsilon / 2.0, rng, opts)
        };
        match candidate {
            Ok(q) => {
                if verify_product(f, g, &q, epsilon / (2.0 * out.t as f64), rng) {
                    out.quotient = q;
                    return Ok(out);
                }
                out.rejected += 1;
            }
            Err(Error::Failure(_)) | Err(Error::NotCoprime(_)) => out.failed_attempts += 1,
            Err(e) => return Err(e),
        }
    }
}
