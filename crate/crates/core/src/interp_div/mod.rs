//! Sparse exact division by interpolating the quotient from its reductions
//! modulo `X^p - 1` at random dilation points.

mod crt;
mod dlift;
mod exact;
mod large;
mod params;
mod small;
mod verify;

pub use crt::crt_lift;
pub use dlift::dlift;
pub use exact::{exact_division, exact_division_report, DivisionReport};
pub use large::{div_large_char, div_large_char_with, IterationObserver};
pub use params::{params_large_char, params_small_char, LargeCharParams, ParamProfile, SmallCharParams};
pub use small::{div_small_char, div_small_char_with};
pub use verify::{verify_product, verify_product_z};

use crate::error::{Error, Result};
use crate::ff::{ExtField, Field, PrimeField};
use crate::sparse_poly::SparsePoly;

/// Knobs shared by the division drivers.
#[derive(Clone, Debug)]
pub struct DivOptions {
    pub profile: ParamProfile,
    /// Run independent probes on the ambient rayon pool.
    pub parallel: bool,
    /// Upper limit for the sparsity guess of the doubling loop.
    pub max_t: usize,
}

impl Default for DivOptions {
    fn default() -> Self {
        DivOptions { profile: ParamProfile::Practical, parallel: false, max_t: 1 << 20 }
    }
}

pub(crate) fn embed<P: PrimeField>(ext: &ExtField<P>, a: &SparsePoly<P>) -> SparsePoly<ExtField<P>> {
    a.map_coeffs(ext, |c| ext.embed(c))
}

/// Maps back to the prime field, failing if some coefficient lies outside it.
pub(crate) fn restrict<P: PrimeField>(base: &P, a: &SparsePoly<ExtField<P>>) -> Result<SparsePoly<P>> {
    let ext = a.ring();
    let mut terms = Vec::with_capacity(a.num_terms());
    for (e, c) in a.terms() {
        let v = ext
            .to_prime_subfield(c)
            .ok_or_else(|| Error::Failure("recovered coefficient outside the base field".into()))?;
        terms.push((*e, base.from_biguint(&v)));
    }
    Ok(SparsePoly::new(base.clone(), terms))
}

pub(crate) fn ceil_log2(t: usize) -> usize {
    (usize::BITS - t.max(1).saturating_sub(1).leading_zeros()) as usize
}

pub(crate) fn check_degree<F: Field>(f: &SparsePoly<F>, g: &SparsePoly<F>) -> Result<()> {
    if g.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if !f.is_zero() && f.degree() < g.degree() {
        return Err(Error::NotDivisible);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::ceil_log2;

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
    }
}
