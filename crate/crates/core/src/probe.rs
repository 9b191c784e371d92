//! Reduced dilated quotients `Q(alpha X) mod X^p - 1` computed from `F` and
//! `G` alone.

use crate::cyclic::CyclicPoly;
use crate::error::{Error, Result};
use crate::ff::Field;
use crate::sparse_poly::SparsePoly;

#[derive(Clone, Debug)]
pub struct ProbePair<F: Field> {
    pub p: usize,
    pub alpha: F::Elem,
    /// `Q(alpha X) mod X^p - 1`.
    pub q_p: CyclicPoly<F>,
    /// `(Q(alpha X))' mod X^p - 1`, when requested.
    pub dq_p: Option<CyclicPoly<F>>,
}

/// `F(alpha X)`, `G(alpha X)` and optionally their derivatives, shared by
/// every probe at the same point.
#[derive(Clone, Debug)]
pub struct Dilated<F: Field> {
    pub alpha: F::Elem,
    pub f: SparsePoly<F>,
    pub g: SparsePoly<F>,
    pub df: Option<SparsePoly<F>>,
    pub dg: Option<SparsePoly<F>>,
}

impl<F: Field> Dilated<F> {
    pub fn new(f: &SparsePoly<F>, g: &SparsePoly<F>, alpha: &F::Elem, with_derivative: bool) -> Self {
        let fa = f.dilate(alpha);
        let ga = g.dilate(alpha);
        let (df, dg) = if with_derivative { (Some(fa.derivative()), Some(ga.derivative())) } else { (None, None) };
        Dilated { alpha: alpha.clone(), f: fa, g: ga, df, dg }
    }

    /// Solves `F_p = G_p Q_p` and, when derivatives are present,
    /// `[F']_p - [G']_p Q_p = G_p [Q']_p` modulo `X^p - 1`.
    pub fn probe(&self, p: usize) -> Result<ProbePair<F>> {
        let g_inv = self.g.reduce(p).inv().map_err(|_| Error::NotCoprime(p))?;
        let q_p = self.f.reduce(p).mul(&g_inv);
        let dq_p = match (&self.df, &self.dg) {
            (Some(df), Some(dg)) => Some(df.reduce(p).sub(&dg.reduce(p).mul(&q_p)).mul(&g_inv)),
            _ => None,
        };
        Ok(ProbePair { p, alpha: self.alpha.clone(), q_p, dq_p })
    }
}

pub fn quotient_probe<F: Field>(
    f: &SparsePoly<F>,
    g: &SparsePoly<F>,
    alpha: &F::Elem,
    p: usize,
    with_derivative: bool,
) -> Result<ProbePair<F>> {
    Dilated::new(f, g, alpha, with_derivative).probe(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{Fp, Ring};
    use proptest::prelude::*;

    fn poly(q: u64, t: &[(u64, i64)]) -> SparsePoly<Fp> {
        SparsePoly::from_i64(Fp::new(q).unwrap(), t)
    }

    #[test]
    fn equal_inputs_give_unit_quotient() {
        let f = Fp::new(101).unwrap();
        let g = poly(101, &[(7, 3), (2, 1), (0, 5)]);
        let pr = quotient_probe(&g, &g, &f.from_u64(2), 7, true).unwrap();
        assert_eq!(pr.q_p, CyclicPoly::one(f.clone(), 7));
        assert!(pr.dq_p.unwrap().is_zero());
    }

    #[test]
    fn matches_known_quotient() {
        let fld = Fp::new(101).unwrap();
        let f = poly(101, &[(5, 1), (0, -1)]);
        let g = poly(101, &[(1, 1), (0, -1)]);
        let (q, _) = f.classic_divrem(&g, None).unwrap();
        let alpha = fld.from_u64(3);
        let pr = quotient_probe(&f, &g, &alpha, 7, true).unwrap();
        let (qa, qap) = q.dilate_reduce(&alpha, 7);
        assert_eq!(pr.q_p, qap);
        assert_eq!(pr.dq_p.unwrap(), qa.derivative().reduce(7));
    }

    #[test]
    fn x_minus_one_is_never_coprime_at_alpha_one() {
        let fld = Fp::new(101).unwrap();
        let f = poly(101, &[(5, 1), (0, -1)]);
        let g = poly(101, &[(1, 1), (0, -1)]);
        for p in [2, 3, 5, 7] {
            assert_eq!(quotient_probe(&f, &g, &fld.one(), p, false).unwrap_err(), Error::NotCoprime(p));
        }
    }

    proptest! {
        #[test]
        fn probe_agrees_with_true_quotient(
            gt in prop::collection::vec((0u64..400, 1u64..1009), 1..5),
            qt in prop::collection::vec((0u64..400, 1u64..1009), 1..6),
            alpha in 1u64..1009,
            pidx in 0usize..6,
        ) {
            let fld = Fp::new(1009).unwrap();
            let mk = |v: &[(u64, u64)]| SparsePoly::new(fld.clone(), v.iter().map(|&(e, c)| (e, fld.from_u64(c))).collect());
            let g = mk(&gt);
            let q = mk(&qt);
            prop_assume!(!g.is_zero() && !q.is_zero());
            let f = g.mul_naive(&q).unwrap();
            let p = [2usize, 3, 5, 7, 11, 13][pidx];
            let a = fld.from_u64(alpha);
            if let Ok(pr) = quotient_probe(&f, &g, &a, p, true) {
                let (qa, qap) = q.dilate_reduce(&a, p);
                prop_assert_eq!(pr.q_p, qap);
                prop_assert_eq!(pr.dq_p.unwrap(), qa.derivative().reduce(p));
            }
        }
    }
}
