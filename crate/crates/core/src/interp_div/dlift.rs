use crate::cyclic::CyclicPoly;
use crate::ff::{biguint_to_u64, Field};
use crate::sparse_poly::SparsePoly;

/// Recovers terms `c X^e` from a reduction pair: a coefficient `c` at
/// residue `r` and a derivative coefficient `c e` at `r - 1` determine `e`.
///
/// Residues whose ratio is not an integer `e <= d` with `e = r mod p` are
/// treated as collisions and skipped. Requires characteristic `> d`.
pub fn dlift<F: Field>(q_p: &CyclicPoly<F>, dq_p: &CyclicPoly<F>, d: u64) -> SparsePoly<F> {
    let f = q_p.ring();
    let p = q_p.p();
    let dq = dq_p.coeffs();
    let mut terms = Vec::new();
    for (r, c) in q_p.coeffs().iter().enumerate() {
        if f.is_zero(c) {
            continue;
        }
        let prev = (r + p - 1) % p;
        let ratio = f.mul(&dq[prev], &f.inv(c).expect("nonzero"));
        let Some(e) = f.to_prime_subfield(&ratio).as_ref().and_then(biguint_to_u64) else {
            continue;
        };
        if e <= d && (e % p as u64) as usize == r {
            terms.push((e, c.clone()));
        }
    }
    SparsePoly::new(f.clone(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{Fp, Ring};

    #[test]
    fn recovers_two_terms() {
        let f = Fp::new(101).unwrap();
        let q = SparsePoly::from_i64(f.clone(), &[(5, 3), (2, 2)]);
        let q_p = q.reduce(5);
        let dq_p = q.derivative().reduce(5);
        let c = |v: &[u64]| v.iter().map(|&x| f.from_u64(x)).collect::<Vec<_>>();
        assert_eq!(q_p.coeffs(), c(&[3, 0, 2, 0, 0]).as_slice());
        assert_eq!(dq_p.coeffs(), c(&[0, 4, 0, 0, 15]).as_slice());
        assert_eq!(dlift(&q_p, &dq_p, 100), q);
    }

    #[test]
    fn zero_input() {
        let f = Fp::new(101).unwrap();
        let z = CyclicPoly::new(f.clone(), 7, vec![]);
        assert!(dlift(&z, &z, 100).is_zero());
    }

    #[test]
    fn collisions_do_not_produce_true_terms_blindly() {
        let f = Fp::new(101).unwrap();
        let q = SparsePoly::from_i64(f.clone(), &[(5, 1), (2, 1)]);
        let lifted = dlift(&q.reduce(3), &q.derivative().reduce(3), 100);
        // 2X^2 at residue 2 with derivative 7X: 7/2 is not an integer <= 100 in F_101
        // unless it happens to be; either way it is not the true polynomial.
        assert_ne!(lifted, q);
    }

    #[test]
    fn degree_bound_filters() {
        let f = Fp::new(101).unwrap();
        let q = SparsePoly::from_i64(f.clone(), &[(50, 4)]);
        assert_eq!(dlift(&q.reduce(7), &q.derivative().reduce(7), 100), q);
        assert!(dlift(&q.reduce(7), &q.derivative().reduce(7), 49).is_zero());
    }
}
