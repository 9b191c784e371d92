//! Dense univariate polynomials as little-endian coefficient vectors.
//!
//! These are the workhorse for cyclic arithmetic and extension-field
//! construction; the sparse representation lives in [`crate::sparse_poly`].

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ff::{Field, Ring};

pub fn trim<R: Ring>(r: &R, v: &mut Vec<R::Elem>) {
    while v.last().is_some_and(|c| r.is_zero(c)) {
        v.pop();
    }
}

pub fn trimmed<R: Ring>(r: &R, mut v: Vec<R::Elem>) -> Vec<R::Elem> {
    trim(r, &mut v);
    v
}

pub fn add<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, x) in out.iter_mut().zip(short) {
        r.add_assign(o, x);
    }
    trimmed(r, out)
}

pub fn sub<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), r.zero());
    }
    for (o, x) in out.iter_mut().zip(b) {
        r.sub_assign(o, x);
    }
    trimmed(r, out)
}

pub fn scale<R: Ring>(r: &R, a: &[R::Elem], c: &R::Elem) -> Vec<R::Elem> {
    trimmed(r, a.iter().map(|x| r.mul(x, c)).collect())
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    trimmed(f, f.poly_mul(a, b))
}

/// Classical long division; `b` must be trimmed and nonzero.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Result<(Vec<F::Elem>, Vec<F::Elem>)> {
    let db = match b.len() {
        0 => return Err(Error::DivisionByZero),
        n => n - 1,
    };
    let mut r = a.to_vec();
    trim(f, &mut r);
    if r.len() <= db {
        return Ok((Vec::new(), r));
    }
    let lc_inv = f.inv(&b[db])?;
    let support: Vec<(usize, &F::Elem)> = b[..db].iter().enumerate().filter(|(_, c)| !f.is_zero(c)).collect();
    let mut q = vec![f.zero(); r.len() - db];
    for d in (db..r.len()).rev() {
        if f.is_zero(&r[d]) {
            continue;
        }
        let c = f.mul(&r[d], &lc_inv);
        r[d] = f.zero();
        for &(k, bk) in &support {
            let t = f.mul(&c, bk);
            f.sub_assign(&mut r[d - db + k], &t);
        }
        q[d - db] = c;
    }
    r.truncate(db);
    trim(f, &mut r);
    trim(f, &mut q);
    Ok((q, r))
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Result<Vec<F::Elem>> {
    Ok(divrem(f, a, b)?.1)
}

pub fn make_monic<F: Field>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => scale(f, a, &f.inv(lc).expect("trimmed polynomial has nonzero leading coefficient")),
    }
}

/// Monic gcd.
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = trimmed(f, a.to_vec());
    let mut y = trimmed(f, b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y).unwrap();
        x = y;
        y = r;
    }
    make_monic(f, &x)
}

pub fn mulmod<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
    rem(f, &mul(f, a, b), m).unwrap()
}

pub fn powmod<F: Field>(f: &F, a: &[F::Elem], e: &BigUint, m: &[F::Elem]) -> Vec<F::Elem> {
    let mut acc = vec![f.one()];
    let base = rem(f, a, m).unwrap();
    for i in (0..e.bits()).rev() {
        acc = mulmod(f, &acc, &acc, m);
        if e.bit(i) {
            acc = mulmod(f, &acc, &base, m);
        }
    }
    rem(f, &acc, m).unwrap()
}

/// Inverse of `a` modulo `m`, `None` when the two are not coprime.
pub fn inverse_mod<F: Field>(f: &F, a: &[F::Elem], m: &[F::Elem]) -> Option<Vec<F::Elem>> {
    inverse_mod_tuned(f, a, m, HGCD_THRESHOLD)
}

/// Moduli at least this long go through the half-gcd.
const HGCD_THRESHOLD: usize = 192;
/// Half-gcd subproblems below this degree run plain Euclid steps.
const HGCD_BASE: usize = 64;

fn inverse_mod_tuned<F: Field>(f: &F, a: &[F::Elem], m: &[F::Elem], threshold: usize) -> Option<Vec<F::Elem>> {
    let m = trimmed(f, m.to_vec());
    let a = rem(f, a, &m).ok()?;
    if a.is_empty() {
        return None;
    }
    let (g, v) = gcd_with_cofactor(f, m.clone(), a, threshold);
    if g.len() != 1 {
        return None;
    }
    let c = f.inv(&g[0]).ok()?;
    rem(f, &scale(f, &v, &c), &m).ok()
}

/// 2x2 polynomial matrix acting on column vectors.
type Mat<E> = [[Vec<E>; 2]; 2];

fn identity<F: Field>(f: &F) -> Mat<F::Elem> {
    [[vec![f.one()], Vec::new()], [Vec::new(), vec![f.one()]]]
}

fn mat_mul<F: Field>(f: &F, x: &Mat<F::Elem>, y: &Mat<F::Elem>) -> Mat<F::Elem> {
    let entry = |i: usize, j: usize| add(f, &mul(f, &x[i][0], &y[0][j]), &mul(f, &x[i][1], &y[1][j]));
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

fn apply<F: Field>(f: &F, x: &Mat<F::Elem>, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let row = |i: usize| add(f, &mul(f, &x[i][0], a), &mul(f, &x[i][1], b));
    (row(0), row(1))
}

/// The Euclid step `(a, b) -> (b, a - q b)`.
fn step<F: Field>(f: &F, q: Vec<F::Elem>) -> Mat<F::Elem> {
    [[Vec::new(), vec![f.one()]], [vec![f.one()], sub(f, &[], &q)]]
}

/// For `deg a > deg b`, a product of Euclid steps taking `(a, b)` to a
/// remainder pair straddling degree `ceil(deg a / 2)`.
fn hgcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Mat<F::Elem> {
    let m = a.len() / 2;
    if b.len() <= m {
        return identity(f);
    }
    if a.len() <= HGCD_BASE {
        let mut mat = identity(f);
        let (mut x, mut y) = (a.to_vec(), b.to_vec());
        while y.len() > m {
            let (q, r) = divrem(f, &x, &y).unwrap();
            mat = mat_mul(f, &step(f, q), &mat);
            x = std::mem::replace(&mut y, r);
        }
        return mat;
    }
    let r = hgcd(f, &a[m..], &b[m..]);
    let (a1, b1) = apply(f, &r, a, b);
    if b1.len() <= m {
        return r;
    }
    let (q, rr) = divrem(f, &a1, &b1).unwrap();
    let r = mat_mul(f, &step(f, q), &r);
    if rr.len() <= m {
        return r;
    }
    let k = (2 * m).saturating_sub(b1.len() - 1).min(b1.len() - 1);
    let s = hgcd(f, &b1[k..], if rr.len() > k { &rr[k..] } else { &[] });
    mat_mul(f, &s, &r)
}

/// Returns `(g, v)` with `g = gcd(a, b) = u a + v b` for some `u`; needs
/// `deg a > deg b`.
fn gcd_with_cofactor<F: Field>(f: &F, a: Vec<F::Elem>, b: Vec<F::Elem>, threshold: usize) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let (mut x, mut y) = (a, b);
    // cofactors of b in x and y
    let (mut v0, mut v1) = (Vec::new(), vec![f.one()]);
    while !y.is_empty() {
        if x.len() >= threshold {
            let r = hgcd(f, &x, &y);
            (x, y) = apply(f, &r, &x, &y);
            (v0, v1) = apply(f, &r, &v0, &v1);
            if y.is_empty() {
                break;
            }
        }
        let (q, r) = divrem(f, &x, &y).unwrap();
        let v2 = sub(f, &v0, &mul(f, &q, &v1));
        x = std::mem::replace(&mut y, r);
        v0 = std::mem::replace(&mut v1, v2);
    }
    (x, v0)
}

pub fn eval<R: Ring>(r: &R, a: &[R::Elem], x: &R::Elem) -> R::Elem {
    a.iter().rev().fold(r.zero(), |acc, c| r.add(&r.mul(&acc, x), c))
}

pub fn derivative<R: Ring>(r: &R, a: &[R::Elem]) -> Vec<R::Elem> {
    let out = a.iter().enumerate().skip(1).map(|(i, c)| r.mul_u64(c, i as u64)).collect();
    trimmed(r, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Fp;

    fn fp(q: u64, v: &[u64]) -> (Fp, Vec<u64>) {
        let f = Fp::new(q).unwrap();
        let w = v.iter().map(|&x| f.from_u64(x)).collect();
        (f, w)
    }

    #[test]
    fn divrem_reconstructs() {
        let (f, a) = fp(7, &[6, 0, 0, 0, 0, 1]);
        let b: Vec<u64> = [6u64, 1].iter().map(|&x| f.from_u64(x)).collect();
        let (q, r) = divrem(&f, &a, &b).unwrap();
        assert!(r.is_empty());
        assert_eq!(q, vec![f.one(); 5]);
    }

    #[test]
    fn inverse_mod_small() {
        let (f, m) = fp(7, &[6, 0, 0, 0, 0, 1]);
        let x = vec![f.zero(), f.one()];
        let inv = inverse_mod(&f, &x, &m).unwrap();
        let mut expect = vec![f.zero(); 5];
        expect[4] = f.one();
        assert_eq!(inv, expect);
        let xm1 = vec![f.from_u64(6), f.one()];
        assert!(inverse_mod(&f, &xm1, &m).is_none());
    }

    fn euclid_inverse<F: Field>(f: &F, a: &[F::Elem], m: &[F::Elem]) -> Option<Vec<F::Elem>> {
        inverse_mod_tuned(f, a, m, usize::MAX)
    }

    #[test]
    fn half_gcd_inverse_modulo_cyclic() {
        use rand::SeedableRng;
        let f = Fp::new(2_130_944_923).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        for p in [193usize, 509, 1031, 2053] {
            let mut m = vec![f.zero(); p + 1];
            m[0] = f.neg(&f.one());
            m[p] = f.one();
            // sparse and dense inputs
            for terms in [4, p] {
                let mut a = vec![f.zero(); p];
                for _ in 0..terms {
                    a[rand::Rng::gen_range(&mut rng, 0..p)] = f.random(&mut rng);
                }
                let fast = inverse_mod(&f, &a, &m);
                assert_eq!(fast, euclid_inverse(&f, &a, &m));
                if let Some(inv) = fast {
                    assert_eq!(rem(&f, &mul(&f, &a, &inv), &m).unwrap(), vec![f.one()]);
                }
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn half_gcd_matches_euclid(
            a in proptest::collection::vec(0u64..5, 1..300),
            m in proptest::collection::vec(0u64..5, 2..300),
            threshold in 2usize..40,
        ) {
            let f = Fp::new(5).unwrap();
            let a: Vec<u64> = a.iter().map(|&x| f.from_u64(x)).collect();
            let mut m: Vec<u64> = m.iter().map(|&x| f.from_u64(x)).collect();
            *m.last_mut().unwrap() = f.one();
            proptest::prop_assert_eq!(inverse_mod_tuned(&f, &a, &m, threshold), euclid_inverse(&f, &a, &m));
        }
    }
}
