//! Integer convolution via number-theoretic transforms over up to three
//! 62-bit primes, recombined with Garner's algorithm and reduced mod `q`.

use std::sync::{Arc, OnceLock, RwLock};

use crate::ff::{ExtElem, ExtField, Fp, Ring};
use crate::primes::is_prime_u64;

/// Below this operand length the schoolbook/Karatsuba routines win.
pub const NTT_THRESHOLD: usize = 48;

const TWO_ADICITY: u32 = 32;

struct NttPrime {
    p: u64,
    field: Fp,
    /// Primitive `2^TWO_ADICITY`-th root of unity, canonical.
    root: u64,
    /// Forward and inverse twiddles for the largest size seen so far; the
    /// layout makes every prefix valid for smaller sizes.
    tables: RwLock<Arc<(Vec<u64>, Vec<u64>)>>,
}

impl NttPrime {
    fn twiddles(&self, n: usize) -> Arc<(Vec<u64>, Vec<u64>)> {
        let cur = self.tables.read().unwrap().clone();
        if cur.0.len() >= n {
            return cur;
        }
        let mut w = self.tables.write().unwrap();
        if w.0.len() < n {
            *w = Arc::new((root_table(self, n, false), root_table(self, n, true)));
        }
        w.clone()
    }
}

fn ntt_primes() -> &'static [NttPrime] {
    static PRIMES: OnceLock<Vec<NttPrime>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::new();
        let mut c: u64 = (1u64 << (62 - TWO_ADICITY)) - 1;
        while out.len() < 3 {
            let p = (c << TWO_ADICITY) + 1;
            if is_prime_u64(p) {
                let field = Fp::new(p).unwrap();
                let g = primitive_root(&field, p, c);
                let root = pow_canon(&field, g, c);
                out.push(NttPrime { p, field, root, tables: RwLock::new(Arc::new((Vec::new(), Vec::new()))) });
            }
            c -= 2;
        }
        out
    })
}

fn pow_canon(f: &Fp, base: u64, mut e: u64) -> u64 {
    let mut b = f.from_canonical(base);
    let mut acc = f.one();
    while e > 0 {
        if e & 1 == 1 {
            acc = f.mul_raw(acc, b);
        }
        b = f.mul_raw(b, b);
        e >>= 1;
    }
    f.to_canonical(acc)
}

fn primitive_root(f: &Fp, p: u64, odd_part: u64) -> u64 {
    let mut factors = vec![2u64];
    let mut c = odd_part;
    let mut d = 3u64;
    while d * d <= c {
        if c % d == 0 {
            factors.push(d);
            while c % d == 0 {
                c /= d;
            }
        }
        d += 2;
    }
    if c > 1 {
        factors.push(c);
    }
    (2..)
        .find(|&g| factors.iter().all(|&r| pow_canon(f, g, (p - 1) / r) != 1))
        .unwrap()
}

// roots[half + j] = w_len^j with len = 2*half, all in Montgomery form
fn root_table(pr: &NttPrime, n: usize, inverse: bool) -> Vec<u64> {
    let f = &pr.field;
    let mut roots = vec![0u64; n.max(2)];
    let log_n = n.trailing_zeros();
    let mut half = 1usize;
    let mut k = 1u32;
    while k <= log_n {
        let mut w = pow_canon(f, pr.root, 1u64 << (TWO_ADICITY - k));
        if inverse {
            w = pow_canon(f, w, pr.p - 2);
        }
        let wm = f.from_canonical(w);
        let mut cur = f.one();
        for j in 0..half {
            roots[half + j] = cur;
            cur = f.mul_raw(cur, wm);
        }
        half <<= 1;
        k += 1;
    }
    roots
}

fn transform(f: &Fp, a: &mut [u64], roots: &[u64]) {
    let n = a.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut half = 1usize;
    while half < n {
        let tw = &roots[half..2 * half];
        for chunk in a.chunks_mut(2 * half) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((x, y), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
                let u = *x;
                let v = f.mul_raw(*y, w);
                *x = f.add_raw(u, v);
                *y = f.sub_raw(u, v);
            }
        }
        half <<= 1;
    }
}

fn convolve_one(pr: &NttPrime, a: &[u64], b: &[u64], out_len: usize) -> Vec<u64> {
    let f = &pr.field;
    let n = out_len.next_power_of_two();
    let mut fa = vec![0u64; n];
    let mut fb = vec![0u64; n];
    for (d, &x) in fa.iter_mut().zip(a) {
        *d = f.from_canonical(x % pr.p);
    }
    for (d, &x) in fb.iter_mut().zip(b) {
        *d = f.from_canonical(x % pr.p);
    }
    let tw = pr.twiddles(n);
    transform(f, &mut fa, &tw.0);
    transform(f, &mut fb, &tw.0);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = f.mul_raw(*x, *y);
    }
    transform(f, &mut fa, &tw.1);
    let n_inv = f.from_canonical(pow_canon(f, (n as u64) % pr.p, pr.p - 2));
    fa.truncate(out_len);
    for x in fa.iter_mut() {
        *x = f.to_canonical(f.mul_raw(*x, n_inv));
    }
    fa
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let mut e = m - 2;
    let mut b = a % m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Product of two vectors with entries in `[0, q)`, reduced mod `q`.
///
/// Exact as long as the integer convolution stays below the product of the
/// transform primes, which holds for `q < 2^63` and lengths below `2^32`.
pub fn mul_mod(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let primes = ntt_primes();
    let terms = a.len().min(b.len()) as f64;
    let bound_bits = terms.log2() + 2.0 * ((q - 1).max(1) as f64).log2() + 1.0;
    let k = if bound_bits < 61.0 {
        1
    } else if bound_bits < 123.0 {
        2
    } else {
        3
    };
    let residues: Vec<Vec<u64>> = primes[..k].iter().map(|pr| convolve_one(pr, a, b, out_len)).collect();
    match k {
        1 => residues[0].iter().map(|&x| x % q).collect(),
        2 => {
            let (m0, m1) = (primes[0].p, primes[1].p);
            let c01 = inv_mod(m0 % m1, m1);
            let m0q = m0 % q;
            (0..out_len)
                .map(|i| {
                    let r0 = residues[0][i];
                    let r1 = residues[1][i];
                    let v1 = mulmod((r1 + m1 - r0 % m1) % m1, c01, m1);
                    ((r0 % q) as u128 + m0q as u128 * v1 as u128) % q as u128
                })
                .map(|x| x as u64)
                .collect()
        }
        _ => {
            let (m0, m1, m2) = (primes[0].p, primes[1].p, primes[2].p);
            let c01 = inv_mod(m0 % m1, m1);
            let c012 = inv_mod(mulmod(m0, m1, m2), m2);
            let m0q = m0 % q;
            let m01q = mulmod(m0 % q, m1 % q, q);
            (0..out_len)
                .map(|i| {
                    let (r0, r1, r2) = (residues[0][i], residues[1][i], residues[2][i]);
                    let v1 = mulmod((r1 + m1 - r0 % m1) % m1, c01, m1);
                    // x = r0 + m0 v1 + m0 m1 v2
                    let t = (r0 % m2 + mulmod(m0 % m2, v1, m2)) % m2;
                    let v2 = mulmod((r2 + m2 - t) % m2, c012, m2);
                    let acc = (r0 % q) as u128 + mulmod(m0q, v1 % q, q) as u128 + mulmod(m01q, v2 % q, q) as u128;
                    (acc % q as u128) as u64
                })
                .collect()
        }
    }
}

/// Dense product over `F_{q^s}` by Kronecker substitution: each extension
/// element is laid out with stride `2s - 1` so the inner products never
/// overlap, then every block is reduced by the extension modulus.
pub fn kronecker_ext_mul(ext: &ExtField<Fp>, a: &[ExtElem<Fp>], b: &[ExtElem<Fp>]) -> Vec<ExtElem<Fp>> {
    let base = ext.base();
    let s = ext.degree();
    let stride = 2 * s - 1;
    let flatten = |v: &[ExtElem<Fp>]| {
        let mut out = vec![0u64; v.len() * stride];
        for (i, e) in v.iter().enumerate() {
            for (j, &c) in e.iter().enumerate() {
                out[i * stride + j] = base.to_canonical(c);
            }
        }
        out
    };
    let fa = flatten(a);
    let fb = flatten(b);
    let prod = mul_mod(&fa, &fb, base.q());
    let n = a.len() + b.len() - 1;
    if !base.is_montgomery() {
        let q = base.q();
        let modulus: Vec<u64> = ext.modulus().iter().map(|&c| base.to_canonical(c)).collect();
        return (0..n)
            .map(|k| {
                let start = k * stride;
                let end = (start + stride).min(prod.len());
                let mut block = vec![0u64; stride];
                block[..end - start].copy_from_slice(&prod[start..end]);
                for d in (s..stride).rev() {
                    let c = block[d];
                    block[d] = 0;
                    for (t, &m) in modulus[..s].iter().enumerate() {
                        let sub = mulmod(c, m, q);
                        let idx = d - s + t;
                        block[idx] = (block[idx] + q - sub) % q;
                    }
                }
                block[..s].iter().map(|&c| base.from_canonical(c)).collect()
            })
            .collect();
    }
    let r2 = base.r2() as u128;
    let mut block = vec![0u128; stride];
    (0..n)
        .map(|k| {
            let start = k * stride;
            let end = (start + stride).min(prod.len());
            block.fill(0);
            for (d, &c) in block.iter_mut().zip(&prod[start..end]) {
                *d = c as u128 * r2;
            }
            base.reduce_ext_block(ext.modulus(), &mut block)
        })
        .collect()
}
