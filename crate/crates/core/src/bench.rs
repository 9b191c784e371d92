//! Timing grid for exact division over prime fields.

use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigUint;
use rand::Rng;

use crate::error::Result;
use crate::ff::{biguint_to_u64, Fp, PrimeField};
use crate::gen::field_instance;
use crate::interp_div::{exact_division, DivOptions};
use crate::primes::random_probable_prime;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub t: usize,
    pub log_d: u32,
    pub ring: String,
    pub algorithm: &'static str,
    pub wall_ns: u128,
    pub verified: bool,
}

pub const CSV_HEADER: &str = "T,logD,ring,algorithm,wall_ns,verified";

impl BenchRow {
    pub fn csv(&self) -> String {
        format!("{},{},{},{},{},{}", self.t, self.log_d, self.ring, self.algorithm, self.wall_ns, self.verified)
    }
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(out, "{}", r.csv()).unwrap();
    }
    out
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub terms: Vec<usize>,
    pub log_degrees: Vec<u32>,
    /// The field is `F_q` for a random prime `q` of this many bits.
    pub q_bits: u32,
    /// Terms of the divisor; the quotient has `T` terms.
    pub g_terms: usize,
    pub reps: usize,
    pub epsilon: f64,
    pub opts: DivOptions,
}

/// Random prime with exactly `bits` bits, at most 63.
pub fn random_prime_bits<G: Rng + ?Sized>(bits: u32, rng: &mut G) -> Result<u64> {
    let lo = BigUint::from(1u64) << (bits.clamp(3, 63) - 1);
    let q = random_probable_prime(&lo, 1e-12, rng)?;
    Ok(biguint_to_u64(&q).expect("below 2^63"))
}

/// One timed division of `F = G Q` with `#Q = t`, `deg G = deg Q = D/2`.
pub fn time_instance<G: Rng + ?Sized>(
    field: &Fp,
    t: usize,
    g_terms: usize,
    log_d: u32,
    epsilon: f64,
    opts: &DivOptions,
    rng: &mut G,
) -> Result<BenchRow> {
    let half = 1u64 << (log_d - 1);
    let inst = field_instance(field, t, half, g_terms, half, rng)?;
    let start = Instant::now();
    let res = exact_division(&inst.f, &inst.g, epsilon, rng, opts);
    let wall_ns = start.elapsed().as_nanos();
    let large = field.q() > 1u64 << log_d;
    Ok(BenchRow {
        t,
        log_d,
        ring: format!("Fq:{}", field.modulus()),
        algorithm: if large { "large-char" } else { "small-char" },
        wall_ns,
        verified: res.map(|q| q == inst.q).unwrap_or(false),
    })
}

pub fn run<G: Rng + ?Sized>(cfg: &BenchConfig, rng: &mut G) -> Result<Vec<BenchRow>> {
    let field = Fp::new(random_prime_bits(cfg.q_bits, rng)?)?;
    let mut rows = Vec::new();
    for &log_d in &cfg.log_degrees {
        for &t in &cfg.terms {
            for _ in 0..cfg.reps {
                rows.push(time_instance(&field, t, cfg.g_terms, log_d, cfg.epsilon, &cfg.opts, rng)?);
            }
        }
    }
    Ok(rows)
}
