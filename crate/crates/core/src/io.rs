//! Plain-text polynomial files.
//!
//! ```text
//! # comment
//! Fq 7          (or: ZZ)
//! 1 5
//! -1 0
//! ```
//!
//! Every line after the header is `<coefficient> <exponent>`. Duplicate
//! exponents are summed and zero terms dropped.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ff::{biguint_to_u64, Fp, FpBig, Integers, PrimeField, Ring};
use crate::sparse_poly::{SparsePoly, MAX_EXPONENT};

/// A polynomial over whichever ring its file names.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPoly {
    Fp(SparsePoly<Fp>),
    FpBig(SparsePoly<FpBig>),
    Z(SparsePoly<Integers>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Fq(BigUint),
    Z,
}

impl RingSpec {
    /// `Fq:<q>`, `Fq <q>` or `ZZ`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "ZZ" {
            return Ok(RingSpec::Z);
        }
        let rest = s
            .strip_prefix("Fq")
            .map(|r| r.trim_start_matches([':', ' ', '\t']))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown ring `{s}`")))?;
        let q = rest.parse::<BigUint>().map_err(|e| Error::InvalidArgument(format!("bad modulus `{rest}`: {e}")))?;
        Ok(RingSpec::Fq(q))
    }

    pub fn header(&self) -> String {
        match self {
            RingSpec::Fq(q) => format!("Fq {q}"),
            RingSpec::Z => "ZZ".to_string(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            RingSpec::Fq(q) => format!("Fq:{q}"),
            RingSpec::Z => "ZZ".to_string(),
        }
    }
}

impl AnyPoly {
    pub fn ring_spec(&self) -> RingSpec {
        match self {
            AnyPoly::Fp(p) => RingSpec::Fq(p.ring().modulus()),
            AnyPoly::FpBig(p) => RingSpec::Fq(p.ring().modulus()),
            AnyPoly::Z(_) => RingSpec::Z,
        }
    }

    pub fn num_terms(&self) -> usize {
        match self {
            AnyPoly::Fp(p) => p.num_terms(),
            AnyPoly::FpBig(p) => p.num_terms(),
            AnyPoly::Z(p) => p.num_terms(),
        }
    }
}

/// A field element carrier for a prime modulus: word-sized or big.
pub enum PrimeRing {
    Fp(Fp),
    FpBig(FpBig),
}

/// Checks primality; moduli of 63 bits or more get 64 Miller-Rabin rounds
/// with a fixed seed so that parsing stays deterministic.
pub fn prime_ring(q: &BigUint) -> Result<PrimeRing> {
    match biguint_to_u64(q) {
        Some(small) if small < 1 << 63 => Ok(PrimeRing::Fp(Fp::new(small)?)),
        _ => Ok(PrimeRing::FpBig(FpBig::new(q.clone(), &mut ChaCha8Rng::seed_from_u64(0))?)),
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse(text: &str) -> Result<AnyPoly> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing ring header"))?;
    let spec = RingSpec::parse(header).map_err(|e| parse_err(hline, e.to_string()))?;
    let mut raw = Vec::new();
    for (n, line) in lines {
        let mut it = line.split_whitespace();
        let (Some(c), Some(e), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err(n, "expected `<coefficient> <exponent>`"));
        };
        let c: BigInt = c.parse().map_err(|_| parse_err(n, format!("bad coefficient `{c}`")))?;
        let e: u64 = e.parse().map_err(|_| parse_err(n, format!("bad exponent `{e}`")))?;
        if e > MAX_EXPONENT {
            return Err(parse_err(n, format!("exponent {e} exceeds 2^63 - 1")));
        }
        raw.push((e, c));
    }
    Ok(match spec {
        RingSpec::Z => AnyPoly::Z(SparsePoly::new(Integers, raw)),
        RingSpec::Fq(q) => match prime_ring(&q).map_err(|e| parse_err(hline, e.to_string()))? {
            PrimeRing::Fp(f) => AnyPoly::Fp(reduce(&f, raw)),
            PrimeRing::FpBig(f) => AnyPoly::FpBig(reduce(&f, raw)),
        },
    })
}

fn reduce<P: PrimeField>(field: &P, raw: Vec<(u64, BigInt)>) -> SparsePoly<P> {
    let terms = raw.into_iter().map(|(e, c)| (e, field.from_bigint(&c))).collect();
    SparsePoly::new(field.clone(), terms)
}

fn emit_terms<R: Ring>(header: &str, p: &SparsePoly<R>, coeff: impl Fn(&R::Elem) -> String) -> String {
    let mut out = String::with_capacity(16 * (p.num_terms() + 1));
    out.push_str(header);
    out.push('\n');
    for (e, c) in p.terms() {
        writeln!(out, "{} {e}", coeff(c)).unwrap();
    }
    out
}

/// Canonical text: header, then terms by ascending exponent, field
/// coefficients in `[0, q)`.
pub fn emit(p: &AnyPoly) -> String {
    let header = p.ring_spec().header();
    match p {
        AnyPoly::Fp(p) => emit_terms(&header, p, |c| p.ring().to_biguint(c).to_string()),
        AnyPoly::FpBig(p) => emit_terms(&header, p, |c| c.to_string()),
        AnyPoly::Z(p) => emit_terms(&header, p, |c| c.to_string()),
    }
}

/// Wraps a field polynomial for emission.
pub trait IntoAny {
    fn into_any(self) -> AnyPoly;
}

impl IntoAny for SparsePoly<Fp> {
    fn into_any(self) -> AnyPoly {
        AnyPoly::Fp(self)
    }
}

impl IntoAny for SparsePoly<FpBig> {
    fn into_any(self) -> AnyPoly {
        AnyPoly::FpBig(self)
    }
}

impl IntoAny for SparsePoly<Integers> {
    fn into_any(self) -> AnyPoly {
        AnyPoly::Z(self)
    }
}
