use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::primes::primes_between;

/// Which parameter formulas drive the interpolation loops.
///
/// `Proven` evaluates the worst-case formulas exactly. `Practical` keeps the
/// failure budget, the number of draws and the extension degree, but sizes
/// the prime pools from the sparsity alone: collisions are governed by
/// `T / p`, so primes around a few times `T` suffice on typical inputs, and
/// every result is still gated by product verification.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ParamProfile {
    Proven,
    #[default]
    Practical,
}

impl FromStr for ParamProfile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "proven" => Ok(ParamProfile::Proven),
            "practical" => Ok(ParamProfile::Practical),
            other => Err(Error::InvalidArgument(format!("unknown profile {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LargeCharParams {
    pub t: usize,
    pub d: u64,
    pub epsilon: f64,
    /// Primes drawn per iteration.
    pub k: usize,
    /// Size of the prime pool (first `n` primes).
    pub n: usize,
    /// Extension degree.
    pub s: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmallCharParams {
    pub t: usize,
    pub d: u64,
    pub epsilon: f64,
    pub mu: f64,
    pub lambda: u64,
    pub gamma: usize,
    pub m: usize,
    pub s: usize,
}

pub(crate) fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64_digits().first().copied().unwrap_or(0) as f64).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64_digits()[0] as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ceil(log_q(x))` given `ln x`, at least 1.
fn ext_degree(ln_target: f64, q: &BigUint) -> usize {
    let ratio = ln_target / ln_biguint(q);
    // guard against ratio landing a hair above an integer through rounding
    let s = (ratio - 1e-9).ceil();
    if s < 1.0 {
        1
    } else {
        s as usize
    }
}

fn ceil_log2_usize(t: usize) -> usize {
    (t.max(1) as f64).log2().ceil() as usize
}

fn check_eps(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("failure probability must lie in (0,1), got {epsilon}")))
    }
}

/// Parameters for the large-characteristic interpolation loop.
pub fn params_large_char(t: usize, d: u64, q: &BigUint, epsilon: f64, profile: ParamProfile) -> Result<LargeCharParams> {
    check_eps(epsilon)?;
    let t = t.max(1);
    let df = d.max(1) as f64;
    let k = ((2.0 / epsilon) * (t as f64).log2()).log2().ceil().max(1.0) as usize;
    let n = match profile {
        ParamProfile::Proven => ((12.0 * (t as f64 - 1.0) * df.log2()).ceil() as usize).max(1),
        ParamProfile::Practical => primes_between(2, (4 * t as u64).max(64)).len(),
    };
    let ln_target = (1930.0 / epsilon).ln() + 4.0 * df.ln();
    let s = ext_degree(ln_target, q);
    Ok(LargeCharParams { t, d, epsilon, k, n, s })
}

/// Parameters for the small-characteristic (CRT) interpolation loop.
pub fn params_small_char(t: usize, d: u64, q: &BigUint, epsilon: f64, profile: ParamProfile) -> Result<SmallCharParams> {
    check_eps(epsilon)?;
    let t = t.max(1);
    let df = d.max(2) as f64;
    let mu = epsilon / (2.0 * ceil_log2_usize(t).max(1) as f64);
    let (lambda, gamma, m) = match profile {
        ParamProfile::Proven => {
            let lambda = ((40.0 / 3.0 * (t as f64 - 1.0) * df.ln()).ceil() as u64).max(21);
            let log_l_d = df.ln() / (lambda as f64).ln();
            let gamma = (8.0 * log_l_d).max(8.0 * (2.0 / mu).ln()).ceil() as usize;
            let m = ((1.0 / mu).log2() + 2.0 * (t as f64 * (1.0 + 0.5 * log_l_d.ceil())).log2()).ceil() as usize;
            (lambda, gamma.max(1), m.max(1))
        }
        ParamProfile::Practical => {
            let lambda = (3 * (t as u64).saturating_sub(1)).max(21);
            let log_l_d = (df.ln() / (lambda as f64).ln()).ceil() as usize;
            (lambda, 2 * log_l_d.max(1) + 1, 3)
        }
    };
    let ln_target = (2.0 * lambda as f64 * gamma as f64 / mu * m as f64 * df).ln();
    let s = ext_degree(ln_target, q);
    Ok(SmallCharParams { t, d, epsilon, mu, lambda, gamma, m, s })
}
