//! Randomized exact division and divisibility testing for sparse
//! univariate polynomials over finite fields and the integers.

pub mod bench;
pub mod cli;
pub mod cyclic;
pub mod dense;
pub mod divtest;
pub mod error;
pub mod ff;
pub mod gen;
pub mod io;
pub mod interp_div;
pub mod ntt;
pub mod primes;
pub mod probe;
pub mod sparse_poly;
pub mod zdiv;

pub use error::{Error, Result};
