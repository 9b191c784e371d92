use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("exponent arithmetic overflowed the 63-bit exponent range")]
    ExponentOverflow,
    #[error("term budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("integer division step is not exact")]
    NonExactIntegerStep,
    #[error("polynomial is not invertible modulo X^{0}-1")]
    NotInvertible(usize),
    #[error("dilated divisor is not coprime with X^{0}-1")]
    NotCoprime(usize),
    #[error("randomized algorithm failed: {0}")]
    Failure(String),
    #[error("divisor vanished modulo {0}")]
    DivisorVanishedModQ(BigUint),
    #[error("operands live in different coefficient rings")]
    RingMismatch,
    #[error("divisor does not divide dividend")]
    NotDivisible,
    #[error("gave up: {0}")]
    GaveUp(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
