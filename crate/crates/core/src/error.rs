//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by field construction, sequence generation, and the
/// complexity engines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("gcd({a}, {m}) != 1, multiplicative order undefined")]
    NotCoprime { a: u64, m: u64 },
    #[error("field size p^r = {q} exceeds the 2^26 cap")]
    FieldTooLarge { q: u64 },
    #[error("modulus must be monic of degree {r} with coefficients below p")]
    MalformedModulus { r: u32 },
    #[error("modulus is reducible over F_p")]
    ReducibleModulus,
    #[error("basis elements are linearly dependent over F_p")]
    DependentBasis,
    #[error("element index {index} out of range for a field of {q} elements")]
    IndexOutOfRange { index: u64, q: u64 },
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("discrete log of zero is undefined")]
    ZeroLog,
    #[error("element {0} does not generate the multiplicative group")]
    NotGenerator(u64),
    #[error("gamma selection requires a quadratic extension (r = 2), got r = {0}")]
    GammaRequiresDegreeTwo(u32),
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("period {period} is not p^2 for p = {p}")]
    PeriodNotPSquared { period: usize, p: u64 },
    #[error("full enumeration handles periods up to {cap}, got {period}")]
    PeriodOverEnumCap { period: usize, cap: usize },
    #[error("k = {k} exceeds the period {period}")]
    KOutOfRange { k: usize, period: usize },
    #[error("hypotheses not satisfied: {0}")]
    HypothesesUnmet(String),
    #[error("invalid sequence spec: {0}")]
    InvalidSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
