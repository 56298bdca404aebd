use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameters out of range: n = {n}, k = {k} ({reason})")]
    OutOfRange {
        n: u64,
        k: u64,
        reason: &'static str,
    },

    #[error("multiplier a_{index} = {value} is not {k}-smooth")]
    NotSmooth { index: usize, value: BigInt, k: u64 },

    #[error("multiplier a_{index} is zero")]
    ZeroMultiplier { index: usize },

    #[error("expected {expected} multipliers, got {got}")]
    MultiplierCount { expected: usize, got: usize },

    #[error("valuation of zero is infinite")]
    ZeroValuation,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("delta(n) needs two primes below n, got n = {0}")]
    DeltaUndefined(u64),

    #[error("prime table covers primes up to {limit}, but {needed} is required")]
    TableTooSmall { limit: u64, needed: u64 },

    #[error("{base} exceeds the factorization bound {bound}")]
    FactorBound { base: u128, bound: u128 },

    #[error("Newton polygon endpoint coefficient at x^{0} is zero")]
    ZeroEndpoint(usize),

    #[error("Newton polygon needs at least two finite points")]
    TooFewPoints,

    #[error("leading coefficient is divisible by {0}")]
    LeadingCoefficientDivisible(u64),

    #[error("reduction modulo {0} is not squarefree")]
    NotSquarefree(u64),

    #[error("brute-force factorization limited to degree <= 8 and p <= 7 (got degree {degree}, p = {p})")]
    BruteForceLimits { degree: usize, p: u64 },

    #[error("invalid Thue parameters: {0}")]
    ThueParams(String),

    #[error("invalid polynomial text {0:?}")]
    Parse(String),

    #[error("{0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
