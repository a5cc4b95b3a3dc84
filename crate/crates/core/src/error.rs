use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("absolute degree {degree} exceeds the arithmetic limit {limit}")]
    DegreeOverflow { degree: usize, limit: usize },

    #[error("field of size {size} exceeds the cap {cap} for {what}")]
    CapExceeded { what: &'static str, size: String, cap: String },

    #[error("{d} does not divide {n}")]
    NotADivisor { d: usize, n: usize },

    #[error("element has {got} coordinates, expected {expected}")]
    BadElement { got: usize, expected: usize },

    #[error("incompatible fields: {0}")]
    IncompatibleFields(String),

    #[error("no root of the source modulus found in the target field (internal error)")]
    RootNotFound,

    #[error("zero has no {0}")]
    ZeroElement(&'static str),

    #[error("factorization of {0} is incomplete")]
    IncompleteFactorization(String),

    #[error("cannot factor zero")]
    FactorZero,

    #[error("clearing exponent {clearing} does not clear denominator {den}")]
    UnclearedExponent { clearing: u64, den: u64 },

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("coefficient does not lie in the subfield of degree {0}")]
    CoefficientOutsideBase(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("condition coefficient is not positive for q = {q}; the condition is vacuous")]
    NonPositiveCoefficient { q: u64 },

    #[error(
        "no witness b found for q = {q}, n = {n}, split ({n1}, {n2}); main inequality holds: {main_condition_holds}; \
         ab + 1 has trace zero for every normal b: {trace_obstruction}"
    )]
    NoWitness { q: u64, n: usize, n1: usize, n2: usize, main_condition_holds: bool, trace_obstruction: bool },

    #[error("no partially completely basic split for q = {q}, n = {n}: {reason}")]
    NoSplit { q: u64, n: usize, reason: String },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
