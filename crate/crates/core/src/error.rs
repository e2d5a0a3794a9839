use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field size {p}^{m} exceeds the table limit {limit}")]
    FieldTooLarge { p: u32, m: u32, limit: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("discrete logarithm of zero")]
    LogOfZero,
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("generator product is not invertible (nontrivial intersection with the dual)")]
    NotInvertible,
    #[error("power must be at least 1")]
    ZeroPower,
    #[error("hermitian inner product requires an even extension degree, got m = {0}")]
    OddExtension(u32),
    #[error("{r} does not divide q - 1 = {q_minus_one}")]
    BadSubgroupOrder { r: u32, q_minus_one: u32 },
    #[error("no applicable construction for [{n},{k}]_{q}: {reason}")]
    NoApplicablePlan { q: u32, n: usize, k: usize, reason: String },
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),
    #[error("instance has no witness")]
    MissingWitness,
    #[error("malformed instance: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
