use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported rank {rank} for type {kind}")]
    UnsupportedRank { kind: &'static str, rank: usize },

    #[error("weight {0} is not dominant for this root system")]
    NotDominant(String),

    #[error("weyl dimension formula produced a non-integer value for {0}")]
    NonIntegerResult(String),

    #[error("rank mismatch: expected {expected} coordinates, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("cutoff {cutoff} exceeds the enumeration budget of {limit} entries")]
    CutoffTooLarge { cutoff: usize, limit: usize },

    #[error("{0} is not a root of the growth graph")]
    NotARoot(String),

    #[error("shell sequence is not polynomial: {0}")]
    NotPolynomial(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("rank {rank} exceeds the supported limit {limit}")]
    RankLimit { rank: usize, limit: usize },

    #[error("conjugation convention is incomplete: {0}")]
    ConventionUnset(&'static str),

    #[error("dimension certificate incomplete: {0}")]
    CertificateIncomplete(String),

    #[error("negative multiplicity {mult} for weight {weight}")]
    NegativeMultiplicity { weight: String, mult: i64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
