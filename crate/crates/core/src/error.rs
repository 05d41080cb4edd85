use thiserror::Error;

/// Errors raised by distribution construction, parameter builders, the
/// register file and the exact oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("probabilities sum to {sum}, expected 1 (tolerance {tolerance})")]
    NormalizationFailure { sum: f64, tolerance: f64 },

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("vacuous partition: {0}; lower beta or raise k")]
    VacuousPartition(String),

    #[error("register file capacity {capacity} exceeded")]
    CapacityExceeded { capacity: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("instance too large to enumerate: {terms} terms (limit {limit})")]
    InstanceTooLarge { terms: u64, limit: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
