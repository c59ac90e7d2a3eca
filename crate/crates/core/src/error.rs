use thiserror::Error;

/// Errors raised by ring construction, arithmetic and the q-number layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0} is not invertible")]
    NotInvertible(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("root system is not admissible: ({n})_(q_{n}) = {value} is not a unit")]
    NotAdmissible { n: u64, value: String },
    #[error("denominator {0} is not covered by the root system")]
    DenominatorNotCovered(u64),
    #[error("incompatible roots at ({0}, {1})")]
    CompatibilityFailure(u64, u64),
    #[error("{0} is not an eigenvector of sigma")]
    Eigenvector(String),
    #[error("twisted basis unavailable: {0}")]
    BasisUnavailable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
