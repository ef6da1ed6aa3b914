use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported field GF({q}): {reason}")]
    UnsupportedField { q: u32, reason: String },

    #[error("unsupported Coxeter type {label}: {reason}")]
    UnsupportedType { label: String, reason: String },

    #[error("geometry parameters out of range: {0}")]
    OutOfRange(String),

    #[error("{what}: size {count} exceeds cap {cap}")]
    BudgetExceeded { what: &'static str, count: u64, cap: u64 },

    #[error("elements belong to different Coxeter systems ({left} vs {right})")]
    MismatchedSystems { left: String, right: String },

    #[error("automorphism incompatible with geometry: {0}")]
    Incompatible(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// A violated structural invariant; always a bug in a model.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
