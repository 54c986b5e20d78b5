use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A user-supplied table (distribution, trace) failed validation.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("user index {index} out of range for K = {users}")]
    IndexOutOfRange { index: usize, users: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Corollary-level operations are only defined for equal per-user antenna counts.
    #[error("operation requires a symmetric antenna configuration, got M = {0:?}")]
    Asymmetric(Vec<u32>),

    #[error("K = {users} exceeds the enumeration cap of {cap} users")]
    EnumerationCap { users: usize, cap: usize },

    #[error("configuration outside the supported regime: {0}")]
    UnsupportedRegime(String),

    #[error("sampled channel stayed rank deficient after {0} attempts")]
    DegenerateChannel(usize),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
