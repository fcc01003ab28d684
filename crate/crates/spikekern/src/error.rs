use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("non-canonical CSR: {0}")]
    NonCanonicalCsr(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("materialization guard exceeded: estimated {estimated} nonzeros > limit {limit}")]
    SizeGuard { estimated: u64, limit: u64 },

    #[error("invalid network config: {0}")]
    InvalidConfig(String),

    #[error("non-finite state detected at step {step}: {what}")]
    NonFinite { step: u64, what: String },

    #[error("merge contract violated: {0}")]
    MergeContract(String),

    #[error("bad file format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(context: &'static str, expected: usize, got: usize) -> Self {
        Error::DimensionMismatch {
            context,
            expected,
            got,
        }
    }
}
