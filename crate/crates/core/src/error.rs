use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Shapes of two operands do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An input lies outside the domain of the operation (bad priors, overlap > 1, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A value violates one of the structural invariants of its type.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("eigendecomposition did not converge (residual {residual:e})")]
    NoConvergence { residual: f64 },

    /// A measurement assigns a negative probability to some outcome.
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("unsupported construction: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
