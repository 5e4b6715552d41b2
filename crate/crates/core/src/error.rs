use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("expected {expected} entries, got {got}")]
    BadLength { expected: usize, got: usize },

    #[error("non-finite value at flat index {index}")]
    NonFinite { index: usize },

    /// Indices are 1-based, as printed to users.
    #[error("entry ({i},{j},{k}) differs from its mirror ({i},{k},{j})")]
    SymmetryViolation { i: usize, j: usize, k: usize },

    #[error("fourth-order tensor is not fully symmetric at flat index {index}")]
    NotFullySymmetric { index: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("no start converged; best residual {best_residual:e}")]
    NoConvergence { best_residual: f64 },

    #[error("grid oracle supports n = 3 only, got n = {n}")]
    UnsupportedDimension { n: usize },

    #[error("{name} must be nonnegative, got {value}")]
    NegativeInput { name: &'static str, value: f64 },

    #[error("radicand {value:e} is below the numerical band")]
    RadicandNegative { value: f64 },

    #[error("largest Z-eigenvalue of a lifted tensor is negative ({value:e})")]
    NegativeLiftedEigenvalue { value: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{}:{line}: {reason}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("property violation for {material} at epsilon {epsilon:e}, trial {trial}: {detail}")]
    PropertyViolation {
        material: String,
        epsilon: f64,
        trial: usize,
        detail: String,
    },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The error with all [`Error::Context`] layers peeled off.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }
}
