use std::path::PathBuf;

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix of order {order} exceeds the dense cap of {cap}; use the extremal solver instead")]
    DenseCapExceeded { order: usize, cap: usize },

    #[error("A is not positive definite: {certificate}")]
    NotPositiveDefinite { certificate: Certificate },

    #[error("C is not negative semidefinite: {certificate}")]
    NotNegativeSemidefinite { certificate: Certificate },

    #[error("m = {m} is smaller than n = {n}; set allow_m_lt_n to accept such systems")]
    ColumnsExceedRows { m: usize, n: usize },

    #[error(
        "eigensolver did not converge after {iterations} operator applications \
         (best estimate {best}, residual {residual:e})"
    )]
    NotConverged {
        best: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("{theorem} not applicable: hypothesis {hypothesis}")]
    HypothesisViolated {
        theorem: &'static str,
        hypothesis: String,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Evidence that a definiteness check failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Certificate {
    /// Cholesky pivot at `index` came out with value `value`.
    Pivot { index: usize, value: f64 },
    /// An eigenvalue on the wrong side of the tolerance.
    Eigenvalue { value: f64, tolerance: f64 },
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Certificate::Pivot { index, value } => {
                write!(f, "nonpositive pivot {value:e} at index {index}")
            }
            Certificate::Eigenvalue { value, tolerance } => {
                write!(f, "eigenvalue {value:e} against tolerance {tolerance:e}")
            }
        }
    }
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
