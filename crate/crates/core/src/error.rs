use thiserror::Error;

/// Errors raised by the matrix routines and inequality checkers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    Dimension {
        context: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("non-finite entry at position {index}")]
    NonFinite { index: usize },
    /// A theorem hypothesis does not hold for the given input.
    #[error("hypothesis `{hypothesis}` failed (defect {defect:e}){}", fmt_detail(.detail))]
    Hypothesis {
        hypothesis: String,
        defect: f64,
        detail: String,
    },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn fmt_detail(detail: &str) -> String {
    if detail.is_empty() {
        String::new()
    } else {
        format!(": {detail}")
    }
}

impl Error {
    pub(crate) fn hypothesis(name: impl Into<String>, defect: f64) -> Self {
        Error::Hypothesis {
            hypothesis: name.into(),
            defect,
            detail: String::new(),
        }
    }

    pub(crate) fn dimension(context: &'static str, expected: usize, actual: usize) -> Self {
        Error::Dimension {
            context,
            expected,
            actual,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
