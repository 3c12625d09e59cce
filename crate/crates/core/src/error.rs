use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("unsupported operator: {0}")]
    UnsupportedOperator(String),

    /// Iterative solver failure, carrying the per-iteration log.
    #[error("numerical failure: {message}")]
    Numerical { message: String, log: Vec<f64> },

    #[error("discretization error: {0}")]
    Discretization(String),

    /// Two solutions are proportional; their Wronskian vanishes.
    #[error("degenerate solution pair: |W(x0)| = {0:e}")]
    DegeneratePair(f64),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub(crate) fn ensure_finite(x: f64, what: &str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::invalid(format!("{what} must be finite, got {x}")))
    }
}
