use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("row {row}: {what} = {value} is outside the parameter space")]
    Domain {
        row: usize,
        what: &'static str,
        value: f64,
    },

    #[error("design error: {0}")]
    Design(String),

    #[error("boundary data: {0}")]
    Boundary(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("fit did not converge")]
    NotConverged,

    #[error("likelihood ratio test: {0}")]
    LrTest(String),

    #[error("{failed} of {total} replicate refits failed")]
    TooManyFailures { failed: usize, total: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
