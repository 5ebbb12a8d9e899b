use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{function} overflows f64 at x = {x}")]
    Overflow { function: &'static str, x: f64 },

    #[error("matrix is numerically singular (pivot {pivot:e} at column {column})")]
    Singular { column: usize, pivot: f64 },

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    #[error("{what} vanishes near t = {t}")]
    Pole { what: String, t: f64 },

    #[error("recurrence lost precision: {0}")]
    PrecisionLoss(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
