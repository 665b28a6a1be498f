use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("beta must be >= 0 (got {0})")]
    NegativeBeta(String),

    #[error("evaluation point must be positive (got {0})")]
    NonPositiveAbscissa(f64),

    #[error("degenerate cylinder: empty quadrature mask")]
    DegenerateCylinder,

    #[error("cylinder is clipped by the computational box or time window")]
    ClippedCylinder,

    #[error("singular banded system in mode {mode} at pivot {pivot}")]
    SingularMode { mode: usize, pivot: usize },

    #[error("non-finite value detected at t = {time}")]
    NonFinite { time: f64 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
