use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LdgError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("logarithm argument {arg} is not positive at t = {t}")]
    Domain { t: f64, arg: f64 },

    #[error("mesh width h_{index} = {width:e} is not positive (N too large for eps = {eps:e})")]
    DegenerateMesh { index: usize, width: f64, eps: f64 },

    #[error("zero pivot in column {column}")]
    SingularPivot { column: usize },

    #[error("{0}")]
    Mismatch(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, LdgError>;
