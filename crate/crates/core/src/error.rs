use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid algebra: {0}")]
    Algebra(String),

    #[error("invalid module: {0}")]
    Module(String),

    #[error("invalid map: {0}")]
    Map(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
