use thiserror::Error;

/// Errors produced anywhere in the curvature pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    #[error("fundamental tensor is not positive definite at y = {y:?}")]
    Convexity { y: Vec<f64> },

    #[error("invalid Lie algebra data: {0}")]
    InvalidAlgebra(String),

    #[error("no closed-form oracle: {0}")]
    NoClosedForm(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
