use thiserror::Error;

/// Errors raised by evaluators, solvers and probes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical error: {message} (iterations {iterations}, residual {residual:e})")]
    Numerical {
        message: String,
        iterations: usize,
        residual: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported model: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl LabError {
    pub(crate) fn numerical(message: impl Into<String>, iterations: usize, residual: f64) -> Self {
        LabError::Numerical {
            message: message.into(),
            iterations,
            residual,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
