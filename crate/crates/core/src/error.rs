//! Error type shared across the simulation and analysis layers.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CoreError>;

#[derive(Debug, Error)]
pub enum CoreError {
    /// A physical or numerical parameter is outside its valid domain.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Two inputs that must agree in shape or sampling do not.
    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    /// An analysis step could not produce a meaningful answer on this data.
    #[error("analysis failed: {0}")]
    Analysis(String),

    /// Iterative search (calibration, locking-range scan) did not converge.
    #[error("search did not converge: {0}")]
    NoConvergence(String),
}

impl CoreError {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        CoreError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
