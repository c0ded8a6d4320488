//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An operation was called with an argument outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// A simulation or experiment configuration violates a validation rule.
    /// The message names the violated rule.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A histogram or TVN operation received inputs on mismatched or
    /// degenerate geometry.
    #[error("histogram: {0}")]
    Histogram(String),

    /// The backward-coupling search exceeded its hard depth limit. Coupling
    /// is almost surely finite, so this signals a bug or a pathological
    /// epsilon, not bad luck.
    #[error("coupling search exceeded {max_steps} steps without coalescing (epsilon = {epsilon})")]
    CouplingOverflow { max_steps: u64, epsilon: f64 },

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParam(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }
}
