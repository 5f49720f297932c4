//! Error type shared by every module of the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FraglabError {
    /// A requested object would exceed a configured size budget.
    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity {
        what: String,
        needed: u128,
        limit: u128,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration not found in basis: {0}")]
    NotFound(String),

    /// A configuration breaks g-padding or the blockade.
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    /// Parity or sign conditions of a census term fail.
    #[error("inadmissible parameters: {0}")]
    Admissibility(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("ensemble is missing fragments: {}", .0.join(", "))]
    MissingFragments(Vec<String>),

    #[error("insufficient points: {0}")]
    InsufficientPoints(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, FraglabError>;
