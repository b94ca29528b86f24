use thiserror::Error;

/// Error type shared across the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("inconsistent state: {0}")]
    InvalidState(String),

    /// A failure observation arrived while the belief assigned it probability zero.
    #[error("failure impossible under current belief (mean {mean} >= pool {pool})")]
    ImpossibleFailure { mean: f64, pool: usize },

    #[error("infeasible placement: {0}")]
    InfeasiblePlacement(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
