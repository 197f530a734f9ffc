use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("support violation: {0}")]
    Support(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("simulation error: {0}")]
    Simulation(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
