use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size error: {0}")]
    Size(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("numeric integrity error: {0}")]
    NumericIntegrity(String),

    #[error("graph construction error: {0}")]
    Construction(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),

    #[error("parameter arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error(
        "projection error: outcome {outcome} on qubit {qubit} has probability {probability:e}"
    )]
    Projection {
        qubit: usize,
        outcome: u8,
        probability: f64,
    },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("optimizer error: {0}")]
    Optimizer(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
