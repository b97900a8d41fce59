use chargenet_kernel::KernelError;

use crate::schema::Violation;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("unknown station {0}")]
    UnknownStation(String),
    #[error("instance failed validation with {} violation(s); first: {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    Invalid(Vec<Violation>),
    #[error("malformed document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, thiserror::Error)]
pub enum GeneratorError {
    #[error("invalid generator config: {0}")]
    Config(String),
    #[error("requested {k} stations but only {available} candidate sites exist")]
    TooFewSites { k: usize, available: usize },
    #[error("normalized distance {0} outside [0, 1]")]
    DistanceOutOfRange(f64),
    #[error("stratum (start bin {bin}, day group {day}) holds {available} shifts but its quota is {quota}")]
    EmptyStratum {
        bin: usize,
        day: usize,
        available: usize,
        quota: usize,
    },
    #[error("could not produce enough individually feasible shifts after {0} attempts")]
    PoolExhausted(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("solver kernel: {0}")]
    Kernel(#[from] KernelError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("time limit reached without an accepted configuration")]
    TimeLimit,
    #[error("iteration limit of {0} outer iterations reached without an accepted configuration")]
    IterationLimit(usize),
    #[error("internal consistency fault: {0}")]
    Internal(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
