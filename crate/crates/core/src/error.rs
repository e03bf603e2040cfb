use crate::model::JobId;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown job id {0}")]
    UnknownJob(JobId),
    #[error("job {0} is not completed by the schedule")]
    NotCompleted(JobId),
    #[error("schedule duration {found} does not match tau {expected}")]
    DurationMismatch { expected: f64, found: f64 },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("empty instance")]
    EmptyInstance,
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no completion phase found with K <= {0}")]
    CompletionSearchExhausted(usize),
    #[error("internal consistency error: {0}")]
    Inconsistent(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("LP parse error at line {line}: {msg}")]
    LpParse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
