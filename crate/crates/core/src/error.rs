use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: edge weight must be positive, got {weight}")]
    NonPositiveWeight { line: usize, weight: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph has {n} vertices; brute force is limited to {limit}")]
    GraphTooLarge { n: usize, limit: usize },

    #[error("score mismatch for {strategy}: {detail}")]
    ScoreMismatch { strategy: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
