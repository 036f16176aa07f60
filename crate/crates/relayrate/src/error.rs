use thiserror::Error;

/// Errors produced by rate evaluation, optimization and file ingestion.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable `{0}` already exists")]
    DuplicateVariable(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("distribution not normalized: sums to {sum} (tolerance {tol})")]
    NotNormalized { sum: f64, tol: f64 },

    #[error("negative probability entry {value} at flat index {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("variable sets overlap on `{0}`")]
    OverlappingSets(String),

    #[error("mutual information {0} below -1e-12; tensor is inconsistent")]
    NegativeInformation(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge: requested {requested}, achieved error estimate {achieved}")]
    QuadratureNonConvergence { requested: f64, achieved: f64 },

    #[error("bisection bracket failure: {0}")]
    BisectionBracket(String),

    #[error("rate evaluation failed in restart {restart}: {source}")]
    RestartFailed {
        restart: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {message}")]
    Ingest { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
