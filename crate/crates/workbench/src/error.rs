use thiserror::Error;

pub type Result<T, E = WorkbenchError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error(transparent)]
    Core(#[from] aal_core::Error),

    #[error("could only find {k_max} independent cosets, {k} requested")]
    CannotFindIndependent { k: usize, k_max: usize },

    #[error("group has {factors} cyclic factors, {k} requested")]
    TooFewFactors { factors: usize, k: usize },

    #[error("progression of length {length} wraps: only {distinct} distinct elements")]
    NonInjectiveAP { length: usize, distinct: usize },

    #[error("config: {0}")]
    Config(String),

    #[error("config {path}: {source}")]
    ConfigParse {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
