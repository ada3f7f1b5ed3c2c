use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("group of order {size} exceeds the enumeration cap {cap}")]
    CapExceeded { size: u128, cap: usize },

    #[error("invalid group presentation: {0}")]
    InvalidGroup(String),

    #[error("operands live in different groups ({left} vs {right})")]
    GroupMismatch { left: String, right: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("operation requires a non-empty set")]
    EmptySet,

    #[error("threshold {0} outside (0, 1]")]
    BadThreshold(String),

    #[error("epsilon {0} outside the admissible range")]
    BadEps(f64),

    #[error("delta {0} outside the admissible range")]
    BadDelta(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("set is not symmetric")]
    NotSymmetric,

    #[error("slab normals have rank {rank} < dimension {dim}; body is unbounded")]
    UnboundedBody { rank: usize, dim: usize },

    #[error("body point {point:?} lies on the enumeration shell of radius {radius}")]
    TruncationSuspected { point: Vec<i64>, radius: i64 },

    #[error("hypothesis fails: {0}")]
    HypothesisFails(String),

    #[error("equality certificate fails: {0}")]
    EqualityCertificateFails(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("no sampled tuple met the approximation target; best relative error {best_error}")]
    NoGoodTuples { best_error: f64 },

    #[error("iteration stopped after {steps} steps without terminating")]
    StepLimit {
        steps: usize,
        trace: Box<crate::structure::IterationTrace>,
    },

    #[error("empty intersection at iteration step {step}")]
    EmptyIntersection { step: usize },

    #[error("energy {energy} is below the required {required}")]
    EnergyTooSmall { energy: u128, required: f64 },

    #[error("no non-trivial candidate subset was found")]
    NoCandidate,

    #[error("pipeline stage `{stage}` failed: {source}")]
    PartialReport { stage: String, source: Box<Error> },
}

impl Error {
    pub(crate) fn mismatch(left: impl ToString, right: impl ToString) -> Self {
        Error::GroupMismatch {
            left: left.to_string(),
            right: right.to_string(),
        }
    }

    pub(crate) fn stage(stage: &str) -> impl FnOnce(Error) -> Error + '_ {
        move |source| Error::PartialReport {
            stage: stage.to_string(),
            source: Box::new(source),
        }
    }
}
