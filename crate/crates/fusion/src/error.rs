use thiserror::Error;

/// Errors produced by dataset handling, training and fusion.
#[derive(Debug, Error)]
pub enum FusionError {
    #[error("value {0} outside the expected range {1}")]
    OutOfRange(f64, &'static str),

    #[error("dataset `{name}` is invalid: {reason}")]
    InvalidDataset { name: String, reason: String },

    #[error("non-finite feature value at row {row}, column {col}")]
    NonFiniteFeature { row: usize, col: usize },

    #[error("empty feature index set")]
    EmptyFeatureSet,

    #[error("k = {k} exceeds training-set size {n}")]
    KTooLarge { k: usize, n: usize },

    #[error("sample dimension {got} does not match trained dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },

    #[error("need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("single-class data: both labels must be present")]
    SingleClass,

    #[error("k_splits = {k} exceeds feature count {dim}")]
    TooManyGroups { k: usize, dim: usize },

    #[error("invalid experiment plan: {0}")]
    InvalidPlan(String),

    #[error("csv ingestion failed: {0}")]
    Ingest(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("dataset {dataset}, K={k}, realization {realization}: {source}")]
    Realization {
        dataset: String,
        k: usize,
        realization: usize,
        source: Box<FusionError>,
    },
}

pub type Result<T> = std::result::Result<T, FusionError>;
