use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("invalid noise ratio {0}: must lie in [0, 1)")]
    InvalidNoiseRatio(f64),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid quantile fraction {0}: must lie in (0, 1]")]
    InvalidQuantile(f64),
    #[error("empty input")]
    EmptyInput,
    #[error("alignment error: expected {expected} entries, got {actual}")]
    Alignment { expected: usize, actual: usize },
    #[error("fit error: {0}")]
    Fit(String),
    #[error("fit error in subset {subset}: {reason}")]
    SubsetFit { subset: usize, reason: String },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("cross-model divergence is undefined for k = 1")]
    DivergenceUndefined,
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}
