//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by constructors and operations on ordinal distributions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrdinalError {
    /// Fewer than two weights were supplied.
    #[error("empty input: at least {min} categories are required, got {got}")]
    EmptyInput { min: usize, got: usize },
    /// A weight was negative.
    #[error("negative weight {value} at category {index}")]
    NegativeWeight { index: usize, value: f64 },
    /// A weight was NaN or infinite.
    #[error("non-finite weight at category {index}")]
    NonFinite { index: usize },
    /// All weights were zero.
    #[error("weights sum to zero")]
    ZeroSum,
    /// A scalar parameter fell outside its documented domain.
    #[error("parameter `{name}` = {value} is out of range ({expected})")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    /// The category count is too small for the requested operation.
    #[error("too few categories: n = {n}, operation requires n >= {min}")]
    TooFewCategories { n: usize, min: usize },
    /// The operation needs a fixed category count.
    #[error("operation requires n = {expected}, got n = {n}")]
    UnsupportedCategoryCount { n: usize, expected: usize },
    /// Skewness is undefined for zero-variance distributions.
    #[error("degenerate distribution: variance is zero")]
    DegenerateDistribution,
    /// Two vectors that must share a length do not.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    /// A vector expected to sum to one does not.
    #[error("vector is not normalized (sum = {sum})")]
    NotNormalized { sum: f64 },
    /// A concentration specification admits no distribution.
    #[error("infeasible concentration spec: n = {n}, k = {k}, C = {c}")]
    SpecInfeasible { n: usize, k: usize, c: f64 },
    /// Benchmark partition ranges are inconsistent with n.
    #[error("bad partition: {0}")]
    BadPartition(String),
    /// Both count histograms are empty.
    #[error("both histograms have zero total")]
    BothEmpty,
    /// The requested number of clusters exceeds the number of items.
    #[error("k = {k} is invalid for {items} items")]
    KTooLarge { k: usize, items: usize },
    /// Silhouette needs at least two clusters.
    #[error("silhouette requires at least two clusters")]
    SingleCluster,
    /// Distance weights are negative or do not sum to one.
    #[error("invalid distance weights: {0}")]
    BadWeights(String),
    /// A required CSV column is absent.
    #[error("missing column `{0}`")]
    MissingColumn(String),
    /// The input could not be read at all.
    #[error("unreadable input: {0}")]
    UnreadableFile(String),
    /// Every subunit of a region was excluded, so no distribution exists.
    #[error("region `{0}` has no included population")]
    RegionAllExcluded(String),
    /// No scored subunits were supplied.
    #[error("no scores available")]
    NoScores,
    /// Region scores have zero spread, so z-scores are undefined.
    #[error("region scores have zero variance")]
    ZeroVariance,
    /// A region id is not present in the dataset.
    #[error("unknown region `{0}`")]
    UnknownRegion(String),
    /// The record list is empty.
    #[error("no records")]
    NoRecords,
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, OrdinalError>;
