//! Error type shared by every operation in this crate.

/// Errors raised when inputs violate an operation's contract.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("column lengths differ: scores={scores}, results={results}, weights={weights}")]
    LengthMismatch {
        scores: usize,
        results: usize,
        weights: usize,
    },
    #[error("non-finite {field} at index {index}")]
    NonFinite { field: &'static str, index: usize },
    #[error("scores must be strictly increasing: scores[{index}] >= scores[{}]", index + 1)]
    ScoresNotIncreasing { index: usize },
    #[error("weights must be strictly positive: weights[{index}] = {value}")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("subpopulation is empty")]
    EmptySubpopulation,
    #[error("subpopulation indices must be strictly increasing and < {m}: offender at position {position}")]
    InvalidSubpopIndex { position: usize, m: usize },
    #[error("expected {expected} bin thresholds, got {got}")]
    ThresholdMismatch { expected: usize, got: usize },
    #[error("bin {bin} contains no observations")]
    EmptyBin { bin: usize },
    #[error("empty input sequence")]
    EmptyInput,
    #[error("restriction bound {k_max} outside 1..={n}")]
    InvalidRestriction { k_max: usize, n: usize },
    #[error("zoom interval [{lo}, {hi}] contains no subpopulation scores")]
    EmptyZoom { lo: f64, hi: f64 },
    #[error("at least one bin is required")]
    ZeroBins,
    #[error("{requested} bins requested but only {available} scores are available")]
    TooManyBins { requested: usize, available: usize },
    #[error("probability out of [0, 1] at index {index}: {value}")]
    ProbabilityOutOfRange { index: usize, value: f64 },
    #[error("outcomes must be 0 or 1: outcomes[{index}] = {value}")]
    NonBinaryOutcome { index: usize, value: f64 },
    #[error("bootstrap needs at least one replicate")]
    ZeroReplicates,
    #[error("unknown generator kind: {0}")]
    UnknownKind(String),
}

pub type Result<T> = std::result::Result<T, Error>;
