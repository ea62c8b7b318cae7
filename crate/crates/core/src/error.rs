use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("part {index} is not strictly positive ({value})")]
    NonPositivePart { index: usize, value: f64 },

    #[error("a composition needs at least 2 parts, got {len}")]
    DimensionTooSmall { len: usize },

    #[error("parts sum to {sum}, not 1")]
    NotClosed { sum: f64 },

    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },

    #[error("log-ratio {value} at position {index} exceeds the overflow guard (|y| <= 700)")]
    OverflowGuard { index: usize, value: f64 },

    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("need at least {required} observations, got {n}")]
    TooFewObservations { n: usize, required: usize },

    #[error("design matrix with intercept is rank deficient")]
    RankDeficientDesign,

    #[error("confidence level must lie in (0, 1), got {0}")]
    InvalidLevel(f64),

    #[error("component {component} has zero residual scale")]
    DegenerateScale { component: usize },

    #[error("bootstrap needs at least 100 draws, got {0}")]
    BTooSmall(usize),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("replicate {replicate}: covariate draw degenerate 100 times in a row")]
    ImprobableDegeneracy { replicate: u64 },

    #[error("line {line}, column {column}: {reason}")]
    Parse {
        line: u64,
        column: usize,
        reason: String,
    },

    #[error("match {match_id}: {reason}")]
    Validation { match_id: u32, reason: String },

    #[error("duplicate match id {0}")]
    DuplicateId(u32),

    #[error("match {match_id}: {source}")]
    Record {
        match_id: u32,
        #[source]
        source: Box<Error>,
    },

    #[error("config #{index}: {source}")]
    Sweep {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for errors caused by malformed input data rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Validation { .. }
                | Error::DuplicateId(_)
                | Error::Record { .. }
                | Error::NonPositivePart { .. }
                | Error::NonFinite { .. }
        )
    }
}
