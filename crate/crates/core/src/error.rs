use thiserror::Error;

/// Errors produced by the walk simulator, return statistics and fitting code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-unitary coin: max deviation of U*U^dagger from identity is {0:e}")]
    NonUnitaryCoin(f64),

    #[error("empty distribution")]
    EmptyDistribution,

    #[error("insufficient history: need more than {needed} observations, have {available}")]
    InsufficientHistory { needed: usize, available: usize },

    #[error("zero-width support")]
    ZeroWidthSupport,

    #[error("zero variance")]
    ZeroVariance,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("alignment out of range")]
    AlignmentOutOfRange,

    #[error("all EM restarts collapsed to a degenerate component")]
    ComponentCollapse,

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by too little data rather than bad input.
    pub fn is_insufficient_data(&self) -> bool {
        matches!(self, Error::InsufficientHistory { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
