use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("n_agents must be at least 2, got {0}")]
    TooFewAgents(usize),

    #[error("total_money must be positive and finite, got {0}")]
    NonPositiveTotal(f64),

    #[error("saving must lie in [0,1), got {0}")]
    SavingOutOfRange(f64),

    #[error("saving law bounds must satisfy 0 <= lo < hi <= 1, got [{lo}, {hi}]")]
    InvalidSavingLaw { lo: f64, hi: f64 },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("snapshot series has {have} snapshots, need at least {need}")]
    SeriesTooShort { have: usize, need: usize },

    #[error("{what} must be non-negative, got {value}")]
    Negative { what: &'static str, value: f64 },

    #[error("quantile level must lie in [0,1], got {0}")]
    ProbabilityOutOfRange(f64),

    #[error("sample set is empty")]
    EmptySamples,

    #[error("need at least {need} samples, got {have}")]
    TooFewSamples { need: usize, have: usize },

    #[error("histogram needs at least 2 bins, got {0}")]
    TooFewBins(usize),

    #[error("histogram edges must be strictly increasing and finite")]
    BadEdges,

    #[error("no positive samples available for logarithmic binning")]
    NoPositiveSamples,

    #[error("all samples are zero")]
    AllZero,

    #[error("sample variance is zero; Gamma moment fit is undefined")]
    ZeroVariance,

    #[error("tail fit needs k >= 10 order statistics, got k = {0}")]
    TooFewTailSamples(usize),

    #[error("tail threshold order statistic must be positive, got {0}")]
    NonPositiveThreshold(f64),
}
