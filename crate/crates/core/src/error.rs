use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order must lie strictly between 0 and 1, got {0}")]
    InvalidOrder(f64),
    #[error("invalid loss: {0}")]
    InvalidLoss(String),
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("invalid sample: {0}")]
    InvalidSample(String),
    #[error("invalid direction: {0}")]
    InvalidDirection(String),
    #[error("degenerate denominator: all probability mass sits at the evaluation point")]
    DegenerateDenominator,
    #[error("no convergence after {iterations} iterations")]
    NotConverged { iterations: usize },
    #[error("region is empty")]
    EmptyRegion,
    #[error("origin lies outside the support of the sample")]
    OriginOutsideSupport,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("design matrix is rank deficient")]
    RankDeficient,
    #[error("insufficient local data: effective kernel mass {mass:.3} below {required}")]
    InsufficientLocalData { mass: f64, required: f64 },
    #[error("hypergeometric series does not converge at argument {0}")]
    SeriesDiverged(f64),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidOrder(_) => "InvalidOrder",
            Error::InvalidLoss(_) => "InvalidLoss",
            Error::InvalidSeries(_) => "InvalidSeries",
            Error::InvalidSample(_) => "InvalidSample",
            Error::InvalidDirection(_) => "InvalidDirection",
            Error::DegenerateDenominator => "DegenerateDenominator",
            Error::NotConverged { .. } => "NotConverged",
            Error::EmptyRegion => "EmptyRegion",
            Error::OriginOutsideSupport => "OriginOutsideSupport",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::RankDeficient => "RankDeficient",
            Error::InsufficientLocalData { .. } => "InsufficientLocalData",
            Error::SeriesDiverged(_) => "SeriesDiverged",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
