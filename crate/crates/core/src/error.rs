use thiserror::Error;

/// Errors raised by the algorithms in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parameters out of range: {0}")]
    BadRange(String),
    #[error("lattice paths cross: {0}")]
    Crossing(String),
    #[error("diagram is not reduced")]
    NotReduced,
    #[error("diagram is not a Le-diagram")]
    NotLe,
    #[error("trip from {0} returns to itself without a lollipop")]
    NonLollipopFixedPoint(usize),
    #[error("boundary index {0} out of range")]
    BadBoundary(usize),
    #[error("boundary {0} is not attached to a trivalent internal vertex")]
    BadAttachment(usize),
    #[error("graph is not a BCFW graph")]
    NotBcfwGraph,
    #[error("no value supplied for edge variable {0}")]
    MissingVariable(String),
    #[error("matrix is rank deficient")]
    RankDeficient,
    #[error("matrix is not totally positive")]
    NotTotallyPositive,
    #[error("image under Z lost rank")]
    RankLoss,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("vector is not in the span")]
    NotInSpan,
    #[error("point does not fit the expected template: {0}")]
    TemplateMismatch(String),
    #[error("diagram is not a k=2 BCFW diagram")]
    NotK2Bcfw,
    #[error("dominoes do not sum to the given vector")]
    SumMismatch,
    #[error("sign-pattern search exhausted its budget")]
    SearchExhausted,
    #[error("no matching vector exists")]
    NoMatch,
}

pub type Result<T> = std::result::Result<T, Error>;
