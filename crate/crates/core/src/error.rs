use thiserror::Error;

/// Errors raised by the classification toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("tau must be strictly increasing")]
    NotIncreasing,
    #[error("need at least d+1 = {needed} parameters, got {got}")]
    TooFewParameters { needed: usize, got: usize },
    #[error("dimension d must be at least 1")]
    ZeroDimension,
    #[error("index {index} is outside [1, {n}]")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index set must be nonempty")]
    EmptyIndexSet,
    #[error("repeated index {0}")]
    RepeatedIndex(usize),
    #[error("{0:?} is not a facet")]
    NotAFacet(Vec<usize>),
    #[error("apex {0} lies in the facet")]
    ApexInFacet(usize),
    #[error("operation needs n = {expected}, got n = {got}")]
    WrongVertexCount { expected: String, got: usize },
    #[error("hyperplane lives in the {hyperplane} frame but the point is in the {point} frame")]
    FrameMismatch {
        hyperplane: &'static str,
        point: &'static str,
    },
    #[error("enumeration budget of {budget} candidate points exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("no witness expected: parameters are in the Gorenstein exceptional set")]
    NoWitnessExpected,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
