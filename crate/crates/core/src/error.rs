use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable domain is empty")]
    EmptyDomain,
    #[error("bin boundaries must be strictly increasing and at least two: {0:?}")]
    BadBins(Vec<i64>),
    #[error("expected {expected} count bounds, got {got}")]
    CountArity { expected: usize, got: usize },
    #[error("value variable {0} has no value inside any bin")]
    Unrepresentable(usize),
    #[error("probability {0} outside (0, 1)")]
    Probability(f64),
    #[error("degrees of freedom must be at least 1")]
    DegreesOfFreedom,
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },
    #[error("model is infeasible at the root")]
    RootInfeasible,
}

pub type Result<T> = std::result::Result<T, Error>;
