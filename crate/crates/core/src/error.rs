use thiserror::Error;

/// Errors raised across the crate. Variants map one-to-one onto the failure
/// classes of the individual operations so callers can dispatch on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not an idele: component at {0} is zero")]
    NotAnIdele(String),
    #[error("composition undefined: source {source_point} does not match range {range_point}")]
    CompositionUndefined { source_point: String, range_point: String },
    #[error("model incomplete: {0}")]
    ModelIncomplete(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("outside the domain of definition: {0}")]
    OutOfDomain(String),
    #[error("undefined on a singular stratum: {0}")]
    UndefinedOnStratum(String),
    #[error("insufficient point counts: need {needed}, have {available}")]
    InsufficientCounts { needed: usize, available: usize },
    #[error("inconsistent point counts: {0}")]
    InconsistentCounts(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("grids differ, regrid required: {0}")]
    RegridRequired(String),
    #[error("input error at line {line}: {message}")]
    Input { line: usize, message: String },
    #[error("archimedean principal value needs a calibration constant")]
    NeedsCalibration,
    #[error("pole at {0}")]
    Pole(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
