use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("point lies on the cut [{a}, {b}]")]
    OnCut { a: f64, b: f64 },
    #[error("solved parameters at c = {c} violate the {regime} ordering: {detail}")]
    RegimeMismatch { c: f64, regime: String, detail: String },
    #[error("critical point with imaginary part {0:e}")]
    ComplexCritical(f64),
    #[error("sheet classification ambiguous near z = {0}")]
    ClassificationAmbiguous(String),
    #[error("flow denominator vanishes at c = {0}")]
    DenominatorVanishes(f64),
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("x = {x} outside the support [{a}, {b}]")]
    OutsideSupport { x: f64, a: f64, b: f64 },
    #[error("weight winds around zero near x = {0}")]
    WindingDetected(f64),
    #[error("z is within {0:e} of a branch point")]
    TooCloseToBranchPoint(f64),
    #[error("z is within {0:e} of the support")]
    TooCloseToSupport(f64),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("index {0} is not normal")]
    NonNormal(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Configuration problems as opposed to numerical failures.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::InvalidGeometry(_) | Error::InvalidInput(_) | Error::Parse(_) | Error::DomainViolation(_))
    }
}
