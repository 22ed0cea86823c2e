use thiserror::Error;

use crate::grades::{Grade, Rational};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("scale factor must be positive, got {0}")]
    InvalidScale(Rational),

    #[error("shift {0} is not nonnegative")]
    NegativeShift(Grade),

    #[error("grades out of order: {0} is not <= {1}")]
    Order(Grade, Grade),

    #[error("malformed grid: {0}")]
    Grid(String),

    #[error("malformed object: {0}")]
    Object(String),

    #[error("map does not fit its source and target: {0}")]
    MapType(String),

    #[error("diagram does not commute at {0}")]
    NotFunctorial(String),

    #[error("morphism is not natural at grade {grade}: {detail}")]
    NotNatural { grade: Grade, detail: String },

    #[error("object mismatch: {0}")]
    ObjectMismatch(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("invalid filtered complex: {0}")]
    InvalidComplex(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration budget of {budget} exceeded{}", best_upper_bound.as_ref().map(|b| format!(" (best certified upper bound {b})")).unwrap_or_default())]
    BudgetExceeded { budget: u64, best_upper_bound: Option<Rational> },

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
