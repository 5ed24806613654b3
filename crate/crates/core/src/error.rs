use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed model: {0}")]
    InvalidModel(String),
    #[error("form does not belong to this model: {0}")]
    ModelMismatch(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("not a GCS: Mukai pairing vanishes at {witness}")]
    DegeneratePairing { witness: String },
    #[error("not a spinor line at point {0}")]
    ZeroSpinor(String),
    #[error("not maximal isotropic / not a pure spinor: {0}")]
    NotPure(String),
    #[error("B-field must be closed")]
    BFieldNotClosed,
    #[error("form must be real: {0}")]
    NotReal(String),
    #[error("form is not closed: {0}")]
    NotClosed(String),
    #[error("d does not respect U-grading: structure not integrable on invariant complex ({0})")]
    NotIntegrable(String),
    #[error("{0}")]
    Precondition(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
