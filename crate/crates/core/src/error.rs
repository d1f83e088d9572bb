use thiserror::Error;

use crate::field::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field error: {0}")]
    Field(String),
    #[error("incompatible fields {0} and {1}")]
    FieldMismatch(Field, Field),
    #[error("expected {expected}, got {got}")]
    Degree { expected: String, got: String },
    #[error("matrix shape: {0}")]
    Shape(String),
    #[error("matrix is not skew-symmetric at ({row}, {col})")]
    NotSkew { row: usize, col: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("expected rank {expected}, found {found}")]
    Rank { expected: usize, found: usize },
    #[error("calibration: {0}")]
    Calibration(String),
    #[error("not a representation: {0}")]
    NotARepresentation(String),
    #[error("numeric: {0}")]
    Numeric(String),
    #[error("parse: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
