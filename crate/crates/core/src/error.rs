use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not supported (need 0 or an odd prime)")]
    UnsupportedCharacteristic(u32),
    #[error("characteristic mismatch: {left} vs {right}")]
    CharacteristicMismatch { left: Field, right: Field },
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("elements belong to different Lie algebras")]
    AlgebraMismatch,
    #[error("element is not a pure extremal element")]
    NotExtremal,
    #[error("unsupported root system or algebra: {0}")]
    Unsupported(String),
    #[error("bilinear form is degenerate")]
    DegenerateForm,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("point set was truncated at {0} points; closure would be unsound")]
    Truncated(usize),
    #[error("enumeration infeasible: {0}")]
    Infeasible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache file: {0}")]
    Cache(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
