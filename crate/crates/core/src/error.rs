use thiserror::Error;

use crate::matrix::ElementKind;

pub type Result<T, E = PermanentError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PermanentError {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("expected {expected} elements for a {rows}x{cols} matrix, got {got}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },

    #[error("mixed element kinds: {first:?} and {other:?}")]
    MixedKinds {
        first: ElementKind,
        other: ElementKind,
    },

    #[error("{algorithm} requires {requirement}, got a {rows}x{cols} matrix")]
    WrongShape {
        algorithm: &'static str,
        requirement: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("combinatoric enumeration needs {steps:.3e} products, over the budget of {budget:.3e}")]
    BudgetExceeded { steps: f64, budget: f64 },

    #[error("reference implementation is limited to {limit} columns, got {cols}")]
    SizeGuard { cols: usize, limit: usize },

    #[error("integer normalization is inexact: {value} is not divisible by {divisor}")]
    InexactDivision { value: i64, divisor: String },

    #[error("integer overflow computing {what}")]
    Overflow { what: String },

    #[error("cursor is exhausted")]
    CursorExhausted,
}
