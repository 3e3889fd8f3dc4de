use thiserror::Error;

use crate::hypercube::MAX_ORDER;

/// Errors raised by tangent-algebra arithmetic, anchors, slopes and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element is not invertible")]
    NotInvertible,
    #[error("label not regular")]
    NotRegular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("label mismatch")]
    LabelMismatch,
    #[error("order {0} exceeds the supported maximum of {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("operation is only defined at order 1, found order {0}")]
    RequiresOrderOne(usize),
    #[error("pair is not composable: source of the left factor differs from target of the right")]
    NotComposable,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("block list is empty")]
    EmptyBlocks,
    #[error("evaluation point ({}) lies outside the domain", .point.join(", "))]
    Domain { point: Vec<String> },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("invalid scalar literal `{0}`")]
    InvalidLiteral(String),
    #[error("malformed json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
