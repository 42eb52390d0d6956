use thiserror::Error;

use crate::shift::EdgeId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("matrix is empty")]
    EmptyMatrix,
    #[error("matrix has a negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },
    #[error("the zero matrix does not define an edge shift")]
    ZeroMatrix,
    #[error("operation requires an irreducible shift")]
    ReducibleInput,
    #[error("operation requires a shift of positive entropy")]
    ZeroEntropy,
    #[error("matrix is nilpotent, its eventual range is trivial")]
    NilpotentMatrix,
    #[error("matrix is not primitive")]
    NotPrimitive,
    #[error("word of length {len} is shorter than the code window {window}")]
    WordTooShort { len: usize, window: usize },
    #[error("word is not admissible at position {position}")]
    InadmissibleWord { position: usize },
    #[error("edge index {0} is out of range")]
    UnknownEdge(EdgeId),
    #[error("source and target shifts do not match")]
    ShiftMismatch,
    #[error("rule table is not composable: window {window:?} and its right neighbour give inadmissible output")]
    NotComposable { window: Vec<EdgeId> },
    #[error("rule table does not match the admissible words: {0}")]
    BadRuleTable(String),
    #[error("codes are not mutually inverse ({side}): window {window:?} maps to {got}, expected {expected}")]
    NotInverse {
        side: &'static str,
        window: Vec<EdgeId>,
        got: EdgeId,
        expected: EdgeId,
    },
    #[error("no inverse found with window radius up to {0}")]
    NotInvertibleWithin(usize),
    #[error("unknown builtin {0:?}")]
    UnknownBuiltin(String),
    #[error("builtin {name:?} is not defined on this shift: {reason}")]
    BuiltinShiftMismatch { name: String, reason: String },
    #[error("window count {needed} exceeds the budget of {budget}")]
    WindowBudgetExceeded { needed: u128, budget: u64 },
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("inconsistent linear system while building the dimension action: {0}")]
    InconsistentSystem(String),
    #[error("non-positive Perron ratio {0}")]
    NonPositiveRatio(f64),
    #[error("subsystem is not invariant: window {window:?} maps outside the allowed edges")]
    NotInvariant { window: Vec<EdgeId> },
    #[error("allowed edges do not support any bi-infinite path")]
    EmptySubsystem,
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
