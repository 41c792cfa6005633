use thiserror::Error;

use crate::model::TextId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("text is empty after normalization")]
    EmptyText,
    #[error("unknown text id {0}")]
    UnknownId(TextId),
    #[error("`{object}` carries conflicting {dimension} values: {}", values.join(", "))]
    ConflictingLabel {
        object: String,
        dimension: &'static str,
        values: Vec<String>,
    },
}

/// Why a single wire line could not be turned into a triple.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("expected 3 fields separated by \u{25A1}, found {found}")]
    FieldCount { found: usize },
    #[error("field {field} is empty")]
    EmptyField { field: usize },
    #[error("unknown escape sequence `{sequence}` at column {column}")]
    BadEscape { column: usize, sequence: String },
}

impl FieldError {
    /// 1-based column the error points at, when it has one.
    pub fn column(&self) -> Option<usize> {
        match self {
            FieldError::BadEscape { column, .. } => Some(*column),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum PersistError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: stream is not valid UTF-8")]
    Utf8 { line: usize },
    #[error("snapshot header is missing or malformed: {0}")]
    BadHeader(String),
    #[error("snapshot checksum mismatch: header says {expected}, body hashes to {actual}")]
    CorruptSnapshot { expected: String, actual: String },
    #[error("snapshot declares {expected} triples but contains {actual}")]
    CountMismatch { expected: usize, actual: usize },
    #[error("snapshot line {line}: {source}")]
    BadSnapshotLine { line: usize, source: FieldError },
    #[error("log line {line}: {message}")]
    BadLogEntry { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("`{object}` has {} outgoing `abstract to` edges", targets.len())]
    AmbiguousAbstract { object: String, targets: Vec<String> },
    #[error("`{object}` is abstracted to `{target}`, which is not labeled Abstract")]
    NonAbstractTarget { object: String, target: String },
    #[error("`{object}` is abstracted to `{target}`, which has its own `abstract to` edge")]
    ChainedAbstract { object: String, target: String },
    #[error("event `{event}` already reifies a different triple")]
    EventNameCollision { event: String },
    #[error("cannot reify a triple that is not asserted")]
    BaseNotAsserted,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("projected variable ?{0} does not occur in any pattern")]
    UnboundProjection(String),
    #[error("binding was produced at graph version {binding} but the graph is at version {graph}")]
    StaleBinding { binding: u64, graph: u64 },
    #[error("binding does not satisfy pattern {}", .0 + 1)]
    Unsatisfied(usize),
}

/// Umbrella error for callers that mix several layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Persist(#[from] PersistError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Query(#[from] QueryError),
}
