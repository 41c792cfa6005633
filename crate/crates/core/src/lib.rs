//! An embeddable, text-native knowledge graph.
//!
//! Every object is a text and every statement is a `head □ relation □ tail`
//! triple. On top of raw storage the crate provides:
//!
//! - labels (`text label`, `format label`, `class label`) derived from triples,
//! - canonicalization of objects through `abstract to` edges,
//! - `type` and `sub-relation of` closures,
//! - exact vs. lower-bound class membership driven by `Complete`/`Incomplete`,
//! - reification of triples into event objects,
//! - conjunctive queries under raw, canonical or full inference.

pub mod diag;
pub mod error;
pub mod format;
pub mod labels;
pub mod model;
pub mod persist;
pub mod query;
pub mod semantics;
pub mod shared;
pub mod stats;
pub mod store;
pub mod vocab;

pub use diag::{Code, Diagnostic, Severity};
pub use error::{Error, FieldError, ModelError, PersistError, QueryError, SemanticsError};
pub use format::{parse_document, parse_str, ImportCounts, ParsedDocument};
pub use labels::{label_set_of, ClassLabel, FormatLabel, LabelSet, TextLabel};
pub use model::{normalize_text, Dictionary, TextId, Triple};
pub use store::{AssertOutcome, Graph, IndexKind, LogEntry, LogOp, Pattern, RetractOutcome, Term};
pub use query::{
    evaluate, evaluate_with, explain, parse_query, Binding, BindingCertainty, PatternProof, Query, QueryTerm,
    VarPattern,
};
pub use shared::SharedGraph;
pub use stats::GraphStats;
pub use semantics::{
    Certainty, CountKind, EventReification, MemberCount, MembershipAnswer, Regime, Semantics,
};
