//! Reserved vocabulary.
//!
//! Every [`Graph`](crate::Graph) interns these texts first and in this exact
//! order, so their ids are the same constants in every graph.

use crate::model::TextId;

pub const TYPE: TextId = TextId(0);
pub const TEXT_LABEL: TextId = TextId(1);
pub const FORMAT_LABEL: TextId = TextId(2);
pub const CLASS_LABEL: TextId = TextId(3);
pub const ABSTRACT_TO: TextId = TextId(4);

pub const NAME: TextId = TextId(5);
pub const DESCRIPTION: TextId = TextId(6);
pub const DOCUMENT: TextId = TextId(7);
pub const ABSTRACT: TextId = TextId(8);
pub const COMPLETE: TextId = TextId(9);
pub const INCOMPLETE: TextId = TextId(10);
pub const STRING: TextId = TextId(11);
pub const TIME: TextId = TextId(12);
pub const NUMBER: TextId = TextId(13);

pub const SUB_RELATION_OF: TextId = TextId(14);
pub const SUBJECT: TextId = TextId(15);
pub const RELATION: TextId = TextId(16);
pub const OBJECT: TextId = TextId(17);

/// Canonical texts, indexed by their constant id.
pub const RESERVED_TEXTS: [&str; 18] = [
    "type",
    "text label",
    "format label",
    "class label",
    "abstract to",
    "Name",
    "Description",
    "Document",
    "Abstract",
    "Complete",
    "Incomplete",
    "String",
    "Time",
    "Number",
    "sub-relation of",
    "subject",
    "relation",
    "object",
];

/// The five relation objects every graph must contain.
pub const CORE_RELATIONS: [TextId; 5] = [TYPE, TEXT_LABEL, FORMAT_LABEL, CLASS_LABEL, ABSTRACT_TO];

/// Label relations, whose tails are marker objects.
pub const LABEL_RELATIONS: [TextId; 3] = [TEXT_LABEL, FORMAT_LABEL, CLASS_LABEL];

pub const MARKERS: [TextId; 9] = [
    NAME,
    DESCRIPTION,
    DOCUMENT,
    ABSTRACT,
    COMPLETE,
    INCOMPLETE,
    STRING,
    TIME,
    NUMBER,
];

/// The reification edges from an event object to its base triple.
pub const POSITIONAL: [TextId; 3] = [SUBJECT, RELATION, OBJECT];

/// Alternative spellings of label relations found in existing corpora.
const RELATION_ALIASES: [(&str, TextId); 2] = [("text type", TEXT_LABEL), ("class type", CLASS_LABEL)];

pub fn canonical_text(id: TextId) -> Option<&'static str> {
    RESERVED_TEXTS.get(id.index()).copied()
}

/// Canonical relation for a relation-position alias, e.g. `text type`.
pub fn relation_alias(text: &str) -> Option<&'static str> {
    RELATION_ALIASES
        .iter()
        .find(|(alias, _)| *alias == text)
        .and_then(|(_, id)| canonical_text(*id))
}

/// Canonical marker for a case variant of a marker text, e.g. `time` or
/// `description`. Returns `None` when `text` is already canonical.
pub fn marker_alias(text: &str) -> Option<&'static str> {
    MARKERS
        .iter()
        .filter_map(|&m| canonical_text(m))
        .find(|canon| *canon != text && canon.eq_ignore_ascii_case(text))
}

pub fn is_label_relation_text(text: &str) -> bool {
    LABEL_RELATIONS
        .iter()
        .any(|&r| canonical_text(r) == Some(text))
}

/// True iff `text` is a reserved text or one of its declared aliases.
pub fn is_reserved_text(text: &str) -> bool {
    RESERVED_TEXTS.contains(&text) || relation_alias(text).is_some() || marker_alias(text).is_some()
}

/// A rewrite applied to one field of a parsed triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliasRewrite {
    pub field: usize,
    pub from: String,
    pub to: &'static str,
}

/// Rewrites relation aliases in the relation field and marker case variants
/// in the tail field of label triples. Returns the rewrites performed.
pub fn rewrite_aliases(fields: &mut [String; 3]) -> Vec<AliasRewrite> {
    let mut rewrites = Vec::new();
    if let Some(canon) = relation_alias(&fields[1]) {
        rewrites.push(AliasRewrite {
            field: 1,
            from: std::mem::replace(&mut fields[1], canon.to_owned()),
            to: canon,
        });
    }
    if is_label_relation_text(&fields[1]) {
        if let Some(canon) = marker_alias(&fields[2]) {
            rewrites.push(AliasRewrite {
                field: 2,
                from: std::mem::replace(&mut fields[2], canon.to_owned()),
                to: canon,
            });
        }
    }
    rewrites
}
