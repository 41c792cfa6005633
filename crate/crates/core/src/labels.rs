//! Text, format and class labels derived from label triples.

use crate::error::ModelError;
use crate::model::TextId;
use crate::store::Graph;
use crate::vocab;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TextLabel {
    Name,
    Description,
    Document,
    Abstract,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormatLabel {
    String,
    Time,
    Number,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ClassLabel {
    Complete,
    #[default]
    Incomplete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LabelSet {
    pub text_label: Option<TextLabel>,
    pub format_label: Option<FormatLabel>,
    pub class_label: ClassLabel,
}

fn text_label(id: TextId) -> Option<TextLabel> {
    Some(match id {
        vocab::NAME => TextLabel::Name,
        vocab::DESCRIPTION => TextLabel::Description,
        vocab::DOCUMENT => TextLabel::Document,
        vocab::ABSTRACT => TextLabel::Abstract,
        _ => return None,
    })
}

fn format_label(id: TextId) -> Option<FormatLabel> {
    Some(match id {
        vocab::STRING => FormatLabel::String,
        vocab::TIME => FormatLabel::Time,
        vocab::NUMBER => FormatLabel::Number,
        _ => return None,
    })
}

fn class_label(id: TextId) -> Option<ClassLabel> {
    Some(match id {
        vocab::COMPLETE => ClassLabel::Complete,
        vocab::INCOMPLETE => ClassLabel::Incomplete,
        _ => return None,
    })
}

pub(crate) fn dimension_name(relation: TextId) -> &'static str {
    match relation {
        vocab::TEXT_LABEL => "text label",
        vocab::FORMAT_LABEL => "format label",
        _ => "class label",
    }
}

/// Whether `value` is a legal tail for the label relation `relation`.
pub fn is_valid_label_value(relation: TextId, value: TextId) -> bool {
    match relation {
        vocab::TEXT_LABEL => text_label(value).is_some(),
        vocab::FORMAT_LABEL => format_label(value).is_some(),
        vocab::CLASS_LABEL => class_label(value).is_some(),
        _ => false,
    }
}

fn single<T: Copy + PartialEq>(
    g: &Graph,
    obj: TextId,
    relation: TextId,
    decode: fn(TextId) -> Option<T>,
) -> Result<Option<T>, ModelError> {
    let values: Vec<TextId> = g
        .objects(obj, relation)
        .filter(|&v| decode(v).is_some())
        .collect();
    match values.as_slice() {
        [] => Ok(None),
        [v] => Ok(decode(*v)),
        many => Err(ModelError::ConflictingLabel {
            object: g.text(obj).to_owned(),
            dimension: dimension_name(relation),
            values: many.iter().map(|&v| g.text(v).to_owned()).collect(),
        }),
    }
}

/// Labels of `obj` as asserted in `g`. Tails that are not markers of the
/// right dimension are ignored here and reported by validation.
pub fn label_set_of(g: &Graph, obj: TextId) -> Result<LabelSet, ModelError> {
    Ok(LabelSet {
        text_label: single(g, obj, vocab::TEXT_LABEL, text_label)?,
        format_label: single(g, obj, vocab::FORMAT_LABEL, format_label)?,
        class_label: single(g, obj, vocab::CLASS_LABEL, class_label)?.unwrap_or_default(),
    })
}

/// True iff `obj` carries an `Abstract` text label, regardless of conflicts.
pub fn is_abstract(g: &Graph, obj: TextId) -> bool {
    g.contains(&crate::Triple::new(obj, vocab::TEXT_LABEL, vocab::ABSTRACT))
}

/// True iff the class carries `Complete` and not also `Incomplete`.
pub fn is_complete(g: &Graph, class: TextId) -> bool {
    g.contains(&crate::Triple::new(class, vocab::CLASS_LABEL, vocab::COMPLETE))
        && !g.contains(&crate::Triple::new(class, vocab::CLASS_LABEL, vocab::INCOMPLETE))
}
