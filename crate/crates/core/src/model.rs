//! Text objects, triples and the interning dictionary.
//!
//! Every node and edge of a graph is a text. Texts are normalized (NFC, ASCII
//! whitespace trimmed at both ends) and interned into dense [`TextId`]s; the
//! id is only meaningful inside the [`Dictionary`] that issued it.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use unicode_normalization::UnicodeNormalization;

use crate::error::ModelError;

/// Dense handle of an interned text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TextId(pub(crate) u32);

impl TextId {
    pub const MIN: TextId = TextId(0);
    pub const MAX: TextId = TextId(u32::MAX);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for TextId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An ordered `(head, relation, tail)` assertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub head: TextId,
    pub relation: TextId,
    pub tail: TextId,
}

impl Triple {
    pub fn new(head: TextId, relation: TextId, tail: TextId) -> Self {
        Triple {
            head,
            relation,
            tail,
        }
    }
}

/// Applies the identity normalization: Unicode NFC, then trimming of ASCII
/// whitespace at both ends. Interior whitespace (including NBSP) is kept.
pub fn normalize_text(raw: &str) -> String {
    let nfc: String = raw.nfc().collect();
    let trimmed = nfc.trim_matches(|c: char| c.is_ascii_whitespace());
    if trimmed.len() == nfc.len() {
        nfc
    } else {
        trimmed.to_owned()
    }
}

/// Bidirectional text <-> id table. Ids are assigned densely in interning
/// order and are never reused.
#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    ids: HashMap<Arc<str>, TextId>,
    texts: Vec<Arc<str>>,
}

impl Dictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns `raw` after normalization, returning the existing id when the
    /// normalized text is already known.
    pub fn intern(&mut self, raw: &str) -> Result<TextId, ModelError> {
        let text = normalize_text(raw);
        if text.is_empty() {
            return Err(ModelError::EmptyText);
        }
        if let Some(&id) = self.ids.get(text.as_str()) {
            return Ok(id);
        }
        let id = TextId(
            u32::try_from(self.texts.len()).expect("dictionary exceeded u32::MAX entries"),
        );
        let text: Arc<str> = Arc::from(text);
        self.texts.push(text.clone());
        self.ids.insert(text, id);
        Ok(id)
    }

    /// Looks up a text without interning it.
    pub fn lookup(&self, raw: &str) -> Option<TextId> {
        if let Some(&id) = self.ids.get(raw) {
            return Some(id);
        }
        self.ids.get(normalize_text(raw).as_str()).copied()
    }

    pub fn text(&self, id: TextId) -> Option<&str> {
        self.texts.get(id.index()).map(|t| &**t)
    }

    pub fn len(&self) -> usize {
        self.texts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.texts.is_empty()
    }

    /// All `(id, text)` pairs in interning order.
    pub fn iter(&self) -> impl Iterator<Item = (TextId, &str)> + '_ {
        self.texts
            .iter()
            .enumerate()
            .map(|(i, t)| (TextId(i as u32), &**t))
    }
}
