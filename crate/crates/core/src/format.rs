//! The line-oriented `.ogt` wire format.
//!
//! One triple per line, three fields separated by U+25A1 (`□`) with optional
//! surrounding whitespace. Inside a field `\\`, `\q`, `\n` and `\t` stand for
//! a backslash, a literal `□`, a newline and a tab. Lines whose first byte is
//! `#` are comments; lines holding only whitespace are blank.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashSet};
use std::io::BufRead;

use crate::diag::{Code, Diagnostic, Severity};
use crate::error::{FieldError, ModelError, PersistError};
use crate::model::{normalize_text, Dictionary, Triple};
use crate::store::{AssertOutcome, Graph};
use crate::vocab::{self, AliasRewrite};

pub const SEPARATOR: char = '\u{25A1}';

/// Shortest class name considered by the near-duplicate check.
const NEAR_DUPLICATE_MIN_CHARS: usize = 5;
const NEAR_DUPLICATE_MAX_EDITS: usize = 2;

/// A triple line after unescaping, normalization and alias rewriting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTriple {
    pub fields: [String; 3],
    pub rewrites: Vec<AliasRewrite>,
}

impl RawTriple {
    pub fn head(&self) -> &str {
        &self.fields[0]
    }

    pub fn relation(&self) -> &str {
        &self.fields[1]
    }

    pub fn tail(&self) -> &str {
        &self.fields[2]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WireLine {
    Triple(RawTriple),
    Comment,
    Blank,
}

pub fn escape_field(text: &str) -> Cow<'_, str> {
    if !text.contains(['\\', SEPARATOR, '\n', '\t']) {
        return Cow::Borrowed(text);
    }
    let mut out = String::with_capacity(text.len() + 8);
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            SEPARATOR => out.push_str("\\q"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    Cow::Owned(out)
}

/// Reverses [`escape_field`]. `first_column` is the 1-based column of `raw`
/// in its line, used for error positions.
pub fn unescape_field(raw: &str, first_column: usize) -> Result<String, FieldError> {
    let mut out = String::with_capacity(raw.len());
    let mut chars = raw.chars().enumerate();
    while let Some((i, c)) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some((_, '\\')) => out.push('\\'),
            Some((_, 'q')) => out.push(SEPARATOR),
            Some((_, 'n')) => out.push('\n'),
            Some((_, 't')) => out.push('\t'),
            other => {
                return Err(FieldError::BadEscape {
                    column: first_column + i,
                    sequence: match other {
                        Some((_, c)) => format!("\\{c}"),
                        None => "\\".to_owned(),
                    },
                })
            }
        }
    }
    Ok(out)
}

/// Splits a line on unescaped separators, returning each raw field with its
/// 1-based starting column.
pub(crate) fn split_fields(line: &str) -> Vec<(usize, &str)> {
    let mut fields = Vec::with_capacity(3);
    let mut start_byte = 0;
    let mut start_col = 1;
    let mut escaped = false;
    for (col, (byte, c)) in line.char_indices().enumerate() {
        if escaped {
            escaped = false;
        } else if c == '\\' {
            escaped = true;
        } else if c == SEPARATOR {
            fields.push((start_col, &line[start_byte..byte]));
            start_byte = byte + c.len_utf8();
            start_col = col + 2;
        }
    }
    fields.push((start_col, &line[start_byte..]));
    fields
}

fn is_blank(line: &str) -> bool {
    line.bytes().all(|b| b.is_ascii_whitespace())
}

/// Unescapes and normalizes a raw field. The field index is 1-based.
pub(crate) fn decode_field(raw: &str, column: usize, field: usize) -> Result<String, FieldError> {
    let text = normalize_text(&unescape_field(raw, column)?);
    if text.is_empty() {
        return Err(FieldError::EmptyField { field });
    }
    Ok(text)
}

pub fn parse_line(line: &str) -> Result<WireLine, FieldError> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    if line.starts_with('#') {
        return Ok(WireLine::Comment);
    }
    if is_blank(line) {
        return Ok(WireLine::Blank);
    }
    let raw = split_fields(line);
    if raw.len() != 3 {
        return Err(FieldError::FieldCount { found: raw.len() });
    }
    let mut fields: [String; 3] = Default::default();
    for (i, (col, text)) in raw.into_iter().enumerate() {
        fields[i] = decode_field(text, col, i + 1)?;
    }
    let rewrites = vocab::rewrite_aliases(&mut fields);
    Ok(WireLine::Triple(RawTriple { fields, rewrites }))
}

/// Formats three texts as one wire line (without the trailing newline).
pub fn serialize_texts(head: &str, relation: &str, tail: &str) -> String {
    let head = escape_field(head);
    let relation = escape_field(relation);
    let tail = escape_field(tail);
    let mut line = String::with_capacity(head.len() + relation.len() + tail.len() + 9);
    // A head starting with `#` would read back as a comment; the leading
    // space is trimmed on parse.
    if head.starts_with('#') {
        line.push(' ');
    }
    line.push_str(&head);
    line.push_str(" \u{25A1} ");
    line.push_str(&relation);
    line.push_str(" \u{25A1} ");
    line.push_str(&tail);
    line
}

pub fn serialize_triple(t: &Triple, dict: &Dictionary) -> Result<String, ModelError> {
    let text = |id| dict.text(id).ok_or(ModelError::UnknownId(id));
    Ok(serialize_texts(
        text(t.head)?,
        text(t.relation)?,
        text(t.tail)?,
    ))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedDocument {
    /// Triples with their 1-based source line, in source order.
    pub triples: Vec<(usize, RawTriple)>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParsedDocument {
    pub fn error_count(&self) -> usize {
        self.diagnostics.iter().filter(|d| d.is_error()).count()
    }

    pub fn warning_count(&self) -> usize {
        self.diagnostics.len() - self.error_count()
    }

    /// Asserts every parsed triple into `g`.
    pub fn assert_into(&self, g: &mut Graph) -> Result<ImportCounts, ModelError> {
        let mut counts = ImportCounts::default();
        for (_, t) in &self.triples {
            match g.assert_texts(t.head(), t.relation(), t.tail())?.1 {
                AssertOutcome::Inserted => counts.inserted += 1,
                AssertOutcome::AlreadyPresent => counts.duplicates += 1,
            }
        }
        Ok(counts)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ImportCounts {
    pub inserted: usize,
    pub duplicates: usize,
}

fn field_error_code(e: &FieldError) -> Code {
    match e {
        FieldError::FieldCount { .. } => Code::FieldCount,
        FieldError::EmptyField { .. } => Code::EmptyField,
        FieldError::BadEscape { .. } => Code::BadEscape,
    }
}

/// Collects parse results line by line; a bad line never stops the stream.
#[derive(Debug, Default)]
pub struct DocumentParser {
    doc: ParsedDocument,
    classes: NearDuplicateClasses,
}

impl DocumentParser {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_line(&mut self, line_number: usize, line: &str) {
        match parse_line(line) {
            Ok(WireLine::Triple(t)) => {
                for rw in &t.rewrites {
                    self.doc.diagnostics.push(Diagnostic::at_line(
                        line_number,
                        Severity::Warning,
                        Code::AliasRewrite,
                        format!("`{}` rewritten to `{}`", rw.from, rw.to),
                    ));
                }
                let class = if t.relation() == "type" {
                    Some(t.tail())
                } else if t.relation() == "class label" {
                    Some(t.head())
                } else {
                    None
                };
                if let Some(class) = class {
                    if let Some(d) = self.classes.observe(line_number, class) {
                        self.doc.diagnostics.push(d);
                    }
                }
                self.doc.triples.push((line_number, t));
            }
            Ok(WireLine::Comment | WireLine::Blank) => {}
            Err(e) => self.doc.diagnostics.push(Diagnostic::at_line(
                line_number,
                Severity::Error,
                field_error_code(&e),
                e.to_string(),
            )),
        }
    }

    pub fn finish(self) -> ParsedDocument {
        self.doc
    }
}

pub fn parse_str(input: &str) -> ParsedDocument {
    let mut parser = DocumentParser::new();
    for (i, line) in input.lines().enumerate() {
        parser.push_line(i + 1, line);
    }
    parser.finish()
}

/// Parses a whole stream. Fails only when the stream itself fails (I/O or
/// invalid UTF-8); line-level problems become diagnostics.
pub fn parse_document<R: BufRead>(mut reader: R) -> Result<ParsedDocument, PersistError> {
    let mut parser = DocumentParser::new();
    let mut buf = Vec::new();
    let mut line_number = 0;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_number += 1;
        if buf.last() == Some(&b'\n') {
            buf.pop();
        }
        let line = std::str::from_utf8(&buf).map_err(|_| PersistError::Utf8 { line: line_number })?;
        parser.push_line(line_number, line);
    }
    Ok(parser.finish())
}

/// Tracks class names seen so far, bucketed by length in chars, and flags a
/// new name within a small edit distance of an earlier one.
#[derive(Debug, Default)]
struct NearDuplicateClasses {
    seen: HashSet<String>,
    by_len: BTreeMap<usize, Vec<String>>,
}

impl NearDuplicateClasses {
    fn observe(&mut self, line: usize, name: &str) -> Option<Diagnostic> {
        if !self.seen.insert(name.to_owned()) {
            return None;
        }
        let len = name.chars().count();
        let mut found = None;
        if len >= NEAR_DUPLICATE_MIN_CHARS {
            let lo = len.saturating_sub(NEAR_DUPLICATE_MAX_EDITS);
            'outer: for (_, names) in self.by_len.range(lo..=len + NEAR_DUPLICATE_MAX_EDITS) {
                for other in names {
                    let d = strsim::levenshtein(name, other);
                    if (1..=NEAR_DUPLICATE_MAX_EDITS).contains(&d) {
                        found = Some((other.clone(), d));
                        break 'outer;
                    }
                }
            }
            self.by_len.entry(len).or_default().push(name.to_owned());
        }
        found.map(|(other, d)| {
            let mut diag = Diagnostic::at_line(
                line,
                Severity::Warning,
                Code::NearDuplicateClass,
                format!("class `{name}` is {d} edit(s) away from `{other}`; kept as a distinct text"),
            );
            diag.subject = Some(name.to_owned());
            diag
        })
    }
}
