//! Textual query syntax.
//!
//! ```text
//! # keynote speakers
//! REGIME full
//! SELECT ?x
//! ?x □ type □ ISWC2022 Keynot Speaker
//! ```
//!
//! Pattern lines use the `.ogt` field syntax; a field starting with `?` is a
//! variable. `REGIME` and `SELECT` header lines are optional and may appear
//! at most once each, before the first pattern.

use super::{Query, QueryTerm, VarPattern};
use crate::error::QueryError;
use crate::format::{decode_field, split_fields};
use crate::semantics::Regime;
use crate::vocab;

fn syntax(line: usize, column: usize, message: impl Into<String>) -> QueryError {
    QueryError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn parse_var(name: &str, line: usize, column: usize) -> Result<String, QueryError> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '?') {
        return Err(syntax(line, column, format!("invalid variable name `?{name}`")));
    }
    Ok(name.to_owned())
}

/// Column (1-based) of the first non-space char of `raw`, given the column
/// at which `raw` starts.
fn content_column(raw: &str, start: usize) -> usize {
    start + raw.chars().take_while(|c| c.is_ascii_whitespace()).count()
}

fn parse_pattern(line: &str, n: usize) -> Result<VarPattern, QueryError> {
    let fields = split_fields(line);
    if fields.len() != 3 {
        return Err(syntax(
            n,
            1,
            format!("expected 3 fields separated by \u{25A1}, found {}", fields.len()),
        ));
    }
    let mut terms = Vec::with_capacity(3);
    for (i, (col, raw)) in fields.into_iter().enumerate() {
        let trimmed = raw.trim_matches(|c: char| c.is_ascii_whitespace());
        let column = content_column(raw, col);
        let term = match trimmed.strip_prefix('?') {
            Some(name) => QueryTerm::Var(parse_var(name, n, column)?),
            None => QueryTerm::Const(decode_field(raw, col, i + 1).map_err(|e| {
                syntax(n, e.column().unwrap_or(column), e.to_string())
            })?),
        };
        terms.push(term);
    }
    let tail = terms.pop().unwrap();
    let relation = terms.pop().unwrap();
    let head = terms.pop().unwrap();
    let relation = match relation {
        QueryTerm::Const(r) => QueryTerm::Const(vocab::relation_alias(&r).map_or(r, str::to_owned)),
        v => v,
    };
    let tail = match (&relation, tail) {
        (QueryTerm::Const(r), QueryTerm::Const(t)) if vocab::is_label_relation_text(r) => {
            QueryTerm::Const(vocab::marker_alias(&t).map_or(t, str::to_owned))
        }
        (_, t) => t,
    };
    Ok(VarPattern::new(head, relation, tail))
}

/// Parses a query document. `default_regime` applies when there is no
/// `REGIME` line.
pub fn parse_query(text: &str, default_regime: Regime) -> Result<Query, QueryError> {
    let mut regime = None;
    let mut projection: Option<Vec<String>> = None;
    let mut patterns = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let mut words = line.split_ascii_whitespace();
        let keyword = words.next().unwrap_or_default();
        let is_header = !line.contains(crate::format::SEPARATOR);
        if is_header && keyword.eq_ignore_ascii_case("REGIME") {
            let kw_col = content_column(line, 1);
            if !patterns.is_empty() || regime.is_some() {
                return Err(syntax(n, kw_col, "REGIME must appear once, before the patterns"));
            }
            let value: Vec<&str> = words.collect();
            let value_col = line.find(value.first().copied().unwrap_or("")).unwrap_or(0) + 1;
            let [value] = value.as_slice() else {
                return Err(syntax(n, value_col, "expected `REGIME raw|canonical|full`"));
            };
            regime = Some(value.parse::<Regime>().map_err(|e| syntax(n, value_col, e))?);
        } else if is_header && keyword.eq_ignore_ascii_case("SELECT") {
            let kw_col = content_column(line, 1);
            if !patterns.is_empty() || projection.is_some() {
                return Err(syntax(n, kw_col, "SELECT must appear once, before the patterns"));
            }
            let mut vars = Vec::new();
            let mut rest = &line[line.find(keyword).unwrap() + keyword.len()..];
            let mut offset = line.len() - rest.len();
            for word in rest.split_ascii_whitespace() {
                let at = rest.find(word).unwrap();
                let column = line[..offset + at].chars().count() + 1;
                rest = &rest[at + word.len()..];
                offset += at + word.len();
                if word == "*" {
                    continue;
                }
                match word.strip_prefix('?') {
                    Some(name) => vars.push(parse_var(name, n, column)?),
                    None => return Err(syntax(n, column, format!("expected a variable, found `{word}`"))),
                }
            }
            projection = Some(vars);
        } else {
            patterns.push(parse_pattern(line, n)?);
        }
    }
    if patterns.is_empty() {
        return Err(syntax(text.lines().count().max(1), 1, "query has no patterns"));
    }
    let query = Query {
        patterns,
        regime: regime.unwrap_or(default_regime),
        projection: projection.unwrap_or_default(),
    };
    query.projected()?;
    Ok(query)
}
