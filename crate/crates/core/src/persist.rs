//! Snapshot files and the append-only mutation log.
//!
//! A snapshot is an `.ogt` document whose first line is
//! `#ogsnapshot v1 <triple-count> <sha256 of the rest of the file>`. It lists
//! every non-reserved dictionary text in id order as `#dict <escaped text>`
//! comment lines, followed by the triples sorted bytewise. Because the
//! dictionary lines and the header are comments, a snapshot is also a plain
//! `.ogt` file.
//!
//! The log (`.oglog`) holds one `+ <wire line>` or `- <wire line>` per
//! applied mutation. A final line without its newline is a torn write and is
//! dropped with a warning.

use std::collections::BTreeSet;
use std::io::{self, Read, Write};

use sha2::{Digest, Sha256};

use crate::diag::{Code, Diagnostic, Severity};
use crate::error::{FieldError, PersistError};
use crate::format::{decode_field, escape_field, split_fields, unescape_field};
use crate::model::Triple;
use crate::store::{Graph, LogEntry, LogOp};
use crate::vocab::RESERVED_TEXTS;

pub const SNAPSHOT_MAGIC: &str = "#ogsnapshot";
pub const SNAPSHOT_VERSION: &str = "v1";
const DICT_PREFIX: &str = "#dict ";

/// Serialized triples of `g`, sorted bytewise.
pub fn sorted_lines(g: &Graph) -> Vec<String> {
    let lines: BTreeSet<String> = g
        .iter()
        .map(|t| {
            let (h, r, tl) = g.triple_texts(&t);
            crate::format::serialize_texts(h, r, tl)
        })
        .collect();
    lines.into_iter().collect()
}

fn checksum(body: &[u8]) -> String {
    Sha256::digest(body)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn header(count: usize, body: &[u8]) -> String {
    format!("{SNAPSHOT_MAGIC} {SNAPSHOT_VERSION} {count} {}\n", checksum(body))
}

/// Writes `lines` (already sorted and deduplicated) as an `.ogt` document
/// under a snapshot header, preceded by the given comment lines.
pub fn write_document<W: Write>(
    mut sink: W,
    comments: &[String],
    lines: &[String],
) -> io::Result<()> {
    let mut body = String::new();
    for c in comments {
        body.push_str(c);
        body.push('\n');
    }
    for l in lines {
        body.push_str(l);
        body.push('\n');
    }
    sink.write_all(header(lines.len(), body.as_bytes()).as_bytes())?;
    sink.write_all(body.as_bytes())?;
    sink.flush()
}

pub fn save_snapshot<W: Write>(g: &Graph, sink: W) -> io::Result<()> {
    let dict: Vec<String> = g
        .dict()
        .iter()
        .skip(RESERVED_TEXTS.len())
        .map(|(_, text)| format!("{DICT_PREFIX}{}", escape_field(text)))
        .collect();
    write_document(sink, &dict, &sorted_lines(g))
}

/// Splits a stored wire line into its three texts without alias rewriting,
/// so that persisted texts come back byte-identical.
fn decode_stored_line(line: &str) -> Result<[String; 3], FieldError> {
    let raw = split_fields(line);
    if raw.len() != 3 {
        return Err(FieldError::FieldCount { found: raw.len() });
    }
    let mut fields: [String; 3] = Default::default();
    for (i, (col, text)) in raw.into_iter().enumerate() {
        fields[i] = decode_field(text, col, i + 1)?;
    }
    Ok(fields)
}

fn load_snapshot_into(g: &mut Graph, text: &str) -> Result<(), PersistError> {
    if text.is_empty() {
        return Ok(());
    }
    let (head, body) = match text.find('\n') {
        Some(p) => (&text[..p], &text[p + 1..]),
        None => (text, ""),
    };
    let parts: Vec<&str> = head.split(' ').collect();
    let [magic, version, count, expected] = parts.as_slice() else {
        return Err(PersistError::BadHeader(head.to_owned()));
    };
    if *magic != SNAPSHOT_MAGIC || *version != SNAPSHOT_VERSION {
        return Err(PersistError::BadHeader(head.to_owned()));
    }
    let count: usize = count
        .parse()
        .map_err(|_| PersistError::BadHeader(head.to_owned()))?;
    let actual = checksum(body.as_bytes());
    if actual != *expected {
        return Err(PersistError::CorruptSnapshot {
            expected: (*expected).to_owned(),
            actual,
        });
    }
    let mut triples = 0;
    for (i, line) in body.lines().enumerate() {
        let line_number = i + 2;
        if let Some(dict) = line.strip_prefix(DICT_PREFIX) {
            let text = unescape_field(dict, DICT_PREFIX.len() + 1).map_err(|source| {
                PersistError::BadSnapshotLine {
                    line: line_number,
                    source,
                }
            })?;
            g.intern(&text)?;
            continue;
        }
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let [h, r, t] = decode_stored_line(line).map_err(|source| PersistError::BadSnapshotLine {
            line: line_number,
            source,
        })?;
        g.assert_texts(&h, &r, &t)?;
        triples += 1;
    }
    if triples != count {
        return Err(PersistError::CountMismatch {
            expected: count,
            actual: triples,
        });
    }
    Ok(())
}

/// Parses one complete log line.
pub fn parse_log_line(line: &str) -> Result<(LogOp, [String; 3]), String> {
    let op = match line.as_bytes().first() {
        Some(b'+') => LogOp::Assert,
        Some(b'-') => LogOp::Retract,
        _ => return Err("entry must start with `+` or `-`".to_owned()),
    };
    let rest = line[1..]
        .strip_prefix(' ')
        .ok_or_else(|| "missing space after the entry sign".to_owned())?;
    let fields = decode_stored_line(rest).map_err(|e| e.to_string())?;
    Ok((op, fields))
}

/// Applies log entries read from `source` to `g`. Returns a warning when a
/// torn final entry was dropped.
pub fn replay_log<R: Read>(g: &mut Graph, mut source: R) -> Result<Vec<Diagnostic>, PersistError> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    let mut diagnostics = Vec::new();
    let mut complete = &bytes[..];
    if let Some(last) = bytes.iter().rposition(|&b| b == b'\n').map(|p| p + 1) {
        complete = &bytes[..last];
    } else if !bytes.is_empty() {
        complete = &[];
    }
    let line_count = complete.iter().filter(|&&b| b == b'\n').count();
    if complete.len() < bytes.len() {
        diagnostics.push(Diagnostic::at_line(
            line_count + 1,
            Severity::Warning,
            Code::TruncatedLog,
            format!(
                "dropped a partial trailing log entry of {} bytes",
                bytes.len() - complete.len()
            ),
        ));
    }
    for (i, raw) in complete.split(|&b| b == b'\n').take(line_count).enumerate() {
        let line = std::str::from_utf8(raw).map_err(|_| PersistError::Utf8 { line: i + 1 })?;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.is_empty() {
            continue;
        }
        let (op, [h, r, t]) =
            parse_log_line(line).map_err(|message| PersistError::BadLogEntry {
                line: i + 1,
                message,
            })?;
        match op {
            LogOp::Assert => {
                g.assert_texts(&h, &r, &t)?;
            }
            LogOp::Retract => {
                g.retract_texts(&h, &r, &t);
            }
        }
    }
    Ok(diagnostics)
}

pub fn append_log<W: Write>(mut sink: W, entries: &[LogEntry]) -> io::Result<()> {
    let mut buf = String::new();
    for e in entries {
        buf.push_str(&e.to_string());
        buf.push('\n');
    }
    sink.write_all(buf.as_bytes())?;
    sink.flush()
}

#[derive(Debug)]
pub struct Loaded {
    pub graph: Graph,
    pub diagnostics: Vec<Diagnostic>,
}

/// Rebuilds a graph from a snapshot and the log written after it. The
/// returned graph has an empty in-memory log; later mutations are relative
/// to the loaded state.
pub fn load<S: Read, L: Read>(snapshot: Option<S>, log: Option<L>) -> Result<Loaded, PersistError> {
    let mut graph = Graph::new();
    if let Some(mut s) = snapshot {
        let mut text = String::new();
        let mut bytes = Vec::new();
        s.read_to_end(&mut bytes)?;
        text.push_str(std::str::from_utf8(&bytes).map_err(|e| PersistError::Utf8 {
            line: bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1,
        })?);
        load_snapshot_into(&mut graph, &text)?;
    }
    let diagnostics = match log {
        Some(l) => replay_log(&mut graph, l)?,
        None => Vec::new(),
    };
    graph.clear_log();
    Ok(Loaded { graph, diagnostics })
}

/// Every stored triple as texts; equality of this set is graph equality.
pub fn text_triples(g: &Graph) -> BTreeSet<(String, String, String)> {
    g.iter()
        .map(|t: Triple| {
            let (h, r, tl) = g.triple_texts(&t);
            (h.to_owned(), r.to_owned(), tl.to_owned())
        })
        .collect()
}
