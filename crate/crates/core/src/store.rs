//! Deduplicated triple set with three cyclic permutation indexes and an
//! in-memory mutation log.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Bound as RangeBound;

use crate::error::ModelError;
use crate::format::serialize_texts;
use crate::model::{Dictionary, TextId, Triple};
use crate::vocab;

/// One position of a [`Pattern`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    Bound(TextId),
    Any,
}

impl Term {
    pub fn matches(self, id: TextId) -> bool {
        match self {
            Term::Bound(b) => b == id,
            Term::Any => true,
        }
    }

    pub fn bound(self) -> Option<TextId> {
        match self {
            Term::Bound(b) => Some(b),
            Term::Any => None,
        }
    }
}

impl From<TextId> for Term {
    fn from(id: TextId) -> Self {
        Term::Bound(id)
    }
}

impl From<Option<TextId>> for Term {
    fn from(id: Option<TextId>) -> Self {
        id.map_or(Term::Any, Term::Bound)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub head: Term,
    pub relation: Term,
    pub tail: Term,
}

impl Pattern {
    pub const ANY: Pattern = Pattern {
        head: Term::Any,
        relation: Term::Any,
        tail: Term::Any,
    };

    pub fn new(head: impl Into<Term>, relation: impl Into<Term>, tail: impl Into<Term>) -> Self {
        Pattern {
            head: head.into(),
            relation: relation.into(),
            tail: tail.into(),
        }
    }

    pub fn matches(&self, t: &Triple) -> bool {
        self.head.matches(t.head) && self.relation.matches(t.relation) && self.tail.matches(t.tail)
    }

    /// The index whose key order makes the bound positions a prefix.
    pub fn preferred_index(&self) -> IndexKind {
        let (h, r, t) = (
            self.head.bound().is_some(),
            self.relation.bound().is_some(),
            self.tail.bound().is_some(),
        );
        match (h, r, t) {
            (true, true, _) | (true, false, false) | (false, false, false) => IndexKind::Hrt,
            (false, true, _) => IndexKind::Rth,
            (_, false, true) => IndexKind::Thr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexKind {
    Hrt,
    Rth,
    Thr,
}

impl IndexKind {
    pub const ALL: [IndexKind; 3] = [IndexKind::Hrt, IndexKind::Rth, IndexKind::Thr];

    fn key(self, t: &Triple) -> Key {
        match self {
            IndexKind::Hrt => (t.head, t.relation, t.tail),
            IndexKind::Rth => (t.relation, t.tail, t.head),
            IndexKind::Thr => (t.tail, t.head, t.relation),
        }
    }

    fn triple(self, (a, b, c): Key) -> Triple {
        match self {
            IndexKind::Hrt => Triple::new(a, b, c),
            IndexKind::Rth => Triple::new(c, a, b),
            IndexKind::Thr => Triple::new(b, c, a),
        }
    }

    fn key_terms(self, p: &Pattern) -> (Term, Term, Term) {
        match self {
            IndexKind::Hrt => (p.head, p.relation, p.tail),
            IndexKind::Rth => (p.relation, p.tail, p.head),
            IndexKind::Thr => (p.tail, p.head, p.relation),
        }
    }
}

type Key = (TextId, TextId, TextId);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogOp {
    Assert,
    Retract,
}

impl LogOp {
    pub fn sign(self) -> char {
        match self {
            LogOp::Assert => '+',
            LogOp::Retract => '-',
        }
    }
}

/// A single applied mutation. `line` is the wire form of the triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogEntry {
    pub seq: u64,
    pub op: LogOp,
    pub line: String,
}

impl fmt::Display for LogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.op.sign(), self.line)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssertOutcome {
    Inserted,
    AlreadyPresent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RetractOutcome {
    Removed,
    NotPresent,
}

/// An in-memory graph.
///
/// `hrt` doubles as the triple set; `rth` and `thr` always hold the same
/// triples under their own key order. `version` advances on every effective
/// mutation.
#[derive(Debug, Clone)]
pub struct Graph {
    dict: Dictionary,
    hrt: BTreeSet<Key>,
    rth: BTreeSet<Key>,
    thr: BTreeSet<Key>,
    log: Vec<LogEntry>,
    next_seq: u64,
    version: u64,
}

impl Default for Graph {
    fn default() -> Self {
        Self::new()
    }
}

impl Graph {
    /// Creates an empty graph with the reserved vocabulary pre-interned.
    pub fn new() -> Self {
        let mut dict = Dictionary::new();
        for (i, text) in vocab::RESERVED_TEXTS.iter().enumerate() {
            let id = dict.intern(text).expect("reserved texts are non-empty");
            debug_assert_eq!(id.index(), i);
        }
        Graph {
            dict,
            hrt: BTreeSet::new(),
            rth: BTreeSet::new(),
            thr: BTreeSet::new(),
            log: Vec::new(),
            next_seq: 0,
            version: 0,
        }
    }

    pub fn dict(&self) -> &Dictionary {
        &self.dict
    }

    pub fn intern(&mut self, text: &str) -> Result<TextId, ModelError> {
        self.dict.intern(text)
    }

    pub fn lookup(&self, text: &str) -> Option<TextId> {
        self.dict.lookup(text)
    }

    /// Text of an id issued by this graph.
    ///
    /// Panics on ids from another dictionary.
    pub fn text(&self, id: TextId) -> &str {
        self.dict
            .text(id)
            .unwrap_or_else(|| panic!("text id {id} was not issued by this graph"))
    }

    pub fn is_reserved(&self, id: TextId) -> bool {
        self.dict.text(id).is_some_and(vocab::is_reserved_text)
    }

    pub fn len(&self) -> usize {
        self.hrt.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hrt.is_empty()
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    /// Drops the in-memory log, e.g. after it has been persisted into a
    /// snapshot. Sequence numbers keep increasing.
    pub fn clear_log(&mut self) {
        self.log.clear();
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.hrt.contains(&IndexKind::Hrt.key(t))
    }

    /// All triples in `(head, relation, tail)` id order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.hrt.iter().map(|&k| IndexKind::Hrt.triple(k))
    }

    pub fn triple_texts(&self, t: &Triple) -> (&str, &str, &str) {
        (self.text(t.head), self.text(t.relation), self.text(t.tail))
    }

    pub fn assert_triple(&mut self, t: Triple) -> AssertOutcome {
        self.check_ids(&t);
        if !self.hrt.insert(IndexKind::Hrt.key(&t)) {
            return AssertOutcome::AlreadyPresent;
        }
        self.rth.insert(IndexKind::Rth.key(&t));
        self.thr.insert(IndexKind::Thr.key(&t));
        self.record(LogOp::Assert, &t);
        AssertOutcome::Inserted
    }

    pub fn retract_triple(&mut self, t: Triple) -> RetractOutcome {
        if !self.hrt.remove(&IndexKind::Hrt.key(&t)) {
            return RetractOutcome::NotPresent;
        }
        self.rth.remove(&IndexKind::Rth.key(&t));
        self.thr.remove(&IndexKind::Thr.key(&t));
        self.record(LogOp::Retract, &t);
        RetractOutcome::Removed
    }

    /// Interns three texts and asserts the triple they form.
    pub fn assert_texts(
        &mut self,
        head: &str,
        relation: &str,
        tail: &str,
    ) -> Result<(Triple, AssertOutcome), ModelError> {
        let t = Triple::new(self.intern(head)?, self.intern(relation)?, self.intern(tail)?);
        Ok((t, self.assert_triple(t)))
    }

    /// Retracts the triple formed by three texts; unknown texts mean the
    /// triple cannot be present.
    pub fn retract_texts(&mut self, head: &str, relation: &str, tail: &str) -> RetractOutcome {
        match (self.lookup(head), self.lookup(relation), self.lookup(tail)) {
            (Some(h), Some(r), Some(t)) => self.retract_triple(Triple::new(h, r, t)),
            _ => RetractOutcome::NotPresent,
        }
    }

    /// Triples matching `p` via the index that makes its bound positions a
    /// prefix, in that index's key order.
    pub fn matches(&self, p: Pattern) -> Box<dyn Iterator<Item = Triple> + '_> {
        self.matches_via(p, p.preferred_index())
    }

    /// Triples matching `p` read from a specific index. Bound positions that
    /// do not form a prefix of the index key are filtered after the range
    /// scan.
    pub fn matches_via(&self, p: Pattern, index: IndexKind) -> Box<dyn Iterator<Item = Triple> + '_> {
        let set = match index {
            IndexKind::Hrt => &self.hrt,
            IndexKind::Rth => &self.rth,
            IndexKind::Thr => &self.thr,
        };
        let (a, b, c) = index.key_terms(&p);
        let (lo, hi) = match (a.bound(), b.bound(), c.bound()) {
            (Some(a), Some(b), Some(c)) => ((a, b, c), (a, b, c)),
            (Some(a), Some(b), None) => ((a, b, TextId::MIN), (a, b, TextId::MAX)),
            (Some(a), None, _) => ((a, TextId::MIN, TextId::MIN), (a, TextId::MAX, TextId::MAX)),
            (None, _, _) => {
                return Box::new(
                    set.iter()
                        .map(move |&k| index.triple(k))
                        .filter(move |t| p.matches(t)),
                )
            }
        };
        Box::new(
            set.range((RangeBound::Included(lo), RangeBound::Included(hi)))
                .map(move |&k| index.triple(k))
                .filter(move |t| p.matches(t)),
        )
    }

    /// Objects `o` with a stored `(subject, relation, o)` triple.
    pub fn objects(&self, subject: TextId, relation: TextId) -> impl Iterator<Item = TextId> + '_ {
        self.matches(Pattern::new(subject, relation, Term::Any))
            .map(|t| t.tail)
    }

    /// Subjects `s` with a stored `(s, relation, object)` triple.
    pub fn subjects(&self, relation: TextId, object: TextId) -> impl Iterator<Item = TextId> + '_ {
        self.matches(Pattern::new(Term::Any, relation, object))
            .map(|t| t.head)
    }

    fn check_ids(&self, t: &Triple) {
        let n = self.dict.len();
        assert!(
            t.head.index() < n && t.relation.index() < n && t.tail.index() < n,
            "triple {t:?} uses ids not issued by this graph"
        );
    }

    fn record(&mut self, op: LogOp, t: &Triple) {
        let (h, r, tl) = self.triple_texts(t);
        let line = serialize_texts(h, r, tl);
        self.log.push(LogEntry {
            seq: self.next_seq,
            op,
            line,
        });
        self.next_seq += 1;
        self.version += 1;
    }
}
