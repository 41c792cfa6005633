//! Graph semantics over raw storage: abstract-identity canonicalization,
//! `type` and `sub-relation of` closures, class completeness, reification
//! and validation.
//!
//! [`Semantics`] is a read-only view built once per graph version. Nothing
//! is materialized into the store; every inference happens at query time.

mod export;
mod literal;
mod reify;
mod validate;

use std::collections::{BTreeSet, HashMap};

pub use export::export_lines;
pub use literal::{is_number_literal, is_time_literal};
pub use reify::{reifications, reify, EventReification};
pub use validate::validate;

use crate::error::SemanticsError;
use crate::labels::{is_abstract, is_complete};
use crate::model::{TextId, Triple};
use crate::store::{Graph, Pattern, Term};
use crate::vocab;

/// How much inference a match applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Regime {
    /// Stored triples only.
    #[default]
    Raw,
    /// Heads and tails compared by canonical object.
    Canonical,
    /// Canonical, plus sub-relations satisfy their super-relations.
    Full,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Raw, Regime::Canonical, Regime::Full];

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Raw => "raw",
            Regime::Canonical => "canonical",
            Regime::Full => "full",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "raw" => Ok(Regime::Raw),
            "canonical" => Ok(Regime::Canonical),
            "full" => Ok(Regime::Full),
            other => Err(format!("unknown regime `{other}` (expected raw, canonical or full)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Certainty {
    /// The class is Complete: the stored members are all members.
    Exact,
    /// The class is Incomplete: there may be more members.
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipAnswer {
    pub members: BTreeSet<TextId>,
    pub certainty: Certainty,
}

impl MembershipAnswer {
    pub fn count(&self) -> MemberCount {
        MemberCount {
            count: self.members.len(),
            kind: match self.certainty {
                Certainty::Exact => CountKind::Exact,
                Certainty::LowerBound => CountKind::AtLeast,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountKind {
    Exact,
    AtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MemberCount {
    pub count: usize,
    pub kind: CountKind,
}

/// Outgoing `abstract to` edges of one object, self loops excluded.
#[derive(Debug, Clone, PartialEq, Eq)]
enum AbstractEdges {
    One(TextId),
    Many(Vec<TextId>),
}

/// Read-only semantic view of a graph.
#[derive(Debug)]
pub struct Semantics<'g> {
    graph: &'g Graph,
    abstract_edges: HashMap<TextId, AbstractEdges>,
    canon: HashMap<TextId, TextId>,
    aliases: HashMap<TextId, Vec<TextId>>,
    type_up: HashMap<TextId, Vec<TextId>>,
    type_down: HashMap<TextId, Vec<TextId>>,
    rel_up: HashMap<TextId, Vec<TextId>>,
    rel_down: HashMap<TextId, Vec<TextId>>,
}

fn push_edge(map: &mut HashMap<TextId, Vec<TextId>>, from: TextId, to: TextId) {
    let v = map.entry(from).or_default();
    if !v.contains(&to) {
        v.push(to);
    }
}

/// Nodes reachable from `start` over `edges`. `start` itself is included
/// only when reachable through at least one edge, unless `reflexive`.
fn reachable(edges: &HashMap<TextId, Vec<TextId>>, start: TextId, reflexive: bool) -> BTreeSet<TextId> {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<TextId> = edges.get(&start).cloned().unwrap_or_default();
    if reflexive {
        seen.insert(start);
    }
    while let Some(n) = stack.pop() {
        if seen.insert(n) {
            if let Some(next) = edges.get(&n) {
                stack.extend(next.iter().copied().filter(|m| !seen.contains(m)));
            }
        }
    }
    seen
}

impl<'g> Semantics<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        let mut grouped: HashMap<TextId, Vec<TextId>> = HashMap::new();
        for t in graph.matches(Pattern::new(Term::Any, vocab::ABSTRACT_TO, Term::Any)) {
            if t.head != t.tail {
                grouped.entry(t.head).or_default().push(t.tail);
            }
        }
        let abstract_edges: HashMap<TextId, AbstractEdges> = grouped
            .into_iter()
            .map(|(x, targets)| {
                let e = if targets.len() == 1 {
                    AbstractEdges::One(targets[0])
                } else {
                    AbstractEdges::Many(targets)
                };
                (x, e)
            })
            .collect();

        let mut canon = HashMap::new();
        let mut aliases: HashMap<TextId, Vec<TextId>> = HashMap::new();
        for (&x, edges) in &abstract_edges {
            if let AbstractEdges::One(target) = edges {
                if is_abstract(graph, *target) && !abstract_edges.contains_key(target) {
                    canon.insert(x, *target);
                    aliases.entry(*target).or_default().push(x);
                }
            }
        }
        for v in aliases.values_mut() {
            v.sort();
        }

        let mut s = Semantics {
            graph,
            abstract_edges,
            canon,
            aliases,
            type_up: HashMap::new(),
            type_down: HashMap::new(),
            rel_up: HashMap::new(),
            rel_down: HashMap::new(),
        };
        for t in graph.matches(Pattern::new(Term::Any, vocab::TYPE, Term::Any)) {
            let (h, c) = (s.canonical(t.head), s.canonical(t.tail));
            push_edge(&mut s.type_up, h, c);
            push_edge(&mut s.type_down, c, h);
        }
        for t in graph.matches(Pattern::new(Term::Any, vocab::SUB_RELATION_OF, Term::Any)) {
            push_edge(&mut s.rel_up, t.head, t.tail);
            push_edge(&mut s.rel_down, t.tail, t.head);
        }
        s
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Canonical object of `x`, falling back to `x` itself whenever its
    /// `abstract to` edges are missing or invalid.
    pub fn canonical(&self, x: TextId) -> TextId {
        self.canon.get(&x).copied().unwrap_or(x)
    }

    /// Strict canonicalization: invalid `abstract to` edges are errors.
    pub fn canonicalize(&self, x: TextId) -> Result<TextId, SemanticsError> {
        let g = self.graph;
        match self.abstract_edges.get(&x) {
            None => Ok(x),
            Some(AbstractEdges::Many(targets)) => Err(SemanticsError::AmbiguousAbstract {
                object: g.text(x).to_owned(),
                targets: targets.iter().map(|&t| g.text(t).to_owned()).collect(),
            }),
            Some(AbstractEdges::One(target)) => {
                if !is_abstract(g, *target) {
                    Err(SemanticsError::NonAbstractTarget {
                        object: g.text(x).to_owned(),
                        target: g.text(*target).to_owned(),
                    })
                } else if self.abstract_edges.contains_key(target) {
                    Err(SemanticsError::ChainedAbstract {
                        object: g.text(x).to_owned(),
                        target: g.text(*target).to_owned(),
                    })
                } else {
                    Ok(*target)
                }
            }
        }
    }

    /// Every object whose canonical object equals that of `x`, sorted.
    pub fn equivalents(&self, x: TextId) -> Vec<TextId> {
        let c = self.canonical(x);
        let mut out = vec![c];
        if let Some(a) = self.aliases.get(&c) {
            out.extend(a.iter().copied());
        }
        out.sort();
        out
    }

    /// Objects with at least one valid alias pointing at them.
    pub fn canonical_targets(&self) -> impl Iterator<Item = TextId> + '_ {
        self.aliases.keys().copied()
    }

    /// Classes reachable from `canonical(x)` through one or more `type`
    /// edges, with edge endpoints canonicalized.
    pub fn type_closure(&self, x: TextId) -> BTreeSet<TextId> {
        reachable(&self.type_up, self.canonical(x), false)
    }

    /// Objects from which `canonical(c)` is reachable through one or more
    /// `type` edges.
    pub fn type_descendants(&self, c: TextId) -> BTreeSet<TextId> {
        reachable(&self.type_down, self.canonical(c), false)
    }

    /// `r` and every relation it is a (transitive) sub-relation of.
    pub fn subrelation_closure(&self, r: TextId) -> BTreeSet<TextId> {
        reachable(&self.rel_up, r, true)
    }

    /// `r` and every relation that is a (transitive) sub-relation of it.
    pub fn subrelations(&self, r: TextId) -> BTreeSet<TextId> {
        reachable(&self.rel_down, r, true)
    }

    /// Shortest chain of stored `sub-relation of` triples leading from `from`
    /// up to `to`; empty when they are the same relation.
    pub fn subrelation_path(&self, from: TextId, to: TextId) -> Option<Vec<Triple>> {
        let mut parent: HashMap<TextId, TextId> = HashMap::new();
        let mut queue = std::collections::VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(n) = queue.pop_front() {
            if n == to {
                let mut path = Vec::new();
                let mut cur = to;
                while cur != from {
                    let p = parent[&cur];
                    path.push(Triple::new(p, vocab::SUB_RELATION_OF, cur));
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &next in self.rel_up.get(&n).into_iter().flatten() {
                if seen.insert(next) {
                    parent.insert(next, n);
                    queue.push_back(next);
                }
            }
        }
        None
    }

    /// The stored `abstract to` triple that maps `x` to its canonical
    /// object, if `x` is not canonical itself.
    pub fn abstract_step(&self, x: TextId) -> Option<Triple> {
        self.canon
            .get(&x)
            .map(|&c| Triple::new(x, vocab::ABSTRACT_TO, c))
    }

    pub(crate) fn type_edges(&self) -> &HashMap<TextId, Vec<TextId>> {
        &self.type_up
    }

    pub(crate) fn subrelation_edges(&self) -> &HashMap<TextId, Vec<TextId>> {
        &self.rel_up
    }

    pub(crate) fn abstract_edge_count(&self, x: TextId) -> usize {
        match self.abstract_edges.get(&x) {
            None => 0,
            Some(AbstractEdges::One(_)) => 1,
            Some(AbstractEdges::Many(v)) => v.len(),
        }
    }

    pub(crate) fn objects_with_abstract_edges(&self) -> impl Iterator<Item = TextId> + '_ {
        self.abstract_edges.keys().copied()
    }

    /// Stored triples matching `p` under `regime`, deduplicated and in
    /// `(head, relation, tail)` id order. The triples are returned as
    /// stored, not canonicalized.
    pub fn infer_match(&self, p: Pattern, regime: Regime) -> Vec<Triple> {
        let relations = match (regime, p.relation) {
            (Regime::Full, Term::Bound(r)) => RelationTerm::AnyOf(self.subrelations(r)),
            (_, Term::Bound(r)) => RelationTerm::Exact(r),
            (_, Term::Any) => RelationTerm::Any,
        };
        self.match_with(p.head, relations, p.tail, regime)
    }

    /// Core matcher shared with the query engine. Head and tail constants are
    /// widened to their canonical equivalents outside the raw regime.
    pub(crate) fn match_with(
        &self,
        head: Term,
        relation: RelationTerm,
        tail: Term,
        regime: Regime,
    ) -> Vec<Triple> {
        let widen = |t: Term| -> Vec<Term> {
            match (t, regime) {
                (Term::Bound(x), Regime::Canonical | Regime::Full) => {
                    self.equivalents(x).into_iter().map(Term::Bound).collect()
                }
                (t, _) => vec![t],
            }
        };
        let heads = widen(head);
        let tails = widen(tail);
        let relations: Vec<Term> = match relation {
            RelationTerm::Any => vec![Term::Any],
            RelationTerm::Exact(r) => vec![Term::Bound(r)],
            RelationTerm::AnyOf(set) => set.into_iter().map(Term::Bound).collect(),
        };
        let mut out = BTreeSet::new();
        for &h in &heads {
            for &r in &relations {
                for &t in &tails {
                    out.extend(self.graph.matches(Pattern {
                        head: h,
                        relation: r,
                        tail: t,
                    }));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Canonicalized heads of `(X, type, c)` triples. Exact iff `c` is
    /// labeled Complete.
    pub fn class_membership(&self, c: TextId) -> MembershipAnswer {
        let members = self
            .graph
            .subjects(vocab::TYPE, c)
            .map(|x| self.canonical(x))
            .collect();
        MembershipAnswer {
            members,
            certainty: if is_complete(self.graph, c) {
                Certainty::Exact
            } else {
                Certainty::LowerBound
            },
        }
    }

    pub fn count_members(&self, c: TextId) -> MemberCount {
        self.class_membership(c).count()
    }

    /// Everything below `c` in the `type` hierarchy. Exact only when `c` and
    /// every class beneath it (every descendant that has members of its own)
    /// are Complete.
    pub fn class_membership_closure(&self, c: TextId) -> MembershipAnswer {
        let members = self.type_descendants(c);
        let exact = is_complete(self.graph, c)
            && members
                .iter()
                .filter(|m| self.type_down.contains_key(m))
                .all(|&m| is_complete(self.graph, m));
        MembershipAnswer {
            members,
            certainty: if exact {
                Certainty::Exact
            } else {
                Certainty::LowerBound
            },
        }
    }
}

/// Relation constraint of a match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RelationTerm {
    Any,
    Exact(TextId),
    AnyOf(BTreeSet<TextId>),
}
