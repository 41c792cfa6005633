//! Conjunctive triple-pattern queries.
//!
//! A query is a list of patterns whose positions are constants or `?name`
//! variables. Answers are the natural join of each pattern's matches under
//! the query's [`Regime`]. Outside the raw regime, head and tail variables
//! bind to canonical objects, so two aliases of one object join; relation
//! variables always bind to the stored relation.
//!
//! Patterns are evaluated as an index nested-loop join, most constrained
//! pattern first.

mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use parse::parse_query;

use crate::error::QueryError;
use crate::labels::is_complete;
use crate::model::{TextId, Triple};
use crate::semantics::{RelationTerm, Regime, Semantics};
use crate::store::{Graph, Term};
use crate::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QueryTerm {
    Const(String),
    Var(String),
}

impl QueryTerm {
    pub fn var(name: &str) -> Self {
        QueryTerm::Var(name.to_owned())
    }

    pub fn text(text: &str) -> Self {
        QueryTerm::Const(text.to_owned())
    }

    fn var_name(&self) -> Option<&str> {
        match self {
            QueryTerm::Var(v) => Some(v),
            QueryTerm::Const(_) => None,
        }
    }
}

impl fmt::Display for QueryTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryTerm::Var(v) => write!(f, "?{v}"),
            QueryTerm::Const(c) => f.write_str(&crate::format::escape_field(c)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarPattern {
    pub head: QueryTerm,
    pub relation: QueryTerm,
    pub tail: QueryTerm,
}

impl VarPattern {
    pub fn new(head: QueryTerm, relation: QueryTerm, tail: QueryTerm) -> Self {
        VarPattern {
            head,
            relation,
            tail,
        }
    }

    fn terms(&self) -> [&QueryTerm; 3] {
        [&self.head, &self.relation, &self.tail]
    }
}

impl fmt::Display for VarPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} \u{25A1} {} \u{25A1} {}", self.head, self.relation, self.tail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub patterns: Vec<VarPattern>,
    pub regime: Regime,
    /// Projected variables; empty means every variable in order of first
    /// appearance.
    pub projection: Vec<String>,
}

impl Query {
    pub fn new(patterns: Vec<VarPattern>, regime: Regime) -> Self {
        Query {
            patterns,
            regime,
            projection: Vec::new(),
        }
    }

    pub fn select(mut self, vars: &[&str]) -> Self {
        self.projection = vars.iter().map(|v| v.to_string()).collect();
        self
    }

    /// Variables in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for p in &self.patterns {
            for v in p.terms().into_iter().filter_map(QueryTerm::var_name) {
                if !out.iter().any(|o| o == v) {
                    out.push(v.to_owned());
                }
            }
        }
        out
    }

    pub fn projected(&self) -> Result<Vec<String>, QueryError> {
        let vars = self.variables();
        if self.projection.is_empty() {
            return Ok(vars);
        }
        for p in &self.projection {
            if !vars.contains(p) {
                return Err(QueryError::UnboundProjection(p.clone()));
            }
        }
        Ok(self.projection.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BindingCertainty {
    Certain,
    PossiblyIncomplete,
}

impl BindingCertainty {
    pub fn as_str(self) -> &'static str {
        match self {
            BindingCertainty::Certain => "certain",
            BindingCertainty::PossiblyIncomplete => "possibly-incomplete",
        }
    }
}

/// One answer: a value for every variable of the query.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Binding {
    pub values: BTreeMap<String, TextId>,
    pub certainty: BindingCertainty,
    /// Graph version the binding was computed against.
    pub version: u64,
}

impl Binding {
    pub fn get(&self, var: &str) -> Option<TextId> {
        self.values.get(var).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Const(TextId),
    Var(usize),
}

#[derive(Debug, Clone)]
struct Compiled {
    slots: Vec<[Slot; 3]>,
    vars: Vec<String>,
}

/// Resolves constants against the dictionary. `None` when some constant is
/// unknown, in which case no pattern containing it can match.
fn compile(g: &Graph, q: &Query) -> Option<Compiled> {
    let vars = q.variables();
    let mut slots = Vec::with_capacity(q.patterns.len());
    for p in &q.patterns {
        let mut s = [Slot::Var(0); 3];
        for (i, term) in p.terms().into_iter().enumerate() {
            s[i] = match term {
                QueryTerm::Var(v) => Slot::Var(vars.iter().position(|x| x == v).unwrap()),
                QueryTerm::Const(c) => Slot::Const(g.lookup(c)?),
            };
        }
        slots.push(s);
    }
    Some(Compiled { slots, vars })
}

/// Value a stored triple contributes for each position under `regime`.
pub(crate) fn position_values(sem: &Semantics<'_>, t: &Triple, regime: Regime) -> [TextId; 3] {
    match regime {
        Regime::Raw => [t.head, t.relation, t.tail],
        Regime::Canonical | Regime::Full => [sem.canonical(t.head), t.relation, sem.canonical(t.tail)],
    }
}

/// Extends `binding` with the values of `t` for pattern `slots`; `None` on
/// any disagreement.
fn unify(slots: &[Slot; 3], values: [TextId; 3], binding: &[Option<TextId>]) -> Option<Vec<Option<TextId>>> {
    let mut out = binding.to_vec();
    for (slot, value) in slots.iter().zip(values) {
        if let Slot::Var(v) = *slot {
            match out[v] {
                Some(have) if have != value => return None,
                Some(_) => {}
                None => out[v] = Some(value),
            }
        }
    }
    Some(out)
}

/// Candidate stored triples for one pattern given the partial binding.
/// Constant relations are widened to their sub-relations in the full regime;
/// relations coming from variables are always matched exactly.
fn candidates(
    sem: &Semantics<'_>,
    slots: &[Slot; 3],
    binding: &[Option<TextId>],
    regime: Regime,
) -> Vec<Triple> {
    let term = |slot: Slot| match slot {
        Slot::Const(c) => Term::Bound(c),
        Slot::Var(v) => binding[v].map_or(Term::Any, Term::Bound),
    };
    let relation = match slots[1] {
        Slot::Const(r) if regime == Regime::Full => RelationTerm::AnyOf(sem.subrelations(r)),
        Slot::Const(r) => RelationTerm::Exact(r),
        Slot::Var(v) => binding[v].map_or(RelationTerm::Any, RelationTerm::Exact),
    };
    sem.match_with(term(slots[0]), relation, term(slots[2]), regime)
}

/// Greedy join order: repeatedly take the pattern with the most positions
/// already fixed (constants or bound variables), earliest first on ties.
fn join_order(c: &Compiled) -> Vec<usize> {
    let mut bound = vec![false; c.vars.len()];
    let mut left: Vec<usize> = (0..c.slots.len()).collect();
    let mut order = Vec::with_capacity(left.len());
    while !left.is_empty() {
        let score = |i: usize| {
            c.slots[i]
                .iter()
                .filter(|s| match s {
                    Slot::Const(_) => true,
                    Slot::Var(v) => bound[*v],
                })
                .count()
        };
        let (pos, &best) = left
            .iter()
            .enumerate()
            .max_by_key(|&(pos, &i)| (score(i), std::cmp::Reverse(pos)))
            .unwrap();
        left.remove(pos);
        for s in &c.slots[best] {
            if let Slot::Var(v) = s {
                bound[*v] = true;
            }
        }
        order.push(best);
    }
    order
}

/// `PossiblyIncomplete` iff some `(?x, type, C)` pattern names a class that
/// is not labeled Complete.
fn certainty(g: &Graph, c: &Compiled) -> BindingCertainty {
    let incomplete = c.slots.iter().any(|s| match s {
        [Slot::Var(_), Slot::Const(r), Slot::Const(class)] if *r == vocab::TYPE => !is_complete(g, *class),
        _ => false,
    });
    if incomplete {
        BindingCertainty::PossiblyIncomplete
    } else {
        BindingCertainty::Certain
    }
}

fn sort_key(g: &Graph, b: &Binding, projected: &[String], all: &[String]) -> Vec<String> {
    projected
        .iter()
        .chain(all.iter().filter(|v| !projected.contains(v)))
        .map(|v| g.text(b.values[v]).to_owned())
        .collect()
}

/// All bindings of `q` over `g`, sorted by the texts of the projected
/// variables (then the remaining ones).
pub fn evaluate(g: &Graph, q: &Query) -> Result<Vec<Binding>, QueryError> {
    let sem = Semantics::new(g);
    evaluate_with(&sem, q)
}

/// As [`evaluate`], reusing an existing semantic view.
pub fn evaluate_with(sem: &Semantics<'_>, q: &Query) -> Result<Vec<Binding>, QueryError> {
    let g = sem.graph();
    let projected = q.projected()?;
    let Some(compiled) = compile(g, q) else {
        return Ok(Vec::new());
    };
    let order = join_order(&compiled);
    let certainty = certainty(g, &compiled);

    let mut rows: BTreeSet<Vec<TextId>> = BTreeSet::new();
    let mut stack: Vec<(usize, Vec<Option<TextId>>)> = vec![(0, vec![None; compiled.vars.len()])];
    while let Some((depth, binding)) = stack.pop() {
        if depth == order.len() {
            rows.insert(binding.into_iter().map(|v| v.expect("every variable is bound")).collect());
            continue;
        }
        let slots = &compiled.slots[order[depth]];
        for t in candidates(sem, slots, &binding, q.regime) {
            if let Some(next) = unify(slots, position_values(sem, &t, q.regime), &binding) {
                stack.push((depth + 1, next));
            }
        }
    }

    let mut out: Vec<Binding> = rows
        .into_iter()
        .map(|row| Binding {
            values: compiled.vars.iter().cloned().zip(row).collect(),
            certainty,
            version: g.version(),
        })
        .collect();
    out.sort_by_cached_key(|b| sort_key(g, b, &projected, &compiled.vars));
    Ok(out)
}

/// Why one pattern holds for a binding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternProof {
    pub pattern: usize,
    /// The stored triple that satisfies the pattern.
    pub triple: Triple,
    /// `abstract to` triples followed to equate texts with canonical objects.
    pub abstract_steps: Vec<Triple>,
    /// `sub-relation of` triples from the stored relation up to the
    /// pattern's relation.
    pub subrelation_steps: Vec<Triple>,
}

impl PatternProof {
    /// Every stored triple the proof relies on.
    pub fn cited(&self) -> impl Iterator<Item = &Triple> {
        std::iter::once(&self.triple)
            .chain(&self.abstract_steps)
            .chain(&self.subrelation_steps)
    }
}

/// Reconstructs, for each pattern, a stored triple supporting `b` plus the
/// closure steps used to accept it.
pub fn explain(g: &Graph, q: &Query, b: &Binding) -> Result<Vec<PatternProof>, QueryError> {
    if b.version != g.version() {
        return Err(QueryError::StaleBinding {
            binding: b.version,
            graph: g.version(),
        });
    }
    let sem = Semantics::new(g);
    let compiled = compile(g, q).ok_or(QueryError::Unsatisfied(0))?;
    let binding: Vec<Option<TextId>> = compiled.vars.iter().map(|v| b.values.get(v).copied()).collect();
    let mut proofs = Vec::with_capacity(compiled.slots.len());
    for (i, slots) in compiled.slots.iter().enumerate() {
        let triple = candidates(&sem, slots, &binding, q.regime)
            .into_iter()
            .find(|t| unify(slots, position_values(&sem, t, q.regime), &binding).is_some())
            .ok_or(QueryError::Unsatisfied(i))?;
        let mut abstract_steps = Vec::new();
        let mut subrelation_steps = Vec::new();
        if q.regime != Regime::Raw {
            for (pos, stored) in [(0, triple.head), (2, triple.tail)] {
                abstract_steps.extend(sem.abstract_step(stored));
                if let Slot::Const(c) = slots[pos] {
                    if c != stored {
                        abstract_steps.extend(sem.abstract_step(c));
                    }
                }
            }
            abstract_steps.sort();
            abstract_steps.dedup();
        }
        if let (Regime::Full, Slot::Const(r)) = (q.regime, slots[1]) {
            if r != triple.relation {
                subrelation_steps = sem
                    .subrelation_path(triple.relation, r)
                    .expect("a matched sub-relation has a path to its super-relation");
            }
        }
        proofs.push(PatternProof {
            pattern: i,
            triple,
            abstract_steps,
            subrelation_steps,
        });
    }
    Ok(proofs)
}
