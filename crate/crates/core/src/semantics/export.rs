use std::collections::BTreeSet;

use super::{Regime, Semantics};
use crate::format::serialize_texts;
use crate::model::Triple;
use crate::vocab;

/// Triples whose endpoints are kept as stored when canonicalizing: the
/// alias edges themselves and label assignments.
fn keeps_endpoints(t: &Triple) -> bool {
    t.relation == vocab::ABSTRACT_TO || vocab::LABEL_RELATIONS.contains(&t.relation)
}

/// Wire lines describing the graph under `regime`, sorted bytewise.
///
/// - `Raw`: the stored triples.
/// - `Canonical`: heads and tails replaced by their canonical objects,
///   except in `abstract to` and label triples.
/// - `Full`: as `Canonical`, plus one triple per super-relation each triple
///   entails.
pub fn export_lines(sem: &Semantics<'_>, regime: Regime) -> Vec<String> {
    let g = sem.graph();
    let mut out = BTreeSet::new();
    for t in g.iter() {
        let (h, tl) = if regime == Regime::Raw || keeps_endpoints(&t) {
            (t.head, t.tail)
        } else {
            (sem.canonical(t.head), sem.canonical(t.tail))
        };
        let relations = if regime == Regime::Full {
            sem.subrelation_closure(t.relation)
        } else {
            BTreeSet::from([t.relation])
        };
        for r in relations {
            out.insert(serialize_texts(g.text(h), g.text(r), g.text(tl)));
        }
    }
    out.into_iter().collect()
}
