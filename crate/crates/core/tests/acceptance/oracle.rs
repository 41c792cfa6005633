//! Reference implementations written directly against the triple set,
//! without going through the engine's indexes or semantic view.

use std::collections::{BTreeMap, BTreeSet};

use onegraph::{vocab, Graph, Query, QueryTerm, Regime, TextId, Triple};

pub fn triples(g: &Graph) -> Vec<Triple> {
    g.iter().collect()
}

/// `x -> target` for every object with exactly one non-self `abstract to`
/// edge whose target is labeled Abstract and has no such edge of its own.
pub fn canonical_map(ts: &[Triple]) -> BTreeMap<TextId, TextId> {
    let mut out: BTreeMap<TextId, BTreeSet<TextId>> = BTreeMap::new();
    for t in ts {
        if t.relation == vocab::ABSTRACT_TO && t.head != t.tail {
            out.entry(t.head).or_default().insert(t.tail);
        }
    }
    let labeled: BTreeSet<TextId> = ts
        .iter()
        .filter(|t| t.relation == vocab::TEXT_LABEL && t.tail == vocab::ABSTRACT)
        .map(|t| t.head)
        .collect();
    out.iter()
        .filter_map(|(&x, targets)| {
            let &[target] = targets.iter().collect::<Vec<_>>().as_slice() else {
                return None;
            };
            (labeled.contains(target) && !out.contains_key(target)).then_some((x, *target))
        })
        .collect()
}

pub fn canon(map: &BTreeMap<TextId, TextId>, x: TextId) -> TextId {
    map.get(&x).copied().unwrap_or(x)
}

/// Reflexive-transitive closure of `edges` over `nodes` by boolean
/// Floyd–Warshall.
#[allow(clippy::needless_range_loop)]
pub fn warshall(nodes: &[TextId], edges: &[(TextId, TextId)]) -> BTreeMap<TextId, BTreeSet<TextId>> {
    let index: BTreeMap<TextId, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let k = nodes.len();
    let mut m = vec![vec![false; k]; k];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in edges {
        m[index[a]][index[b]] = true;
    }
    for via in 0..k {
        for i in 0..k {
            if m[i][via] {
                for j in 0..k {
                    if m[via][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
    }
    nodes
        .iter()
        .enumerate()
        .map(|(i, &n)| (n, (0..k).filter(|&j| m[i][j]).map(|j| nodes[j]).collect()))
        .collect()
}

/// Nodes reachable from `start` over one or more edges, by BFS.
pub fn reachable(edges: &[(TextId, TextId)], start: TextId) -> BTreeSet<TextId> {
    let mut seen = BTreeSet::new();
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        for &(a, b) in edges {
            if a == n && seen.insert(b) {
                queue.push_back(b);
            }
        }
    }
    seen
}

/// Relations that reach `r` over zero or more `sub-relation of` edges.
fn subrelations(ts: &[Triple], r: TextId) -> BTreeSet<TextId> {
    let mut set = BTreeSet::from([r]);
    loop {
        let before = set.len();
        for t in ts {
            if t.relation == vocab::SUB_RELATION_OF && set.contains(&t.tail) {
                set.insert(t.head);
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// Nested-loop join in the written pattern order, scanning every triple for
/// every partial binding. Heads and tails compare canonically outside the
/// raw regime; constant relations widen to sub-relations in the full regime.
pub fn evaluate(g: &Graph, q: &Query) -> BTreeSet<Vec<TextId>> {
    let ts = triples(g);
    let map = canonical_map(&ts);
    let cn = |x: TextId| if q.regime == Regime::Raw { x } else { canon(&map, x) };
    let vars = q.variables();
    let mut partial: BTreeSet<BTreeMap<&str, TextId>> = BTreeSet::from([BTreeMap::new()]);
    for p in &q.patterns {
        let terms = [&p.head, &p.relation, &p.tail];
        let mut consts: [Option<Option<TextId>>; 3] = [None; 3];
        for (i, term) in terms.iter().enumerate() {
            if let QueryTerm::Const(text) = term {
                consts[i] = Some(g.lookup(text));
            }
        }
        let rel_set = match consts[1] {
            Some(Some(r)) if q.regime == Regime::Full => Some(subrelations(&ts, r)),
            _ => None,
        };
        let mut next = BTreeSet::new();
        for b in &partial {
            'triples: for t in &ts {
                let values = [cn(t.head), t.relation, cn(t.tail)];
                let mut b2 = b.clone();
                for (i, term) in terms.iter().enumerate() {
                    match term {
                        QueryTerm::Var(name) => match b2.get(name.as_str()) {
                            Some(&have) if have != values[i] => continue 'triples,
                            Some(_) => {}
                            None => {
                                b2.insert(name.as_str(), values[i]);
                            }
                        },
                        QueryTerm::Const(_) => {
                            let Some(Some(id)) = consts[i] else { continue 'triples };
                            let ok = match (i, &rel_set) {
                                (1, Some(set)) => set.contains(&t.relation),
                                (1, None) => id == t.relation,
                                _ => cn(id) == values[i],
                            };
                            if !ok {
                                continue 'triples;
                            }
                        }
                    }
                }
                next.insert(b2);
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|b| vars.iter().map(|v| b[v.as_str()]).collect())
        .collect()
}
