//! Deterministic workloads for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use onegraph::Graph;

/// `(head, relation, tail)` texts drawn from `objects` objects and
/// `relations` relations.
pub fn random_texts(seed: u64, n: usize, objects: usize, relations: usize) -> Vec<[String; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            [
                format!("object {}", rng.gen_range(0..objects)),
                format!("relation {}", rng.gen_range(0..relations)),
                format!("object {}", rng.gen_range(0..objects)),
            ]
        })
        .collect()
}

/// A graph with a class hierarchy, typed members, aliases and a
/// sub-relation chain on top of random plain edges.
pub fn semantic_graph(seed: u64, n: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let objects = (n / 4).max(10);
    let mut g = Graph::new();
    for [h, r, t] in random_texts(seed, n, objects, 8) {
        g.assert_texts(&h, &r, &t).unwrap();
    }
    for i in 0..n / 10 {
        let member = format!("object {}", rng.gen_range(0..objects));
        g.assert_texts(&member, "type", &format!("class {}", i % 20)).unwrap();
    }
    for c in 1..20 {
        g.assert_texts(&format!("class {c}"), "type", &format!("class {}", c / 2)).unwrap();
    }
    for i in 0..n / 50 {
        let target = format!("object {}", rng.gen_range(0..objects));
        g.assert_texts(&target, "text label", "Abstract").unwrap();
        g.assert_texts(&format!("alias {i}"), "abstract to", &target).unwrap();
        g.assert_texts(&format!("alias {i}"), "relation 0", &format!("object {}", i % objects)).unwrap();
    }
    for r in 1..8 {
        g.assert_texts(&format!("relation {r}"), "sub-relation of", &format!("relation {}", r - 1)).unwrap();
    }
    g
}

pub fn build(texts: &[[String; 3]]) -> Graph {
    let mut g = Graph::new();
    for [h, r, t] in texts {
        g.assert_texts(h, r, t).unwrap();
    }
    g
}
