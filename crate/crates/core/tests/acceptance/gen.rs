//! Seeded generators shared by the acceptance criteria.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use onegraph::{normalize_text, vocab, Graph};

/// Characters chosen to stress the wire format: the separator, escape
/// characters, control characters, a comment marker, combining marks and
/// several scripts.
const ADVERSARIAL: &[char] = &[
    'a', 'b', 'Z', '0', '7', ' ', ' ', '.', '-', '?', '#', 'q', 'n', 't',
    '\u{25A1}', '\\', '\n', '\t', '\r', '\u{00A0}', '\u{0301}', 'é', 'ß', 'Ω', 'Ж',
    '中', '文', 'ك', 'ب', 'ה', 'अ', '😀', '\u{200D}', '\u{FEFF}',
];

/// A non-empty normalized text that no reader would rewrite as an alias.
pub fn adversarial_text(rng: &mut ChaCha8Rng) -> String {
    loop {
        let len = rng.gen_range(1..=24);
        let raw: String = (0..len).map(|_| *ADVERSARIAL.choose(rng).unwrap()).collect();
        let text = normalize_text(&raw);
        if !text.is_empty() && vocab::relation_alias(&text).is_none() && vocab::marker_alias(&text).is_none() {
            return text;
        }
    }
}

/// Names `prefix0..prefixN`.
pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn pick<'a>(rng: &mut ChaCha8Rng, items: &'a [String]) -> &'a str {
    items.choose(rng).unwrap()
}

/// A random graph over `objects` and `relations` mixing plain edges with
/// `type`, `sub-relation of`, `abstract to` and Abstract labels.
pub fn semantic_graph(rng: &mut ChaCha8Rng, objects: &[String], relations: &[String], triples: usize) -> Graph {
    let mut g = Graph::new();
    for _ in 0..triples {
        let roll = rng.gen_range(0..100);
        let (h, r, t) = match roll {
            0..=54 => (pick(rng, objects), pick(rng, relations), pick(rng, objects)),
            55..=69 => (pick(rng, objects), "type", pick(rng, objects)),
            70..=79 => (pick(rng, relations), "sub-relation of", pick(rng, relations)),
            80..=91 => (pick(rng, objects), "abstract to", pick(rng, objects)),
            _ => (pick(rng, objects), "text label", "Abstract"),
        };
        g.assert_texts(h, r, t).unwrap();
    }
    g
}
