//! Summary counts over a graph.

use std::collections::BTreeSet;
use std::fmt;

use crate::labels::{is_abstract, is_complete};
use crate::model::TextId;
use crate::store::{Graph, Pattern, Term};
use crate::vocab;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GraphStats {
    /// Distinct texts occurring in some triple.
    pub objects: usize,
    pub triples: usize,
    /// Tails of `type` plus heads of `class label`.
    pub classes: usize,
    pub complete_classes: usize,
    /// Objects labeled Abstract.
    pub abstract_objects: usize,
    /// Objects with at least one `subject`/`relation`/`object` edge.
    pub events: usize,
    /// Relations with a `sub-relation of` edge to some other relation.
    pub subrelations: usize,
}

impl GraphStats {
    pub fn of(g: &Graph) -> Self {
        let mut objects = BTreeSet::new();
        for t in g.iter() {
            objects.extend([t.head, t.relation, t.tail]);
        }
        let classes: BTreeSet<TextId> = g
            .matches(Pattern::new(Term::Any, vocab::TYPE, Term::Any))
            .map(|t| t.tail)
            .chain(g.matches(Pattern::new(Term::Any, vocab::CLASS_LABEL, Term::Any)).map(|t| t.head))
            .collect();
        let events: BTreeSet<TextId> = vocab::POSITIONAL
            .iter()
            .flat_map(|&r| g.matches(Pattern::new(Term::Any, r, Term::Any)).map(|t| t.head))
            .collect();
        let subrelations: BTreeSet<TextId> = g
            .matches(Pattern::new(Term::Any, vocab::SUB_RELATION_OF, Term::Any))
            .filter(|t| t.head != t.tail)
            .map(|t| t.head)
            .collect();
        GraphStats {
            objects: objects.len(),
            triples: g.len(),
            complete_classes: classes.iter().filter(|&&c| is_complete(g, c)).count(),
            classes: classes.len(),
            abstract_objects: objects.iter().filter(|&&o| is_abstract(g, o)).count(),
            events: events.len(),
            subrelations: subrelations.len(),
        }
    }

    /// `(name, value)` pairs in report order.
    pub fn rows(&self) -> [(&'static str, usize); 7] {
        [
            ("objects", self.objects),
            ("triples", self.triples),
            ("classes", self.classes),
            ("complete classes", self.complete_classes),
            ("abstract objects", self.abstract_objects),
            ("events", self.events),
            ("relations with super-relations", self.subrelations),
        ]
    }
}

impl fmt::Display for GraphStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, value) in self.rows() {
            writeln!(f, "{name}\t{value}")?;
        }
        Ok(())
    }
}
