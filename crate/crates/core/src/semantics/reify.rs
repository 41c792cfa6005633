//! Promoting a triple to an event object so statements can be made about
//! the statement itself.

use std::collections::BTreeSet;

use crate::error::SemanticsError;
use crate::model::{TextId, Triple};
use crate::store::{Graph, Pattern, Term};
use crate::vocab;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventReification {
    pub event: TextId,
    pub base: Triple,
    /// Further statements about the event (date, source, ...), excluding the
    /// positional edges and its text label.
    pub extras: BTreeSet<Triple>,
}

fn extras(g: &Graph, event: TextId) -> BTreeSet<Triple> {
    g.matches(Pattern::new(event, Term::Any, Term::Any))
        .filter(|t| !vocab::POSITIONAL.contains(&t.relation) && t.relation != vocab::TEXT_LABEL)
        .collect()
}

/// Default event name: the three texts joined by single spaces.
pub fn default_event_name(g: &Graph, base: &Triple) -> String {
    let (h, r, t) = g.triple_texts(base);
    format!("{h} {r} {t}")
}

/// Links an event object to the three positions of `base` and labels it
/// `Description`. Calling it again for the same event and base is a no-op.
pub fn reify(
    g: &mut Graph,
    base: Triple,
    event_name: Option<&str>,
) -> Result<EventReification, SemanticsError> {
    if !g.contains(&base) {
        return Err(SemanticsError::BaseNotAsserted);
    }
    let name = match event_name {
        Some(n) => n.to_owned(),
        None => default_event_name(g, &base),
    };
    let event = g.intern(&name)?;
    let wanted = [base.head, base.relation, base.tail];
    for (rel, want) in vocab::POSITIONAL.into_iter().zip(wanted) {
        if g.objects(event, rel).any(|have| have != want) {
            return Err(SemanticsError::EventNameCollision {
                event: g.text(event).to_owned(),
            });
        }
    }
    for (rel, want) in vocab::POSITIONAL.into_iter().zip(wanted) {
        g.assert_triple(Triple::new(event, rel, want));
    }
    if g.objects(event, vocab::TEXT_LABEL).next().is_none() {
        g.assert_triple(Triple::new(event, vocab::TEXT_LABEL, vocab::DESCRIPTION));
    }
    Ok(EventReification {
        event,
        base,
        extras: extras(g, event),
    })
}

/// Every well-formed reification in the graph: events with exactly one
/// edge per position whose reassembled triple is stored.
pub fn reifications(g: &Graph) -> Vec<EventReification> {
    event_candidates(g)
        .into_iter()
        .filter_map(|e| {
            let one = |rel| {
                let mut it = g.objects(e, rel);
                match (it.next(), it.next()) {
                    (Some(v), None) => Some(v),
                    _ => None,
                }
            };
            let base = Triple::new(one(vocab::SUBJECT)?, one(vocab::RELATION)?, one(vocab::OBJECT)?);
            g.contains(&base).then(|| EventReification {
                event: e,
                base,
                extras: extras(g, e),
            })
        })
        .collect()
}

/// Objects with at least one positional out-edge.
pub(crate) fn event_candidates(g: &Graph) -> BTreeSet<TextId> {
    vocab::POSITIONAL
        .iter()
        .flat_map(|&rel| g.matches(Pattern::new(Term::Any, rel, Term::Any)).map(|t| t.head))
        .collect()
}
