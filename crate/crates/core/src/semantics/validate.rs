//! Whole-graph consistency checks.

use std::collections::{BTreeSet, HashMap};

use petgraph::algo::tarjan_scc;
use petgraph::graphmap::DiGraphMap;

use super::literal::{is_number_literal, is_time_literal};
use super::reify::event_candidates;
use super::Semantics;
use crate::diag::{Code, Diagnostic, Severity};
use crate::error::{ModelError, SemanticsError};
use crate::labels::{dimension_name, is_valid_label_value, label_set_of};
use crate::model::{TextId, Triple};
use crate::store::{Graph, Pattern, Term};
use crate::vocab;

/// Runs every check and returns the findings sorted by code and subject.
/// Never fails; an empty list means the graph is clean.
pub fn validate(g: &Graph) -> Vec<Diagnostic> {
    let sem = Semantics::new(g);
    let mut out = Vec::new();
    check_abstracts(&sem, &mut out);
    check_cycles(g, sem.type_edges(), Code::TypeCycle, "type", &mut out);
    check_cycles(
        g,
        sem.subrelation_edges(),
        Code::SubRelationCycle,
        "sub-relation of",
        &mut out,
    );
    check_labels(g, &mut out);
    check_reifications(g, &mut out);
    check_literals(g, &mut out);
    out.sort_by(|a, b| (a.code, &a.subject, &a.message).cmp(&(b.code, &b.subject, &b.message)));
    out.dedup();
    out
}

fn check_abstracts(sem: &Semantics<'_>, out: &mut Vec<Diagnostic>) {
    let g = sem.graph();
    for x in sem.objects_with_abstract_edges() {
        let Err(e) = sem.canonicalize(x) else {
            continue;
        };
        let code = match &e {
            SemanticsError::AmbiguousAbstract { .. } => Code::AmbiguousAbstract,
            SemanticsError::NonAbstractTarget { .. } => Code::NonAbstractTarget,
            SemanticsError::ChainedAbstract { .. } => Code::ChainedAbstract,
            _ => unreachable!("canonicalize only reports abstract-edge errors"),
        };
        out.push(Diagnostic::finding(Severity::Error, code, g.text(x), e.to_string()));
        // A single bad target can be both unlabeled and chained.
        if code == Code::NonAbstractTarget && sem.abstract_edge_count(x) == 1 {
            if let Some(target) = g.objects(x, vocab::ABSTRACT_TO).find(|&t| t != x) {
                if sem.abstract_edge_count(target) > 0 {
                    out.push(Diagnostic::finding(
                        Severity::Error,
                        Code::ChainedAbstract,
                        g.text(x),
                        SemanticsError::ChainedAbstract {
                            object: g.text(x).to_owned(),
                            target: g.text(target).to_owned(),
                        }
                        .to_string(),
                    ));
                }
            }
        }
    }
}

fn check_cycles(
    g: &Graph,
    edges: &HashMap<TextId, Vec<TextId>>,
    code: Code,
    relation: &str,
    out: &mut Vec<Diagnostic>,
) {
    let mut dg: DiGraphMap<TextId, ()> = DiGraphMap::new();
    for (&from, tos) in edges {
        for &to in tos {
            dg.add_edge(from, to, ());
        }
    }
    for scc in tarjan_scc(&dg) {
        let cyclic = scc.len() > 1 || dg.contains_edge(scc[0], scc[0]);
        if !cyclic {
            continue;
        }
        let mut names: Vec<&str> = scc.iter().map(|&n| g.text(n)).collect();
        names.sort_unstable();
        out.push(Diagnostic::finding(
            Severity::Warning,
            code,
            names[0],
            format!("`{relation}` cycle through {}", names.join(", ")),
        ));
    }
}

fn check_labels(g: &Graph, out: &mut Vec<Diagnostic>) {
    let mut labeled = BTreeSet::new();
    for rel in vocab::LABEL_RELATIONS {
        for t in g.matches(Pattern::new(Term::Any, rel, Term::Any)) {
            labeled.insert(t.head);
            if !is_valid_label_value(rel, t.tail) {
                out.push(Diagnostic::finding(
                    Severity::Warning,
                    Code::UnknownLabelValue,
                    g.text(t.head),
                    format!("`{}` is not a {} value", g.text(t.tail), dimension_name(rel)),
                ));
            }
        }
    }
    for obj in labeled {
        // label_set_of stops at the first conflicting dimension; report all.
        for rel in vocab::LABEL_RELATIONS {
            let values: Vec<TextId> = g
                .objects(obj, rel)
                .filter(|&v| is_valid_label_value(rel, v))
                .collect();
            if values.len() > 1 {
                let e = ModelError::ConflictingLabel {
                    object: g.text(obj).to_owned(),
                    dimension: dimension_name(rel),
                    values: values.iter().map(|&v| g.text(v).to_owned()).collect(),
                };
                out.push(Diagnostic::finding(
                    Severity::Error,
                    Code::ConflictingLabel,
                    g.text(obj),
                    e.to_string(),
                ));
            }
        }
        debug_assert_eq!(
            label_set_of(g, obj).is_err(),
            out.iter()
                .any(|d| d.code == Code::ConflictingLabel && d.subject.as_deref() == Some(g.text(obj)))
        );
    }
}

fn check_reifications(g: &Graph, out: &mut Vec<Diagnostic>) {
    for e in event_candidates(g) {
        let values: Vec<Vec<TextId>> = vocab::POSITIONAL
            .iter()
            .map(|&rel| g.objects(e, rel).collect())
            .collect();
        let missing: Vec<&str> = vocab::POSITIONAL
            .iter()
            .zip(&values)
            .filter(|(_, v)| v.is_empty())
            .map(|(&rel, _)| g.text(rel))
            .collect();
        if !missing.is_empty() {
            out.push(Diagnostic::finding(
                Severity::Error,
                Code::IncompleteReification,
                g.text(e),
                format!("event has no `{}` edge", missing.join("`, `")),
            ));
            continue;
        }
        let repeated: Vec<&str> = vocab::POSITIONAL
            .iter()
            .zip(&values)
            .filter(|(_, v)| v.len() > 1)
            .map(|(&rel, _)| g.text(rel))
            .collect();
        if !repeated.is_empty() {
            out.push(Diagnostic::finding(
                Severity::Error,
                Code::AmbiguousReification,
                g.text(e),
                format!("event has several `{}` edges", repeated.join("`, `")),
            ));
            continue;
        }
        let base = Triple::new(values[0][0], values[1][0], values[2][0]);
        if !g.contains(&base) {
            let (h, r, t) = g.triple_texts(&base);
            out.push(Diagnostic::finding(
                Severity::Error,
                Code::DanglingReification,
                g.text(e),
                format!(
                    "reified triple `{}` is not asserted",
                    crate::format::serialize_texts(h, r, t)
                ),
            ));
        }
    }
}

fn check_literals(g: &Graph, out: &mut Vec<Diagnostic>) {
    for x in g.subjects(vocab::FORMAT_LABEL, vocab::TIME) {
        if !is_time_literal(g.text(x)) {
            out.push(Diagnostic::finding(
                Severity::Warning,
                Code::BadTimeFormat,
                g.text(x),
                "labeled Time but is not YYYY, YYYY-MM, YYYY-MM-DD[Thh:mm:ss] or YYYY.MM.DD",
            ));
        }
    }
    for x in g.subjects(vocab::FORMAT_LABEL, vocab::NUMBER) {
        if !is_number_literal(g.text(x)) {
            out.push(Diagnostic::finding(
                Severity::Warning,
                Code::BadNumberFormat,
                g.text(x),
                "labeled Number but is not a decimal number",
            ));
        }
    }
}
