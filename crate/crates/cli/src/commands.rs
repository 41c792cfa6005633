use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufReader, Read};
use std::path::{Path, PathBuf};

use onegraph::format::{escape_field, parse_document, serialize_triple};
use onegraph::persist::write_document;
use onegraph::semantics::{export_lines, reify as reify_triple, validate as validate_graph};
use onegraph::vocab::rewrite_aliases;
use onegraph::{
    evaluate_with, explain as explain_binding, parse_query, GraphStats, PersistError, Regime,
    Semantics, Severity, Triple,
};

use crate::fail::{Failure, ResultExt, CONTENT};
use crate::store::{emit, Store};

fn report_store_diagnostics(store: &Store) {
    for d in &store.diagnostics {
        eprintln!("og: store log: {d}");
    }
}

fn is_stdin(path: &Path) -> bool {
    path.as_os_str() == "-"
}

pub fn import(dir: &Path, files: &[PathBuf], strict: bool) -> Result<(), Failure> {
    let mut docs = Vec::with_capacity(files.len());
    let (mut warnings, mut errors) = (0, 0);
    for path in files {
        let name = path.display();
        let reader: Box<dyn Read> = if is_stdin(path) {
            Box::new(io::stdin().lock())
        } else {
            Box::new(File::open(path).io_context(|| format!("cannot open {name}"))?)
        };
        let doc = match parse_document(BufReader::new(reader)) {
            Ok(doc) => doc,
            Err(PersistError::Io(e)) => return Err(e).io_context(|| format!("cannot read {name}")),
            Err(e) => return Err(e).content_context(|| format!("{name}")),
        };
        for d in &doc.diagnostics {
            eprintln!("{name}: {d}");
        }
        warnings += doc.warning_count();
        errors += doc.error_count();
        docs.push(doc);
    }
    if strict && errors > 0 {
        eprintln!("inserted 0, duplicates 0, warnings {warnings}, errors {errors}");
        return Err(Failure::content(format!(
            "{errors} error(s) under --strict; nothing was imported"
        )));
    }

    let mut store = Store::open_write(dir)?;
    report_store_diagnostics(&store);
    let (mut inserted, mut duplicates) = (0, 0);
    for doc in &docs {
        let counts = doc
            .assert_into(&mut store.graph)
            .content_context(|| "cannot import".into())?;
        inserted += counts.inserted;
        duplicates += counts.duplicates;
    }
    store.commit()?;
    eprintln!("inserted {inserted}, duplicates {duplicates}, warnings {warnings}, errors {errors}");
    Ok(())
}

pub fn export(dir: &Path, regime: Option<Regime>, canonicalized: bool) -> Result<(), Failure> {
    let store = Store::open_read(dir)?;
    report_store_diagnostics(&store);
    let mut regime = regime.unwrap_or_default();
    if canonicalized && regime == Regime::Raw {
        regime = Regime::Canonical;
    }
    let sem = Semantics::new(&store.graph);
    let lines = export_lines(&sem, regime);
    let mut buf = Vec::new();
    write_document(&mut buf, &[], &lines).expect("writing to memory cannot fail");
    emit(std::str::from_utf8(&buf).expect("serialized documents are UTF-8"))
}

pub fn query(dir: &Path, regime: Option<Regime>, file: Option<&Path>, explain: bool) -> Result<(), Failure> {
    let (name, text) = match file {
        Some(path) if !is_stdin(path) => (
            path.display().to_string(),
            std::fs::read_to_string(path).io_context(|| format!("cannot read {}", path.display()))?,
        ),
        _ => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .io_context(|| "cannot read query from stdin".into())?;
            ("<stdin>".to_owned(), text)
        }
    };
    let q = parse_query(&text, regime.unwrap_or_default()).content_context(|| name.clone())?;
    let store = Store::open_read(dir)?;
    report_store_diagnostics(&store);
    let g = &store.graph;
    let sem = Semantics::new(g);
    let answers = evaluate_with(&sem, &q).content_context(|| name.clone())?;
    let projected = q.projected().content_context(|| name.clone())?;

    let mut out = String::new();
    let mut last_row: Option<String> = None;
    for b in &answers {
        let mut row = String::new();
        for v in &projected {
            row.push_str(&escape_field(g.text(b.values[v])));
            row.push('\t');
        }
        row.push_str(b.certainty.as_str());
        if last_row.as_ref() == Some(&row) {
            continue;
        }
        out.push_str(&row);
        out.push('\n');
        if explain {
            let proofs = explain_binding(g, &q, b).content_context(|| "cannot explain answer".into())?;
            for p in proofs {
                let line = |t: &Triple| serialize_triple(t, g.dict()).expect("stored triples resolve");
                let _ = writeln!(out, "  [{}] {}", p.pattern + 1, line(&p.triple));
                for t in &p.abstract_steps {
                    let _ = writeln!(out, "      via {}", line(t));
                }
                for t in &p.subrelation_steps {
                    let _ = writeln!(out, "      via {}", line(t));
                }
            }
        }
        last_row = Some(row);
    }
    emit(&out)
}

pub fn validate(dir: &Path) -> Result<(), Failure> {
    let store = Store::open_read(dir)?;
    report_store_diagnostics(&store);
    let findings = validate_graph(&store.graph);
    let mut out = String::new();
    for d in &findings {
        let _ = writeln!(out, "{d}");
    }
    emit(&out)?;
    let errors = findings.iter().filter(|d| d.severity == Severity::Error).count();
    let warnings = findings.len() - errors;
    eprintln!("{errors} error(s), {warnings} warning(s)");
    if errors > 0 {
        return Err(Failure::silent(CONTENT));
    }
    Ok(())
}

pub fn stats(dir: &Path) -> Result<(), Failure> {
    let store = Store::open_read(dir)?;
    report_store_diagnostics(&store);
    emit(&GraphStats::of(&store.graph).to_string())
}

pub fn reify(dir: &Path, mut texts: [String; 3], event: Option<&str>) -> Result<(), Failure> {
    for rewrite in rewrite_aliases(&mut texts) {
        eprintln!(
            "og: field {}: `{}` rewritten to `{}`",
            rewrite.field, rewrite.from, rewrite.to
        );
    }
    let mut store = Store::open_write(dir)?;
    report_store_diagnostics(&store);
    let g = &mut store.graph;
    let [h, r, t] = &texts;
    let base = match (g.lookup(h), g.lookup(r), g.lookup(t)) {
        (Some(h), Some(r), Some(t)) => Triple::new(h, r, t),
        _ => return Err(Failure::content("cannot reify a triple that is not asserted")),
    };
    let reified = reify_triple(g, base, event).content_context(|| "reify".into())?;
    let name = g.text(reified.event).to_owned();
    store.commit()?;
    emit(&format!("{}\n", escape_field(&name)))
}

pub fn canonicalize(dir: &Path, texts: &[String], strict: bool) -> Result<(), Failure> {
    let store = Store::open_read(dir)?;
    report_store_diagnostics(&store);
    let g = &store.graph;
    let sem = Semantics::new(g);
    let mut out = String::new();
    let mut failed = false;
    if texts.is_empty() {
        let mut pairs: Vec<(&str, &str)> = g
            .dict()
            .iter()
            .filter_map(|(id, text)| {
                let c = sem.canonical(id);
                (c != id).then(|| (text, g.text(c)))
            })
            .collect();
        pairs.sort();
        for (alias, canonical) in pairs {
            let _ = writeln!(out, "{}\t{}", escape_field(alias), escape_field(canonical));
        }
        if strict {
            for (id, _) in g.dict().iter() {
                if let Err(e) = sem.canonicalize(id) {
                    eprintln!("og: {e}");
                    failed = true;
                }
            }
        }
    } else {
        // One output line per input; in strict mode a text that cannot be
        // canonicalized is reported on stderr and echoed unchanged.
        for text in texts {
            let normalized = onegraph::normalize_text(text);
            let canonical = match g.lookup(text) {
                Some(id) if strict => match sem.canonicalize(id) {
                    Ok(c) => g.text(c),
                    Err(e) => {
                        eprintln!("og: {e}");
                        failed = true;
                        &normalized
                    }
                },
                Some(id) => g.text(sem.canonical(id)),
                None => {
                    if strict {
                        eprintln!("og: unknown object `{normalized}`");
                        failed = true;
                    }
                    &normalized
                }
            };
            let _ = writeln!(out, "{}", escape_field(canonical));
        }
    }
    emit(&out)?;
    if failed {
        return Err(Failure::silent(CONTENT));
    }
    Ok(())
}
