//! `og`: work with a onegraph store directory from the shell.
//!
//! Data goes to stdout, reports and diagnostics to stderr. Exit status is 0
//! on success, 1 for user or content errors and 2 for I/O and environment
//! errors.

mod commands;
mod fail;
mod store;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use onegraph::Regime;

use crate::fail::{Failure, CONTENT};

#[derive(Debug, Parser)]
#[command(name = "og", version, about = "Text-native knowledge graph store")]
struct Cli {
    /// Store directory (snapshot, log and lock file).
    #[arg(long, env = "OG_STORE", global = true)]
    store: Option<PathBuf>,

    /// Inference regime: raw, canonical or full. A REGIME line in a query
    /// file takes precedence.
    #[arg(long, global = true, value_parser = parse_regime)]
    regime: Option<Regime>,

    #[command(subcommand)]
    command: Command,
}

fn parse_regime(s: &str) -> Result<Regime, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Import .ogt files ("-" reads stdin).
    Import {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Commit nothing if any line has an error.
        #[arg(long)]
        strict: bool,
    },
    /// Print the graph as a sorted .ogt document.
    Export {
        /// Replace heads and tails by their canonical objects.
        #[arg(long)]
        canonicalized: bool,
    },
    /// Evaluate a query file (or stdin) and print one row per answer.
    Query {
        file: Option<PathBuf>,
        /// Print the supporting triples under each row.
        #[arg(long)]
        explain: bool,
    },
    /// Check the graph; exits 1 if any error-severity finding is reported.
    Validate,
    /// Print summary counts.
    Stats,
    /// Turn a stored triple into an event object.
    Reify {
        head: String,
        relation: String,
        tail: String,
        /// Event name; defaults to the three texts joined by spaces.
        #[arg(long)]
        event: Option<String>,
    },
    /// Print the canonical object of each text, or every alias if none given.
    Canonicalize {
        texts: Vec<String>,
        /// Fail on ambiguous or invalid `abstract to` edges instead of
        /// leaving the text as is.
        #[arg(long)]
        strict: bool,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    let store = cli
        .store
        .ok_or_else(|| Failure::content("no store given; pass --store or set OG_STORE"))?;
    let regime = cli.regime;
    match cli.command {
        Command::Import { files, strict } => commands::import(&store, &files, strict),
        Command::Export { canonicalized } => commands::export(&store, regime, canonicalized),
        Command::Query { file, explain } => commands::query(&store, regime, file.as_deref(), explain),
        Command::Validate => commands::validate(&store),
        Command::Stats => commands::stats(&store),
        Command::Reify {
            head,
            relation,
            tail,
            event,
        } => commands::reify(&store, [head, relation, tail], event.as_deref()),
        Command::Canonicalize { texts, strict } => commands::canonicalize(&store, &texts, strict),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(CONTENT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = format!("{:#}", f.error);
            if !msg.is_empty() {
                eprintln!("og: {msg}");
            }
            ExitCode::from(f.code)
        }
    }
}
