//! `qml`: command-line front end and local explorer service.
//!
//! Every subcommand prints one JSON document on stdout and a one-line
//! summary on stderr. Bad flags exit with 2, domain errors with 1 and an
//! `{"error": ...}` object on stdout.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use qml_core::enumeration::{DEFAULT_CLASS_LIMIT, DEFAULT_GENERATION_BUDGET};
use qml_core::json::error_to_value;
use qml_core::QuiverError;
use serde_json::{json, Value};
use thiserror::Error;

pub mod commands;
pub mod service;
pub mod suite;

/// Environment variable overriding the default enumeration limit.
pub const LIMIT_ENV: &str = "QML_LIMIT";
pub const DEFAULT_PORT: u16 = 8787;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),

    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },

    #[error("{LIMIT_ENV} must be a positive integer, got {0:?}")]
    BadLimit(String),

    #[error("{0}")]
    Check(String),

    #[error("service: {0}")]
    Service(io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::BadLimit(_) => 2,
            _ => 1,
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            CliError::Quiver(e) => error_to_value(e),
            other => json!({"error": other.to_string()}),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// What a subcommand produced: the stdout document, the stderr summary and
/// whether every check it ran passed.
#[derive(Debug)]
pub struct Report {
    pub json: Value,
    pub summary: String,
    pub ok: bool,
}

impl Report {
    pub fn ok(json: Value, summary: impl Into<String>) -> Self {
        Self { json, summary: summary.into(), ok: true }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qml", version, about = "Coloured quiver mutation and the mutation class of type A_n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mutate a quiver read as JSON (1-based vertices)
    Mutate {
        /// Quiver file; stdin when omitted
        input: Option<PathBuf>,
        #[arg(long, required_unless_present = "sequence")]
        vertex: Option<usize>,
        #[arg(long, default_value_t = 1, conflicts_with = "sequence")]
        power: u64,
        /// Apply a `{"steps": [...]}` sequence file instead of one step
        #[arg(long, conflicts_with = "vertex")]
        sequence: Option<PathBuf>,
        /// Use the closed-form formula instead of the three-step procedure
        #[arg(long)]
        formula: bool,
    },
    /// Decide membership in the class of type A_n
    Classify { input: Option<PathBuf> },
    /// Enumerate a mutation class up to isomorphism
    Enumerate {
        /// Start from the line on this many vertices
        #[arg(long, required_unless_present = "seed", conflicts_with = "seed")]
        n: Option<usize>,
        #[arg(long, required_unless_present = "seed", conflicts_with = "seed")]
        m: Option<u32>,
        /// Start from the quiver in this file
        #[arg(long)]
        seed: Option<PathBuf>,
        /// Give up after this many classes (default: $QML_LIMIT or 100000)
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, value_enum)]
        emit_orbit_graph: Option<GraphFormat>,
        /// Run the membership test on every quiver reached
        #[arg(long)]
        check_membership: bool,
        /// Expand the frontier on one thread
        #[arg(long)]
        sequential: bool,
    },
    /// Energy, clique number and 0-coloured part of a quiver
    Analyze {
        input: Option<PathBuf>,
        #[arg(long)]
        energy: bool,
        /// The 0-coloured part; `dot` adds a Graphviz rendering
        #[arg(long, value_enum, num_args = 0..=1, default_missing_value = "json")]
        zero_part: Option<GraphFormat>,
        #[arg(long)]
        clique_number: bool,
    },
    /// Mutate a class member down to a line
    Reduce {
        input: Option<PathBuf>,
        /// Replay the sequence forwards and its inverse backwards
        #[arg(long)]
        verify: bool,
    },
    /// Run the structural checks over whole classes
    Verify {
        /// `N,M`; repeatable (default: the desk-scale cases)
        #[arg(long = "case", value_parser = parse_case)]
        cases: Vec<(usize, u32)>,
        #[arg(long)]
        limit: Option<usize>,
        /// Largest brute-force search for the membership side
        #[arg(long, default_value_t = DEFAULT_GENERATION_BUDGET)]
        budget: u128,
    },
    /// Serve the explorer's JSON API on loopback
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Json,
    Dot,
}

fn parse_case(s: &str) -> Result<(usize, u32), String> {
    let (n, m) = s.split_once(',').ok_or_else(|| format!("expected N,M, got {s:?}"))?;
    let n: usize = n.trim().parse().map_err(|e| format!("bad N in {s:?}: {e}"))?;
    let m: u32 = m.trim().parse().map_err(|e| format!("bad M in {s:?}: {e}"))?;
    if n == 0 || m == 0 {
        return Err(format!("N and M must be positive, got {s:?}"));
    }
    Ok((n, m))
}

/// The enumeration limit: the flag, else `$QML_LIMIT`, else the default.
pub fn class_limit(flag: Option<usize>) -> CliResult<usize> {
    if let Some(limit) = flag {
        return Ok(limit);
    }
    match std::env::var(LIMIT_ENV) {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(CliError::BadLimit(raw)),
        },
        Err(_) => Ok(DEFAULT_CLASS_LIMIT),
    }
}

pub fn read_input(path: Option<&Path>) -> CliResult<String> {
    let mut s = String::new();
    match path {
        Some(p) => {
            s = std::fs::read_to_string(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
        }
        None => {
            io::stdin().read_to_string(&mut s).map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
        }
    }
    Ok(s)
}

pub fn dispatch(command: Command) -> CliResult<Report> {
    match command {
        Command::Mutate { input, vertex, power, sequence, formula } => {
            commands::mutate(input.as_deref(), vertex, power, sequence.as_deref(), formula)
        }
        Command::Classify { input } => commands::classify(input.as_deref()),
        Command::Enumerate { n, m, seed, limit, emit_orbit_graph, check_membership, sequential } => {
            let opts = commands::EnumerateOptions {
                limit: class_limit(limit)?,
                orbit_graph: emit_orbit_graph,
                check_membership,
                sequential,
            };
            commands::enumerate(n.zip(m), seed.as_deref(), &opts)
        }
        Command::Analyze { input, energy, zero_part, clique_number } => {
            commands::analyze(input.as_deref(), energy, zero_part, clique_number)
        }
        Command::Reduce { input, verify } => commands::reduce(input.as_deref(), verify),
        Command::Verify { cases, limit, budget } => {
            let cases = if cases.is_empty() { suite::DESK_CASES.to_vec() } else { cases };
            suite::run(&cases, class_limit(limit)?, budget)
        }
        Command::Serve { port, host } => service::serve_blocking(&host, port, class_limit(None)?),
    }
}

/// Parses `args`, including the program name.
pub fn parse<I, T>(args: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(args)
}

/// Parses `args`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match parse(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (json, summary, code) = match dispatch(cli.command) {
        Ok(report) => {
            let code = if report.ok { 0 } else { 1 };
            (report.json, report.summary, code)
        }
        Err(e) => (e.to_value(), format!("error: {e}"), e.exit_code()),
    };
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{json}");
    let _ = out.flush();
    if !summary.is_empty() {
        eprintln!("{summary}");
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cases_parse_as_pairs() {
        assert_eq!(parse_case("4,2"), Ok((4, 2)));
        assert_eq!(parse_case(" 3 , 1 "), Ok((3, 1)));
        assert!(parse_case("4").is_err());
        assert!(parse_case("0,2").is_err());
        assert!(parse_case("4,x").is_err());
    }

    #[test]
    fn explicit_limit_wins() {
        assert_eq!(class_limit(Some(12)).unwrap(), 12);
    }

    #[test]
    fn zero_part_flag_takes_an_optional_format() {
        let cli = parse(["qml", "analyze", "--zero-part"]).unwrap();
        assert!(matches!(cli.command, Command::Analyze { zero_part: Some(GraphFormat::Json), .. }));
        let cli = parse(["qml", "analyze", "--zero-part", "dot", "q.json"]).unwrap();
        assert!(matches!(cli.command, Command::Analyze { zero_part: Some(GraphFormat::Dot), input: Some(_), .. }));
        assert!(parse(["qml", "mutate", "--vertex", "1", "--sequence", "s.json"]).is_err());
    }
}
