//! The `hms` command line.
//!
//! Exit codes: 0 yes / success, 1 no / failure, 2 invalid input (an error
//! object is printed on standard error), 3 unknown (search gave up).

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::document::{self, DocumentError, SystemDocument};
use crate::hmsrep::{self, Answer, LambdaDescriptor, RepresentationDoc, VerifyOptions};
use crate::msys::{self, EquivOptions, SystemError};
use crate::order::{self, SearchBudget};
use crate::quantum;
use crate::rational::{self, Rational};
use crate::sim;

/// Environment variable overriding the atom bound of the partition search.
pub const BUDGET_ENV: &str = "HMS_SEARCH_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "hms", version, about = "Hidden-measurement representations of measurement systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the representation of a system over [0,1] with Lebesgue measure.
    Build {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Decide whether the system is representable with a given context measure or space.
    Check {
        input: PathBuf,
        /// Context measure file.
        #[arg(long, conflicts_with = "lambda", required_unless_present = "lambda")]
        mu: Option<PathBuf>,
        /// `continuum` or `finite:<n>`.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Check a representation against a system, exactly.
    Verify {
        system: PathBuf,
        rep: PathBuf,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Sample contexts and tally the outcomes of one state under one measurement.
    Sample {
        rep: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long)]
        measurement: String,
        #[arg(short, default_value_t = 100_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        /// CSV output; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print the measure-space classes occurring in a system.
    Classify { system: PathBuf },
    /// Look for a mathematical equivalence between two systems.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = msys::DEFAULT_EQUIV_BUDGET)]
        budget: usize,
        /// Disable signature pruning.
        #[arg(long)]
        no_prune: bool,
    },
    /// Quantum front-end.
    Quantum {
        #[command(subcommand)]
        command: QuantumCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum QuantumCommand {
    /// Write a spin-½ system document.
    Gen {
        /// Polar angles of the states, as multiples of π (e.g. `1/3`).
        #[arg(long, value_delimiter = ',', required = true)]
        theta: Vec<String>,
        /// Extra measurement axes `polar:azimuth`, as multiples of π.
        #[arg(long)]
        axis: Vec<String>,
        /// Write the Born table instead of the quantum block.
        #[arg(long)]
        explicit: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn fail(e: DocumentError) -> i32 {
    eprintln!("{}", e.to_json());
    2
}

fn usage(message: String) -> i32 {
    eprintln!("{}", serde_json::json!({ "error": "InvalidArgument", "message": message }));
    2
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

/// Partition-search budget, from the environment when set.
pub fn search_budget() -> Result<SearchBudget, String> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(|max_atoms| SearchBudget { max_atoms })
            .map_err(|_| format!("{BUDGET_ENV} must be a non-negative integer, got {v:?}")),
        Err(_) => Ok(SearchBudget::default()),
    }
}

fn parse_lambda(text: &str) -> Result<LambdaDescriptor, String> {
    if text == "continuum" {
        return Ok(LambdaDescriptor::Continuum);
    }
    text.strip_prefix("finite:")
        .and_then(|n| n.parse().ok())
        .filter(|&n: &usize| n >= 1)
        .map(LambdaDescriptor::Finite)
        .ok_or_else(|| format!("expected `continuum` or `finite:<n>` with n ≥ 1, got {text:?}"))
}

fn parse_angle(text: &str) -> Result<Rational, String> {
    rational::parse(text.trim()).map_err(|e| e.to_string())
}

fn write_or_print<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), DocumentError> {
    match out {
        Some(p) => document::write_json(p, value),
        None => {
            print_json(value);
            Ok(())
        }
    }
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Build { input, out } => {
            let ms = match document::load_system(&input) {
                Ok(ms) => ms,
                Err(e) => return fail(e),
            };
            let rep = hmsrep::build(&ms);
            if let Err(e) = document::write_json(&out, &RepresentationDoc::from(&rep)) {
                return fail(e);
            }
            println!(
                "{} states × {} measurements, {} cells -> {}",
                ms.states().len(),
                ms.measurements().len(),
                rep.cell_count(),
                out.display()
            );
            0
        }
        Command::Check { input, mu, lambda } => {
            let ms = match document::load_system(&input) {
                Ok(ms) => ms,
                Err(e) => return fail(e),
            };
            let report = match (mu, lambda) {
                (Some(path), _) => {
                    let budget = match search_budget() {
                        Ok(b) => b,
                        Err(m) => return usage(m),
                    };
                    match document::load_measure(&path) {
                        Ok(mu) => hmsrep::check_criterion(&ms, &mu, budget),
                        Err(e) => return fail(e),
                    }
                }
                (None, Some(text)) => match parse_lambda(&text) {
                    Ok(l) => hmsrep::check_criterion_lambda(&ms, l),
                    Err(m) => return usage(m),
                },
                (None, None) => return usage("one of --mu or --lambda is required".into()),
            };
            print_json(&report);
            report.answer.exit_code()
        }
        Command::Verify { system, rep, json } => {
            let ms = match document::load_system(&system) {
                Ok(ms) => ms,
                Err(e) => return fail(e),
            };
            let rep = match document::load_representation(&rep) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            let report = hmsrep::verify(&rep, &ms, VerifyOptions::default());
            if json {
                print_json(&report);
            }
            if report.all_exact() {
                println!("exact: {} checks", report.checks.len());
                0
            } else {
                for e in &report.errors {
                    println!("error: {e}");
                }
                if let Some(c) = report.first_failure() {
                    println!(
                        "mismatch: state {} measurement {} B = {}: expected {}, got {}",
                        c.state,
                        c.measurement,
                        c.set,
                        rational::format(&c.expected),
                        rational::format(&c.got)
                    );
                }
                println!("{} of {} checks failed", report.failures, report.checks.len());
                1
            }
        }
        Command::Sample {
            rep,
            state,
            measurement,
            n,
            seed,
            shards,
            out,
            json,
        } => {
            if n == 0 || shards == 0 {
                return usage("-n and --shards must be at least 1".into());
            }
            let rep = match document::load_representation(&rep) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            let report = match sim::sample(&rep, &state, &measurement, n, seed, shards) {
                Ok(r) => r,
                Err(e) => return fail(e.into()),
            };
            let reports = [report];
            let written = match &out {
                Some(p) => std::fs::File::create(p)
                    .map_err(|e| e.to_string())
                    .and_then(|f| sim::write_csv(&reports, f).map_err(|e| e.to_string())),
                None => sim::write_csv(&reports, std::io::stdout()).map_err(|e| e.to_string()),
            };
            if let Err(message) = written {
                return fail(DocumentError::Io {
                    path: out.map_or("<stdout>".into(), |p| p.display().to_string()),
                    message,
                });
            }
            if let Some(p) = json {
                if let Err(e) = document::write_json(&p, &reports[0]) {
                    return fail(e);
                }
            }
            0
        }
        Command::Classify { system } => {
            let ms = match document::load_system(&system) {
                Ok(ms) => ms,
                Err(e) => return fail(e),
            };
            for class in order::delta_m(&ms).classes() {
                println!("{class}");
            }
            0
        }
        Command::Equiv { a, b, budget, no_prune } => {
            let (a, b) = match (document::load_system(&a), document::load_system(&b)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return fail(e),
            };
            let opts = EquivOptions {
                budget,
                prune: !no_prune,
            };
            match msys::math_equiv(&a, &b, opts) {
                Ok(Some(w)) => {
                    print_json(&w.named(&a, &b));
                    0
                }
                Ok(None) => {
                    println!("none");
                    1
                }
                Err(SystemError::SearchBudgetExceeded(n)) => {
                    println!("unknown: search budget of {n} exceeded");
                    Answer::Unknown.exit_code()
                }
                Err(e) => fail(e.into()),
            }
        }
        Command::Quantum {
            command:
                QuantumCommand::Gen {
                    theta,
                    axis,
                    explicit,
                    out,
                },
        } => {
            let thetas = match theta.iter().map(|t| parse_angle(t)).collect::<Result<Vec<_>, _>>() {
                Ok(t) => t,
                Err(m) => return usage(m),
            };
            let mut axes = Vec::new();
            for a in &axis {
                let parsed = a
                    .split_once(':')
                    .ok_or_else(|| format!("axis must be `polar:azimuth`, got {a:?}"))
                    .and_then(|(t, p)| Ok((parse_angle(t)?, parse_angle(p)?)));
                match parsed {
                    Ok(pair) => axes.push(pair),
                    Err(m) => return usage(m),
                }
            }
            let qdoc = quantum::aerts_document(&thetas, &axes);
            let doc = if explicit {
                match qdoc.to_system() {
                    Ok(ms) => SystemDocument::from_system(&ms),
                    Err(e) => return fail(e.into()),
                }
            } else {
                SystemDocument::from_quantum(qdoc)
            };
            match write_or_print(out.as_deref(), &doc) {
                Ok(()) => 0,
                Err(e) => fail(e),
            }
        }
    }
}

/// Parses the process arguments and runs; returns the exit code.
pub fn main() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}
