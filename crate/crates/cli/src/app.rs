//! Command-line entry point.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use strategem::{Dominance, PayoffRule, SearchMethod};

use crate::commands::{self, Options, WhatIfRequest, EXIT_INPUT};
use crate::document::{DocumentError, Loaded, ResultDocument, ScenarioDocument};
use crate::service::{self, Store};

#[derive(Debug, Parser)]
#[command(name = "strategem", version, about = "Assets-versus-threats games from scenario files")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the payoff matrix of a scenario.
    Build(Common),
    /// Solve the game. Exits with 3 when the value is negative.
    Solve(Common),
    /// Game value for every period of the threat timeline.
    Timeline(Common),
    /// Perturb one entry, or search inside interval payoffs for a better game.
    Whatif {
        #[command(flatten)]
        common: Common,
        /// Entry to perturb, as ROW,COLUMN labels.
        #[arg(long, value_parser = parse_entry)]
        entry: Option<(String, String)>,
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        /// Largest total deviation from the interval midpoints.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, value_parser = parse_method)]
        method: Option<SearchMethod>,
    },
    /// Serve scenarios over HTTP.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: std::net::IpAddr,
        /// Directory holding the scenario documents.
        #[arg(long, env = "STRATEGEM_STORE", default_value = "strategem-store")]
        store: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario document (JSON).
    pub file: PathBuf,
    /// Payoff rule; defaults to the rule in the document.
    #[arg(long, value_parser = parse_rule)]
    pub rule: Option<PayoffRule>,
    #[arg(long, value_parser = parse_dominance)]
    pub dominance: Option<Dominance>,
    /// Weight threat columns by this timeline period.
    #[arg(long)]
    pub period: Option<usize>,
    /// Write the output here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

impl Common {
    fn options(&self) -> Options {
        Options {
            rule: self.rule,
            dominance: self.dominance,
            period: self.period,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// Compact JSON.
    Machine,
}

fn parse_rule(s: &str) -> Result<PayoffRule, String> {
    s.parse().map_err(|e: strategem::Error| e.to_string())
}

fn parse_dominance(s: &str) -> Result<Dominance, String> {
    s.parse().map_err(|e: strategem::Error| e.to_string())
}

fn parse_method(s: &str) -> Result<SearchMethod, String> {
    match s {
        "auto" => Ok(SearchMethod::Auto),
        "grid" => Ok(SearchMethod::Grid),
        "greedy" => Ok(SearchMethod::Greedy),
        other => Err(format!("unknown search method {other:?} (auto, grid, greedy)")),
    }
}

fn parse_entry(s: &str) -> Result<(String, String), String> {
    match s.split_once(',') {
        Some((r, c)) if !r.trim().is_empty() && !c.trim().is_empty() => {
            Ok((r.trim().to_string(), c.trim().to_string()))
        }
        _ => Err(format!("expected ROW,COLUMN, got {s:?}")),
    }
}

/// Formats an output document.
pub fn render(result: &ResultDocument, format: Format) -> String {
    match format {
        Format::Text => result.to_string(),
        Format::Machine => result.to_json() + "\n",
    }
}

fn fail(path: &Path, err: &DocumentError) -> ExitCode {
    eprintln!(
        "{}:{}:{}: {}: {}",
        path.display(),
        err.line,
        err.column,
        err.kind,
        err.message
    );
    ExitCode::from(EXIT_INPUT)
}

fn run_command(
    common: &Common,
    command: impl FnOnce(&Loaded) -> strategem::Result<ResultDocument>,
) -> ExitCode {
    let path = &common.file;
    let source = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}: cannot read: {e}", path.display());
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let loaded = match ScenarioDocument::load(&source) {
        Ok(l) => l,
        Err(e) => return fail(path, &e),
    };
    let result = match command(&loaded) {
        Ok(r) => r,
        Err(e) => return fail(path, &DocumentError::anchored(&source, &loaded.document, &e)),
    };
    let output = render(&result, common.format);
    match &common.out {
        Some(out) => {
            if let Err(e) = std::fs::write(out, &output) {
                eprintln!("{}: cannot write: {e}", out.display());
                return ExitCode::FAILURE;
            }
        }
        None => print!("{output}"),
    }
    ExitCode::from(commands::exit_status(&result))
}

pub fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Build(c) => run_command(&c, |l| commands::build(l, &c.options())),
        Command::Solve(c) => run_command(&c, |l| commands::solve(l, &c.options())),
        Command::Timeline(c) => run_command(&c, |l| commands::timeline(l, &c.options())),
        Command::Whatif {
            common,
            entry,
            delta,
            budget,
            step,
            method,
        } => {
            let options = common.options();
            let request = WhatIfRequest {
                rule: options.rule,
                dominance: options.dominance,
                period: options.period,
                entry,
                delta,
                budget,
                step,
                method,
            };
            run_command(&common, |l| commands::whatif(l, &request))
        }
        Command::Serve { port, bind, store } => {
            let store = match Store::open(&store) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{}: {e}", store.display());
                    return ExitCode::FAILURE;
                }
            };
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("cannot start runtime: {e}");
                    return ExitCode::FAILURE;
                }
            };
            match runtime.block_on(service::serve(SocketAddr::new(bind, port), store)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("serve: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
