//! `bohl`: reconstruction and verification pipelines for one-dimensional
//! Schrödinger equations, driven by JSON potential specs.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails, 2 on
//! invalid input (bad spec, unmet hypothesis, unusable options).

mod commands;
mod report;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use report::Report;
use spec::PotentialSpec;

#[derive(Debug, Parser)]
#[command(name = "bohl", version, about = "Green-diagonal reconstruction toolkit")]
struct Cli {
    #[command(subcommand)]
    family: Family,
}

#[derive(Debug, Subcommand)]
enum Family {
    /// Lattice pipelines on integer windows.
    Discrete {
        #[command(subcommand)]
        command: DiscreteCommand,
    },
    /// Grid pipelines on real intervals.
    Continuum {
        #[command(subcommand)]
        command: ContinuumCommand,
    },
}

#[derive(Debug, Subcommand)]
enum DiscreteCommand {
    /// Rebuild the solution basis and the potential from the Green diagonal.
    Reconstruct(CommonArgs),
    /// Check the diagonal difference equation, the direct inversion, and the
    /// factored operator.
    Verify(CommonArgs),
    /// Comparison constant, two-sided bounds, and decay distances.
    Agmon(CommonArgs),
}

#[derive(Debug, Subcommand)]
enum ContinuumCommand {
    /// Build the diagonal function and its basis; check the generated Green
    /// function.
    Analyze(CommonArgs),
    /// Classify oscillation from the phase integral of the diagonal.
    Classify(CommonArgs),
    /// Check the first-order factorization against the operator.
    Darboux(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Path to the JSON potential spec.
    #[arg(long)]
    spec: PathBuf,
    /// Replace every check's default tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Write a column-text dump of the command's main sequences.
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Positive cutoff C for the comparison bounds (defaults to min V / 2).
    #[arg(long)]
    cutoff: Option<f64>,
}

/// Input-level failure: spec problems, unmet hypotheses, unusable options.
#[derive(Debug)]
pub struct InvalidInput(pub String);

impl std::fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl<E: std::error::Error> From<E> for InvalidInput {
    fn from(err: E) -> Self {
        InvalidInput(err.to_string())
    }
}

pub struct Options {
    pub tolerance: Option<f64>,
    pub cutoff: Option<f64>,
    pub dump: Option<PathBuf>,
}

type Runner = fn(&PotentialSpec, &Options) -> Result<Report, InvalidInput>;

fn run(cli: Cli) -> Result<(Report, bool), InvalidInput> {
    let (args, runner): (CommonArgs, Runner) = match cli.family {
        Family::Discrete { command } => match command {
            DiscreteCommand::Reconstruct(a) => (a, commands::discrete::reconstruct),
            DiscreteCommand::Verify(a) => (a, commands::discrete::verify),
            DiscreteCommand::Agmon(a) => (a, commands::discrete::agmon),
        },
        Family::Continuum { command } => match command {
            ContinuumCommand::Analyze(a) => (a, commands::continuum::analyze),
            ContinuumCommand::Classify(a) => (a, commands::continuum::classify),
            ContinuumCommand::Darboux(a) => (a, commands::continuum::darboux),
        },
    };
    let spec = PotentialSpec::load(&args.spec)?;
    let options = Options {
        tolerance: args.tolerance,
        cutoff: args.cutoff,
        dump: args.dump.clone(),
    };
    let report = runner(&spec, &options)?;
    Ok((report, args.json))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(cli) {
        Ok((report, json)) => {
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            // Timing stays off stdout so reports are byte-deterministic.
            eprintln!("elapsed-ms: {}", started.elapsed().as_millis());
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
