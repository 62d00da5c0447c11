//! `ising-quench`: post-quench observables of the transverse-field Ising ring.

mod commands;
mod spec;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use spec::{Command, RunArgs, RunSpec};

/// Worker-count cap for the rayon pool.
const THREADS_ENV: &str = "ISING_QUENCH_THREADS";

#[derive(Parser)]
#[command(name = "ising-quench", version, about = "Exact quench dynamics of the transverse-field Ising ring")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Magnetizations, purity, correlators and concurrence over time
    Evolve(RunArgs),
    /// String operators <X_j> for the distances in --j-list
    StringOp(RunArgs),
    /// `evolve` for every field in --g-list, one combined table
    SweepG(RunArgs),
    /// Exponential fits of <sigma^x> on --window for every field in --g-list
    Fit(RunArgs),
    /// Compare every observable with exact diagonalization (N <= 12)
    EdCheck(RunArgs),
    /// Infinite-ring curves for sz, cxx and rho11
    Limits(RunArgs),
}

impl Sub {
    fn split(&self) -> (Command, &RunArgs) {
        match self {
            Sub::Evolve(a) => (Command::Evolve, a),
            Sub::StringOp(a) => (Command::StringOp, a),
            Sub::SweepG(a) => (Command::SweepG, a),
            Sub::Fit(a) => (Command::Fit, a),
            Sub::EdCheck(a) => (Command::EdCheck, a),
            Sub::Limits(a) => (Command::Limits, a),
        }
    }
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("{THREADS_ENV} must be a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    init_threads()?;
    let (command, args) = cli.command.split();
    let spec = RunSpec::resolve(command, args)?;
    let outcome = commands::run(&spec)?;
    match &spec.output {
        Some(path) => std::fs::write(path, &outcome.text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(outcome.text.as_bytes())?,
    }
    if let Some(s) = &outcome.summary {
        eprintln!("{s}");
    }
    Ok(!outcome.failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
