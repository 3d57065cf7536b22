mod config;
mod error;
mod run;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fkin_core::verification::{verify_suite, Mutation};

use crate::error::{CliError, CliResult};

/// Fractional kinetic and diffusion solutions with numerical oracles.
#[derive(Debug, Parser)]
#[command(name = "fkin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate a solution described by a JSON configuration as CSV.
    Run {
        config: PathBuf,
        /// Output file; overrides `output_path`. Without either, CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance matrix and report one line per criterion.
    Verify {
        /// Only criteria whose number or name contains this text.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, hide = true)]
        flip_denominator: bool,
        #[arg(long, hide = true)]
        l_max: Option<usize>,
    },
    /// Evaluate the three-parameter Mittag-Leffler function E^δ_{β,γ}(z).
    EvalMl {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
    },
}

const THREADS_VAR: &str = "FKIN_THREADS";

fn init_threads() -> CliResult<()> {
    let n = match std::env::var(THREADS_VAR) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            CliError::config(format!(
                "{THREADS_VAR} must be a non-negative integer, got {v:?}"
            ))
        })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::config(format!("cannot start worker threads: {e}")))
}

fn run_config(path: &Path, out: Option<PathBuf>) -> CliResult<()> {
    let cfg = config::load(path)?;
    let job = cfg.job()?;
    let outcome = run::execute(&job)?;
    let bytes = run::to_csv(&outcome.table)?;
    match out.or_else(|| cfg.output_path.as_ref().map(PathBuf::from)) {
        Some(p) => std::fs::write(&p, &bytes)?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    if let Some(s) = &outcome.summary {
        eprintln!("{s}");
    }
    if let Some(expected) = &cfg.expected_sha256 {
        let got = run::sha256_hex(&bytes);
        if !got.eq_ignore_ascii_case(expected) {
            return Err(CliError::Check(format!(
                "output checksum {got} does not match expected {expected}"
            )));
        }
    }
    match outcome.failure {
        Some(f) => Err(CliError::Check(f)),
        None => Ok(()),
    }
}

fn verify(filter: Option<String>, m: Mutation) -> CliResult<()> {
    let report = verify_suite(filter.as_deref(), &m);
    if report.results.is_empty() {
        return Err(CliError::config(format!(
            "no criterion matches filter {:?}",
            filter.unwrap_or_default()
        )));
    }
    for line in report.lines() {
        println!("{line}");
    }
    let failed: Vec<String> = report
        .results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.id.to_string())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "failing criteria: {}",
            failed.join(", ")
        )))
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    init_threads()?;
    match cli.command {
        Command::Run { config, out } => run_config(&config, out),
        Command::Verify {
            filter,
            flip_denominator,
            l_max,
        } => verify(
            filter,
            Mutation {
                flip_denominator,
                l_max,
            },
        ),
        Command::EvalMl {
            beta,
            gamma,
            delta,
            z,
        } => {
            let v = run::eval_ml(beta, gamma, delta, z)?;
            println!("{}", ryu::Buffer::new().format(v));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code())
        }
    }
}
