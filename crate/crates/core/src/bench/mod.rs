//! The `bench` harness: runs configured (problem, solver) pairs and compares
//! traces. `bench run <config>` writes one trace CSV per pair plus
//! `summary.csv`; `bench compare <csv...>` tabulates evaluations to fixed
//! residual thresholds.
//!
//! Exit codes: 0 on success (a diverging solver is a result, not a
//! failure), 2 for bad usage, unknown names or malformed input, 1 for I/O
//! errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;

pub mod compare;
pub mod config;
pub mod runner;

pub use compare::{compare_paths, write_compare, CompareRow, THRESHOLDS};
pub use config::{BenchConfig, RunConfig};
pub use runner::{run_config, write_summary, Outcome, Overrides, PROBLEMS, SOLVERS};

#[derive(Debug, Parser)]
#[command(name = "bench", about = "Run and compare nonlinear solver benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output directory for traces and the summary.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Seed for every run, overriding the config.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Relative residual target, overriding the config.
    #[arg(long, global = true, value_name = "X")]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every section of a TOML config.
    Run { config: PathBuf },
    /// Evaluations to 1e-4, 1e-6, 1e-8 and 1e-10 for each trace.
    Compare {
        #[arg(required = true)]
        csv: Vec<PathBuf>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 1,
        _ => 2,
    }
}

/// The whole CLI, with the process streams passed in.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(stdout, "{e}")
            } else {
                write!(stderr, "{e}")
            };
            return code;
        }
    };
    if let Some(tol) = cli.tol {
        if !(tol > 0.0) {
            let _ = writeln!(stderr, "error: --tol must be positive");
            return 2;
        }
    }
    let result = match &cli.command {
        Command::Run { config } => BenchConfig::load(config).and_then(|c| {
            let out = cli.out.clone().or_else(|| c.out.clone()).unwrap_or_else(|| "bench_out".into());
            let ov = Overrides {
                seed: cli.seed,
                tol: cli.tol,
            };
            run_config(&c, &out, ov, stderr).map(|_| {
                let _ = writeln!(stdout, "wrote {}", out.join("summary.csv").display());
            })
        }),
        Command::Compare { csv } => compare_paths(csv).and_then(|rows| write_compare(&rows, &mut *stdout)),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Io(ref io) if io.kind() == std::io::ErrorKind::NotFound => 2,
                _ => exit_code(&e),
            }
        }
    }
}
