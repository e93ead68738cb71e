//! `permpoly` command-line tool.
//!
//! Exit codes: 0 success, 1 a check failed or the run itself failed,
//! 2 usage or configuration error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Flags, Format, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
}

impl From<permpoly::Error> for CliError {
    fn from(e: permpoly::Error) -> Self {
        use permpoly::Error as E;
        match e {
            E::Usage(_) | E::Size { .. } | E::Domain { .. } => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "permpoly", version, about = "Permanental polynomials of random matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Ensemble: gue, goe, cue, ginibre, unitary-invariant
    #[arg(long, global = true)]
    ensemble: Option<String>,
    /// Matrix size (duality: the power n)
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Duality: matrix size N
    #[arg(long = "N", global = true)]
    big_n: Option<usize>,
    /// Evaluation point as re,im (repeatable)
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Vec<String>,
    /// Number of Monte-Carlo samples
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// RNG seed (falls back to PERMPOLY_SEED)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (roots: output directory)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads; 0 uses all cores. Never changes results.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// JSON file with any of the options above
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Histogram / grid bins per axis
    #[arg(long, global = true)]
    bins: Option<usize>,
    /// Half-width of the square plotting window
    #[arg(long = "half-width", global = true)]
    half_width: Option<f64>,
}

impl From<Common> for Flags {
    fn from(c: Common) -> Self {
        Flags {
            ensemble: c.ensemble,
            n: c.n,
            big_n: c.big_n,
            mu: c.mu,
            samples: c.samples,
            seed: c.seed,
            out: c.out,
            format: c.format,
            workers: c.workers,
            config: c.config,
            bins: c.bins,
            half_width: c.half_width,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a check suite: exact, gue, goe, cue, ginibre, group-integrals, duality, all
    Verify {
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Estimate a quantity by Monte Carlo: mean-poly, two-point
    Estimate {
        quantity: String,
        #[command(flatten)]
        common: Common,
    },
    /// Sample permanental roots and write histograms and a summary
    Roots {
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate limiting potentials and densities on a grid
    Asymptotics {
        #[command(flatten)]
        common: Common,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let (name, common, arg) = match cli.command {
        Command::Verify { suite, common } => ("verify", common, Some(suite)),
        Command::Estimate { quantity, common } => ("estimate", common, Some(quantity)),
        Command::Roots { common } => ("roots", common, None),
        Command::Asymptotics { common } => ("asymptotics", common, None),
    };
    let cfg = RunConfig::resolve(name, common.into())?;
    let workers = cfg.workers;
    permpoly::stats::with_workers(workers, || match name {
        "verify" => commands::verify(&cfg, arg.as_deref().unwrap_or_default()),
        "estimate" => commands::estimate(&cfg, arg.as_deref().unwrap_or_default()),
        "roots" => commands::roots(&cfg),
        _ => commands::asymptotics(&cfg),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
