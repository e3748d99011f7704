//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error (bad flags, invalid
//! config, missing files), 2 numeric failure (pole, precision not reached,
//! contour or Newton failure).

mod cache;
mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use symzeta::{ComplexPoint, Error};

use commands::Model;
use config::{JobArgs, JobConfig};

#[derive(Parser, Debug)]
#[command(
    name = "symzeta",
    version,
    about = "Evaluate Z(s), the permutation-symmetrized multiple zeta sum, and count and locate solutions of Z(s) = a"
)]
struct Cli {
    /// More log output (-v info is the default, -vv debug)
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the sum, G and the asymptotic models at one point
    Eval {
        #[command(flatten)]
        job: JobArgs,
        /// Real part of s
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        /// Imaginary part of s
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = Model::Both)]
        model: Model,
    },
    /// Print the set-partition expansion as JSON
    Expand {
        #[command(flatten)]
        job: JobArgs,
    },
    /// Locate the a-points in the region (JSON lines plus a CSV summary)
    Locate {
        #[command(flatten)]
        job: JobArgs,
    },
    /// Count the a-points in the region by the argument principle
    Count {
        #[command(flatten)]
        job: JobArgs,
    },
    /// Count, sum and tail reports over the T grid
    Report {
        #[command(flatten)]
        job: JobArgs,
        /// JSON-lines a-point file; defaults to the cache entry for the region
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Empirical right edge of the a-points with a contour certificate
    ScanFree {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long, default_value_t = symzeta::locator::DEFAULT_T_MIN)]
        t_lo: f64,
        /// Defaults to the largest T of the grid
        #[arg(long)]
        t_hi: Option<f64>,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Eval { job, s, t, model } => {
            commands::eval(&JobConfig::resolve(&job)?, ComplexPoint::new(s, t), model)
        }
        Command::Expand { job } => commands::expand(&JobConfig::resolve(&job)?),
        Command::Locate { job } => commands::locate(&JobConfig::resolve(&job)?),
        Command::Count { job } => commands::count(&JobConfig::resolve(&job)?),
        Command::Report { job, points } => commands::report(&JobConfig::resolve(&job)?, points.as_deref()),
        Command::ScanFree { job, t_lo, t_hi } => commands::scan_free(&JobConfig::resolve(&job)?, t_lo, t_hi),
    }
}

/// 2 for numeric failures of the library, 1 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(
            Error::InvalidWeights(_)
            | Error::InvalidPrecision(_)
            | Error::InvalidRectangle(_)
            | Error::InvalidDisk(_)
            | Error::RankTooLarge { .. }
            | Error::NonFinite { .. },
        ) => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 | 1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
