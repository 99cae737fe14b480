//! `finsler`: S-curvature and related diagnostics for homogeneous Finsler
//! spaces.
//!
//! Every command takes a space as either a path to a JSON config or a
//! built-in name (`so3`, `solvable2-randers-b05`, `randers-b05-n3`, ...).
//! Reports are JSON on stdout. Exit status: 0 success, 1 domain or validation
//! failure, 2 usage or parse error.

// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use finsler_core::exec::configure_threads;
use finsler_core::Execution;

use commands::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "finsler", version, about = "S-curvature of homogeneous Finsler spaces")]
struct Cli {
    /// Worker threads for scans and Monte Carlo (1 runs sequentially).
    #[arg(long, global = true, env = "FINSLER_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Lie algebra, the norm and its isotropy invariance.
    Validate { config: String },
    /// Pointwise F, I, w, V and both S-curvature formulas.
    Scurv {
        config: String,
        /// Direction in m, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Scan the α-unit sphere and classify the S-curvature.
    Scan {
        config: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-sample CSV output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the pipeline against the Randers closed form.
    Compare {
        config: String,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo Busemann–Hausdorff volume coefficient.
    Sigma {
        config: String,
        #[arg(long, default_value_t = 1_000_000)]
        mc: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Integrate the body-frame geodesic equation with RK4.
    Geodesic {
        config: String,
        #[arg(long, allow_hyphen_values = true)]
        y0: String,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Trajectory CSV output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn execution(threads: Option<usize>) -> CliResult<Execution> {
    match threads {
        None => Ok(Execution::default()),
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(1) => Ok(Execution::Sequential),
        Some(n) => {
            configure_threads(n)?;
            Ok(Execution::Parallel)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let exec = execution(cli.threads)?;
    match cli.command {
        Command::Validate { config } => commands::validate(&config),
        Command::Scurv { config, y } => commands::scurv(&config, &y),
        Command::Scan { config, samples, seed, out } => commands::scan(&config, samples, seed, out.as_deref(), exec),
        Command::Compare { config, cases, seed } => commands::compare(&config, cases, seed),
        Command::Sigma { config, mc, seed } => commands::sigma(&config, mc, seed, exec),
        Command::Geodesic { config, y0, t, dt, out } => commands::geodesic(&config, &y0, t, dt, out.as_deref()),
    }
    .map(|_| ())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
