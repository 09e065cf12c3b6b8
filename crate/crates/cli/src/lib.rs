//! Driver for the `fracvar` binary: run configs, verification suites and
//! report bundles.
//!
//! Exit codes: 0 success, 1 config or usage error, 2 inadmissible regime,
//! 3 non-convergence, 4 verification failure.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod session;
pub mod suites;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use suites::{run_suite, Suite, SuiteOptions, SuiteVerdict};

#[derive(Debug, Parser)]
#[command(name = "fracvar", version, about = "Mass-constrained fractional variational problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize the energy on the mass sphere described by a run config.
    Solve {
        config: PathBuf,
        /// Overrides `output.dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify an exponent as sub-, critical or supercritical.
    Regime {
        /// Exponent ℓ, e.g. `2` or `3/2`.
        #[arg(long)]
        ell: String,
        /// Order s, e.g. `1/2` or `0.3`.
        #[arg(long)]
        s: String,
        #[arg(long = "N", alias = "dim", default_value_t = 1)]
        dim: usize,
        /// Growth constant K; with --gn-constant fills in the critical mass.
        #[arg(long = "K")]
        k: Option<f64>,
        /// Norm-form Gagliardo–Nirenberg constant K′.
        #[arg(long)]
        gn_constant: Option<f64>,
    },
    /// Run a seeded verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use an integrand whose weight increases with |x| (supermodular suite).
        #[arg(long)]
        adversarial: bool,
        /// Order for the gn suite.
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        /// Exponent for the gn suite.
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// Also write the verdict to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimize the Weinstein quotient and report the sharp constant.
    Gn {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, default_value_t = 60.0)]
        box_length: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Evaluate the energy along the mass-preserving dilation family.
    Scaling {
        config: PathBuf,
        #[arg(long, default_value = "gaussian")]
        profile: String,
        /// `lo:hi:count` (log-spaced) or a comma-separated list.
        #[arg(long, default_value = "1:64:10")]
        lambda_grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relaxed infimum over a grid of mass levels.
    Scan {
        config: PathBuf,
        /// `lo:hi:count` (linear) or a comma-separated list.
        #[arg(long)]
        c_grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Diagnostics go to stderr, the primary JSON to stdout.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match commands::execute(cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Regime(_) = e {
                eprintln!("hint: `fracvar scaling <config> --profile gaussian --lambda-grid 1:64:10` shows E(u_λ) along the dilation family");
            }
            e.exit_code()
        }
    }
}
