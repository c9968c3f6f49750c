//! Library side of the `nsp` binary: argument definitions and commands.
//!
//! Commands write to caller-provided sinks and report an exit code, so they
//! can be driven from tests without spawning a process.

// `!(x > 0.0)` style guards are deliberate: they reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod csv;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{cmd_bound, cmd_compare, cmd_curve, cmd_fit, cmd_mc, CliError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATED: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "nsp",
    version,
    about = "Null space property bounds, phase-transition curves and Monte Carlo checks"
)]
pub struct Cli {
    /// Worker threads for grid and trial loops (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the probability bound Π for one instance
    Bound(BoundArgs),
    /// Trace a phase-transition curve over a δ grid
    Curve(CurveArgs),
    /// Ratio of two curves on the δ grid of the first
    Compare(CompareArgs),
    /// Monte Carlo failure-rate estimates against the bounds
    Mc(McArgs),
    /// Least-squares Lambert-W curve parameters for a curve file
    Fit(FitArgs),
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(short = 's')]
    pub s: u64,
    #[arg(short = 'n')]
    pub n: u64,
    #[arg(short = 'p')]
    pub p: u64,
    #[arg(short = 'C', default_value_t = 1.0)]
    pub c: f64,
    /// Print every log term of the sum
    #[arg(long)]
    pub terms: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    /// Level set of the bound Π at finite n
    Pi,
    /// Boundary of the closed-form asymptotic region
    Borner,
    /// exp(W₋₁(-Bδ)) / (Aδ)
    Lambert,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    pub kind: CurveKind,
    #[arg(short = 'C', default_value_t = 1.0)]
    pub c: f64,
    /// Problem size for `pi` curves
    #[arg(short = 'n', default_value_t = nsp_core::phase::DEFAULT_PI_N)]
    pub n: u64,
    #[arg(short = 'A')]
    pub a: Option<f64>,
    #[arg(short = 'B')]
    pub b: Option<f64>,
    /// `pi` curves keep the largest ρ with ln Π at or below this value
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub log_threshold: f64,
    /// Root tolerance for `borner` curves
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 0.39)]
    pub delta_min: f64,
    #[arg(long, default_value_t = 0.99)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 60)]
    pub points: usize,
    /// CSV destination (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    /// CSV destination (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum McKind {
    /// Exact NSP(s, C) decisions on Gaussian kernels, against Π
    Nsp,
    /// Gaussian-vector failures, against ψ_l(C)
    Psi,
    /// Positive sampled sup X(t), against Π
    Supx,
}

#[derive(Debug, Args)]
pub struct McArgs {
    pub kind: McKind,
    #[arg(short = 's', default_value_t = 1)]
    pub s: u64,
    #[arg(short = 'n')]
    pub n: Option<u64>,
    #[arg(short = 'p')]
    pub p: Option<u64>,
    /// Vector length for `psi`
    #[arg(short = 'l')]
    pub l: Option<u64>,
    #[arg(short = 'C', default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, env = "NSP_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Directions per kernel for `supx`
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    if let Err(e) = nsp_core::par::init_threads(cli.threads) {
        log::debug!("thread pool already configured: {e}");
    }
    let result = match &cli.command {
        Command::Bound(a) => cmd_bound(a, out),
        Command::Curve(a) => cmd_curve(a, out, err),
        Command::Compare(a) => cmd_compare(a, out),
        Command::Mc(a) => cmd_mc(a, out),
        Command::Fit(a) => cmd_fit(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
