//! `ptspec`: spectra of `H = p^2 + x^2 (ix)^eps` from the command line.

mod commands;
mod config;
mod error;
mod output;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::Config;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "ptspec", version, about = "Complex spectra of p^2 + x^2 (ix)^eps")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for the shift lattices and Arnoldi start vectors [default: 24301]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Flat key = value file; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Sheet of s^(2+eps) on the winding contour: principal or continued [default: principal]
    #[arg(long, global = true)]
    pub branch: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stokes wedge angles
    Wedges(commands::WedgesArgs),
    /// Eigenvalues in a rectangle from the winding contour, with classification
    Solve(commands::SolveArgs),
    /// Eigenvalues by shooting along the wedge centers
    Shoot(commands::ShootArgs),
    /// Eigenvalue trajectories along the real eps axis
    Sweep(commands::SweepArgs),
    /// Eigenvalue trajectories around a circle about eps = -1
    Circle(commands::CircleArgs),
    /// Discrete/continuous classification of eigenvalues near a point
    Classify(commands::ClassifyArgs),
    /// Numerical eigenvalues against the asymptotic formulas
    Asympt(commands::AsymptArgs),
    /// SVG plot of two columns of an emitted CSV file
    Plot(commands::PlotArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.global.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let threads: Option<usize> = cfg.resolve(cli.global.threads, "threads")?;
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure threads: {e}")))?;
    }
    let ctx = commands::Context::new(&cli.global, cfg)?;
    match cli.command {
        Command::Wedges(a) => commands::wedges(&ctx, a),
        Command::Solve(a) => commands::solve(&ctx, a),
        Command::Shoot(a) => commands::shoot(&ctx, a),
        Command::Sweep(a) => commands::sweep(&ctx, a),
        Command::Circle(a) => commands::circle(&ctx, a),
        Command::Classify(a) => commands::classify(&ctx, a),
        Command::Asympt(a) => commands::asympt(&ctx, a),
        Command::Plot(a) => commands::plot(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ptspec: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
