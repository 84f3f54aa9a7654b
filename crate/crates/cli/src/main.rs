//! `breather`: config-driven pipeline for discrete Klein-Gordon breathers.
//!
//! Exit codes: 0 success, 1 configuration or input error, 2 no (or more
//! than one) discrete eigenvalue, 3 nonresonance failure, 4 a gate failed.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Parser, Subcommand};

use commands::{Failure, Run};
use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "breather",
    version,
    about = "Construct and verify discrete Klein-Gordon breathers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output` in the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Set a config field, e.g. `--override solver.delta=0.02`.
    #[arg(long = "override", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Discrete eigenvalue and nonresonance certificate.
    Spectrum,
    /// Fixed-point solve at the configured amplitude(s).
    Solve,
    /// PDE residual and time-integration checks of solved breathers.
    Validate,
    /// Amplitude sweep and scaling exponents.
    Sweep,
    /// Exponential decay of the bound state.
    Decay,
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| Failure::Config(anyhow!("--config PATH is required")))?;
    let config = RunConfig::load(path, &cli.overrides)?;
    let out = commands::output_dir(&config, cli.out.as_deref());
    let ctx = Run { config, out };
    match cli.command {
        Command::Spectrum => commands::spectrum(&ctx),
        Command::Solve => commands::solve(&ctx),
        Command::Validate => commands::validate(&ctx),
        Command::Sweep => commands::sweep(&ctx),
        Command::Decay => commands::decay(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code())
        }
    }
}
