//! `stablelike`: seeded experiments on stable-like processes.
//!
//! Every subcommand reads an optional JSON config (`--config`), applies the
//! common flags on top of it, validates the result and then runs
//! `trials` independent trials, trial `i` using `trial_seed(seed, i)`.
//! Outputs are written to one file per trial, named by trial index.

mod commands;
mod config;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use commands::{CensusArgs, ConcentrationArgs, ProcessKind, RunContext, SpectrumArgs};
use config::{BetaSpec, ExperimentConfig, Format};

#[derive(Parser, Debug)]
#[command(name = "stablelike", version, about = "Seeded experiments on stable-like jump processes")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON experiment config; flags below override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Output directory [default: config value, then $STABLELIKE_OUT, then ./out]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    horizon: Option<f64>,
    #[arg(long, global = true)]
    z_min: Option<f64>,
    /// Use the constant index `alpha` instead of the configured map.
    #[arg(long, global = true)]
    alpha: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample paths and write them with their metadata.
    Simulate {
        #[arg(long, value_enum, default_value_t = ProcessKind::StableLike)]
        process: ProcessKind,
    },
    /// Write the occupation measure of each path.
    Occupation,
    /// Local dimension estimates along each path.
    Localdim {
        #[arg(long, default_value_t = 9)]
        points: u32,
    },
    /// Upper multifractal spectrum tables.
    Spectrum(SpectrumArgs),
    /// Box dimension of path images against the predicted interval.
    Images {
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 0.1)]
        tol: f64,
    },
    /// Double-jump census, configuration families and trees.
    Census(CensusArgs),
    /// Concentration of compensated small-jump increments.
    Concentration(ConcentrationArgs),
}

fn resolve(common: &Common) -> Result<RunContext> {
    let mut config = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(trials) = common.trials {
        config.trials = trials;
    }
    if let Some(out) = &common.out {
        config.out = Some(out.clone());
    }
    if let Some(format) = common.format {
        config.format = format;
    }
    if let Some(h) = common.horizon {
        config.horizon = h;
    }
    if let Some(z) = common.z_min {
        config.z_min = z;
    }
    if let Some(alpha) = common.alpha {
        config.beta = BetaSpec::Constant { alpha };
    }
    config.validate()?;
    Ok(RunContext {
        out: config.out_dir(),
        config,
        jobs: common.jobs,
    })
}

fn run(cli: Cli) -> Result<()> {
    let ctx = resolve(&cli.common)?;
    match cli.command {
        Command::Simulate { process } => commands::simulate(&ctx, process),
        Command::Occupation => commands::occupation(&ctx),
        Command::Localdim { points } => commands::localdim(&ctx, points),
        Command::Spectrum(args) => commands::spectrum(&ctx, &args),
        Command::Images { a, b, tol } => commands::images(&ctx, a, b, tol),
        Command::Census(args) => commands::census(&ctx, &args),
        Command::Concentration(args) => commands::concentration(&ctx, &args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
