//! `fraglab <command> --config <file> [--seed S] [--out DIR]`

mod artifact;
mod commands;
mod config;
mod error;
mod recipes;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::artifact::Artifact;
use crate::config::{Model, Overrides, PostselectSpec};
use crate::error::CliError;
use crate::recipes::Recipe;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Blockaded basis size, Fibonacci check and optional listing.
    Basis,
    /// Fragment census and the per-sector fragment table.
    Fragments,
    /// Quench dynamics: autocorrelators, populations, projections.
    Quench,
    /// Temporal-ensemble reconstruction of a sector's distributions.
    Ensemble,
    /// Width scaling, collapse and peak ratio.
    Scaling,
    /// Cluster decomposition of given bitstrings.
    Map,
    /// Print the JSON Schema of run manifests.
    Schema,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Debug, Parser)]
#[command(name = "fraglab", version, about = "Fragmentation and SLIOM statistics of a blockaded Rydberg chain")]
struct Cli {
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named recipe supplying defaults beneath the config file.
    #[arg(long)]
    recipe: Option<Recipe>,
    #[arg(long)]
    seed: Option<u64>,
    /// Artifact directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    n_atoms: Option<usize>,
    #[arg(long)]
    model: Option<Model>,
    /// Physical g/r string of the initial product state.
    #[arg(long)]
    init: Option<String>,
    /// End of the time window, in units of Ωt.
    #[arg(long)]
    tmax: Option<f64>,
    /// Number of grid points in the window.
    #[arg(long)]
    steps: Option<usize>,
    /// Snapshots per time step.
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    spam: Option<OnOff>,
    /// `none`, `blockade`, `nc=K` or `blockade,nc=K`.
    #[arg(long)]
    postselect: Option<PostselectSpec>,
}

/// Caps the global pool at `FRAGLAB_THREADS` when set.
fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("FRAGLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("FRAGLAB_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<Option<PathBuf>, CliError> {
    let start = Instant::now();
    if cli.command == Command::Schema {
        print!("{}", artifact::MANIFEST_SCHEMA);
        return Ok(None);
    }
    init_threads()?;
    let ov = Overrides {
        recipe: cli.recipe,
        seed: cli.seed,
        out: cli.out,
        n_atoms: cli.n_atoms,
        model: cli.model,
        init: cli.init,
        tmax: cli.tmax,
        steps: cli.steps,
        shots: cli.shots,
        spam: cli.spam.map(|s| matches!(s, OnOff::On)),
        postselect: cli.postselect,
    };
    let cfg = config::load(cli.config.as_deref(), &ov)?;
    if let Some(r) = cfg.recipe {
        if r.command() != cli.command {
            return Err(CliError::Config(format!(
                "recipe {} belongs to `{}`",
                r.to_possible_value().expect("named").get_name(),
                r.command().to_possible_value().expect("named").get_name()
            )));
        }
    }
    let mut art = Artifact::create(&cfg.out)?;
    match cli.command {
        Command::Basis => commands::basis(&cfg, &mut art)?,
        Command::Fragments => commands::fragments(&cfg, &mut art)?,
        Command::Quench => commands::quench(&cfg, &mut art)?,
        Command::Ensemble => commands::ensemble(&cfg, &mut art)?,
        Command::Scaling => commands::scaling(&cfg, &mut art)?,
        Command::Map => commands::map(&cfg, &mut art)?,
        Command::Schema => unreachable!("handled above"),
    }
    art.finish(cli.command, &cfg, start.elapsed()).map(Some)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(manifest) => {
            if let Some(m) = manifest {
                println!("{}", m.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("fraglab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
