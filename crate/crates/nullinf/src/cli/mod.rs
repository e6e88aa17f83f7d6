//! Command-line experiment runner.
//!
//! Every experiment is described by one TOML file (see [`config`]); results are
//! written as schema-versioned CSV tables or a single JSON document.

pub mod config;
pub mod emit;
pub mod run;
pub mod table;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{ExperimentConfig, ExperimentKind, FlowMode, NormopMode};
pub use emit::{emit, from_json_str, to_csv_string, to_json_string, Format};
pub use run::run;
pub use table::{format_f64, Cell, ResultSet, Table, SCHEMA_VERSION};

use crate::error::Result;

#[derive(Debug, Parser)]
#[command(name = "nullinf", version, about = "Edge-b experiments near null infinity")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Experiment configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `[output] dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Random seed; overrides `seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output format; overrides `[output] format`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run the experiment named by `kind` in the config.
    Run,
    /// Chart round trips and dual metric signatures.
    Chart,
    /// Flow traces, oracle comparisons and radial sets.
    Flow,
    /// Classification over a grid of starts on one fiber of null infinity.
    Portrait,
    /// Threshold predicates of the theorem tags.
    Thresholds,
    /// Multiplier positivity scans and boundaries.
    Multiplier,
    /// Forward spherical-mode solves with decay fits and weighted norms.
    Solve,
    /// Reduced normal operator at future timelike infinity.
    Normop {
        #[arg(value_enum)]
        mode: NormopMode,
    },
    /// Mellin round trips and the Plancherel identity.
    Mellin,
}

/// Where and how results are written.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputPlan {
    pub dir: PathBuf,
    pub format: Format,
    pub stem: String,
}

/// Load the config and apply command-line overrides.
pub fn prepare(cli: &Cli) -> Result<(ExperimentConfig, ExperimentKind, OutputPlan)> {
    let path = cli.common.config.as_ref().ok_or_else(|| crate::Error::config("--config", "a configuration file is required"))?;
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(seed) = cli.common.seed {
        cfg.seed = seed;
    }
    let requested = match &cli.command {
        Command::Run => None,
        Command::Chart => Some(ExperimentKind::Chart),
        Command::Flow => Some(ExperimentKind::Flow),
        Command::Portrait => Some(ExperimentKind::Portrait),
        Command::Thresholds => Some(ExperimentKind::Thresholds),
        Command::Multiplier => Some(ExperimentKind::Multiplier),
        Command::Solve => Some(ExperimentKind::Solve),
        Command::Normop { mode } => {
            cfg.normop.mode = *mode;
            Some(ExperimentKind::Normop)
        }
        Command::Mellin => Some(ExperimentKind::Mellin),
    };
    let kind = cfg.resolve_kind(requested)?;
    let plan = OutputPlan {
        dir: cli.common.out.clone().or_else(|| cfg.output.dir.clone()).unwrap_or_else(|| PathBuf::from(".")),
        format: cli.common.format.or(cfg.output.format).unwrap_or_default(),
        stem: cfg.output.stem.clone().unwrap_or_else(|| kind.name().to_string()),
    };
    Ok((cfg, kind, plan))
}

/// Parse, run and emit; returns the written files.
pub fn execute(cli: &Cli) -> Result<Vec<PathBuf>> {
    let (cfg, kind, plan) = prepare(cli)?;
    let results = run(&cfg, kind)?;
    emit(&results, plan.format, &plan.dir, &plan.stem)
}
