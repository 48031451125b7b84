//! Command-line flags and the resolved run configuration embedded in every
//! report.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use orthosplines::knots::Law;
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "orthosplines",
    version,
    about = "Orthonormal spline systems: construction, verification and experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random admissible knot sequence.
    Gen(Flags),
    /// Build the orthonormal system and export every function.
    Build(Flags),
    /// Run the property suites and report measured constants.
    Verify(Flags),
    /// Largest characteristic-interval census over all knot windows.
    Census(Flags),
    /// Random sign flips of random in-space expansions.
    Experiment(Flags),
    /// Fitted decay envelope of the Gram inverse.
    Decay(Flags),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Build(_) => "build",
            Command::Verify(_) => "verify",
            Command::Census(_) => "census",
            Command::Experiment(_) => "experiment",
            Command::Decay(_) => "decay",
        }
    }

    pub fn flags(&self) -> &Flags {
        match self {
            Command::Gen(f)
            | Command::Build(f)
            | Command::Verify(f)
            | Command::Census(f)
            | Command::Experiment(f)
            | Command::Decay(f) => f,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Spline order (taken from --points when given).
    #[arg(long)]
    pub k: Option<usize>,
    /// Level N (defaults to the last level of --points, else 64).
    #[arg(long)]
    pub n: Option<usize>,
    /// Exponent; repeat for several.
    #[arg(long = "p")]
    pub p: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trials for `experiment`, sequences for `decay`.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Uniform grid size for maximal functions and level sets.
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    #[arg(long, default_value_t = 0.25)]
    pub beta: f64,
    /// Point law for generated sequences: uniform-iid or dyadic-shuffled.
    #[arg(long, default_value = "uniform-iid")]
    pub law: Law,
    /// Knot file {"k", "points"} to use instead of a generated sequence.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol_ortho: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol_recon: f64,
}

/// Every setting of a run after defaults are resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: Vec<f64>,
    pub seed: u64,
    pub trials: usize,
    pub grid: usize,
    pub beta: f64,
    pub law: Law,
    pub points: Option<String>,
    pub out: Option<String>,
    pub tol_ortho: f64,
    pub tol_recon: f64,
}

pub const DEFAULT_LEVEL: usize = 64;
pub const DEFAULT_ORDER: usize = 2;
pub const DEFAULT_EXPONENTS: [f64; 4] = [1.2, 1.5, 3.0, 6.0];
