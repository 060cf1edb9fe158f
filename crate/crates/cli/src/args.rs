use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "loadfair", version, about = "Fair minimum-load k-clustering")]
pub struct Cli {
    /// Worker threads; 1 runs everything sequentially. Defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Record wall time in the manifest (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Choose k centers and a fair assignment.
    Solve(SolveArgs),
    /// Fair assignment to a fixed center set, optionally under a budget.
    Assign(AssignArgs),
    /// Write a random instance.
    Gen(GenArgs),
    /// Exact optimum by enumeration, for small instances.
    Oracle(OracleArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct InputArgs {
    /// Instance file, JSON or CSV points (by extension).
    #[arg(long)]
    pub instance: PathBuf,
    /// Facilities CSV accompanying a CSV points file.
    #[arg(long)]
    pub facilities: Option<PathBuf>,
    /// k for CSV input.
    #[arg(long)]
    pub k: Option<usize>,
    /// Comma-separated upper shares for CSV input, e.g. 1/2,2/3.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Comma-separated lower shares for CSV input.
    #[arg(long)]
    pub beta: Option<String>,
    /// Skip the cubic triangle-inequality check on explicit matrices.
    #[arg(long)]
    pub no_triangle_check: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Metric,
    Euclidean,
    Exhaustive,
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    /// Independent candidate lists in sampled modes.
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cap on the number of candidate center sets.
    #[arg(long, default_value_t = 100_000)]
    pub max_sets: usize,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct AssignArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Comma-separated facility ids.
    #[arg(long)]
    pub centers: String,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    /// Decide feasibility under this budget instead of minimizing.
    #[arg(long)]
    pub budget: Option<f64>,
    /// Write the solved program (model.lp) and rounding networks (group_G.dot) here.
    #[arg(long)]
    #[serde(skip)]
    pub dump_dir: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    /// Coordinate dimension; 0 draws an explicit graph metric.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Number of facilities; defaults to max(k, n/2).
    #[arg(long)]
    pub facilities: Option<usize>,
    /// Fairness window half-width around each group's share.
    #[arg(long, default_value_t = 0.1)]
    pub slack: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Fix the centers (comma-separated facility ids) instead of enumerating k-sets.
    #[arg(long)]
    pub centers: Option<String>,
    /// Minimize the sum of distances instead of the maximum load (needs --centers).
    #[arg(long)]
    pub kmedian: bool,
    #[arg(long, default_value_t = 10)]
    pub max_points: usize,
    #[arg(long, default_value_t = 3)]
    pub max_k: usize,
    #[arg(long, default_value_t = 50_000_000)]
    pub max_maps: u128,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}
