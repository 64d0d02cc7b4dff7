use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use steerwit::tomo::{DEFAULT_SHOTS, DEFAULT_TRIALS};
use steerwit::MU_MAX;

#[derive(Debug, Parser)]
#[command(
    name = "steerwit",
    version,
    about = "EPR steering witnesses for two-qubit states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Witness steering at one (alpha, theta) point and compare with the analytic regions.
    Classify(PointArgs),
    /// Classify a grid over the (alpha, theta) plane.
    Scan(ScanArgs),
    /// Simulate tomography of the target state and both constructed states.
    Tomo(TomoArgs),
    /// Evaluate the geometric Bell-like inequality.
    Bellgeom(BellArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct MuArgs {
    /// Mixing weight of the target state in the first constructed state.
    #[arg(long, default_value_t = MU_MAX)]
    pub mu1: f64,
    /// Mixing weight of the target state in the second constructed state.
    #[arg(long, default_value_t = MU_MAX)]
    pub mu2: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: f64,
    #[command(flatten)]
    pub mu: MuArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Points per axis.
    #[arg(long, default_value_t = 101)]
    pub grid_n: usize,
    #[command(flatten)]
    pub mu: MuArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SamplingArgs {
    /// Expected counts per measurement setting (accepts forms like 1e4).
    #[arg(long, default_value_t = DEFAULT_SHOTS, value_parser = parse_count)]
    pub shots: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct TomoArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BellArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Add Monte-Carlo tomography error bars to both sides.
    #[arg(long)]
    pub errorbars: bool,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

/// Parses a non-negative integer count, also written in float notation such as `1e4`.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
        Ok(x as u64)
    } else {
        Err(format!("`{s}` is not a non-negative integer"))
    }
}
