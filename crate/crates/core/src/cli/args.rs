use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::density::Order;
use crate::processes::ComposedKind;

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "fracdiff", version, about = "Fundamental solutions of time-fractional diffusion equations")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate u_ν(x, t) on a grid.
    Density(DensityArgs),
    /// Run identity checks.
    Verify(VerifyArgs),
    /// Monte Carlo simulation with a comparison against the analytic law.
    Simulate(SimulateArgs),
    /// Laws of the maximum and sojourn time, and even moments.
    Functionals(FunctionalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Series,
    Integral,
    IntegralByParts,
    ClosedForm,
    Stable,
}

/// `min:max:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.min + step * i as f64).collect()
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid must be min:max:count, got '{s}'"));
    }
    let min: f64 = parts[0].trim().parse().map_err(|_| format!("bad grid minimum '{}'", parts[0]))?;
    let max: f64 = parts[1].trim().parse().map_err(|_| format!("bad grid maximum '{}'", parts[1]))?;
    let count: usize = parts[2].trim().parse().map_err(|_| format!("bad grid count '{}'", parts[2]))?;
    if count < 2 {
        return Err(format!("grid count must be at least 2, got {count}"));
    }
    if !(min.is_finite() && max.is_finite() && max > min) {
        return Err(format!("grid needs finite min < max, got {min}:{max}"));
    }
    Ok(Grid { min, max, count })
}

/// `a..b` or a single integer.
pub fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let bad = || format!("expected an integer or a range a..b, got '{s}'");
    match s.split_once("..") {
        Some((a, b)) => {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        }
        None => {
            let a: u32 = s.trim().parse().map_err(|_| bad())?;
            Ok((a, a))
        }
    }
}

fn parse_order(s: &str) -> Result<Order, String> {
    s.parse::<Order>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    /// Order ν: `p/q` (e.g. `2/3`, `1/2^3`) or a decimal.
    #[arg(long, value_parser = parse_order)]
    pub nu: Order,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, value_parser = parse_grid, default_value = "-5:5:41", allow_hyphen_values = true)]
    pub grid: Grid,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Identity name or `all`.
    #[arg(long, default_value = "all")]
    pub identity: String,
    #[arg(long, value_parser = parse_order)]
    pub nu: Option<Order>,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Smaller point sets and Monte Carlo sizes.
    #[arg(long)]
    pub fast: bool,
    /// Override the tolerance of every report.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProcessKind {
    Iterated,
    GVector,
    Composed,
    Airy,
    Multivariate,
}

fn parse_composed(s: &str) -> Result<ComposedKind, String> {
    s.parse::<ComposedKind>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub process: ProcessKind,
    /// Iteration depth (iterated) or kernel order (g-vector).
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Number of components (multivariate).
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Outer process for compositions.
    #[arg(long, value_parser = parse_composed, default_value = "brownian-outer")]
    pub kind: ComposedKind,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Write the samples as CSV here.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Functional {
    Max,
    Sojourn,
    Moments,
}

#[derive(Debug, Clone, Args)]
pub struct FunctionalArgs {
    #[arg(long, value_enum)]
    pub which: Functional,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Iteration depth for moments.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Moment orders, `a..b` or a single value.
    #[arg(long, value_parser = parse_range, default_value = "1..4")]
    pub k: (u32, u32),
    #[arg(long, value_parser = parse_grid, default_value = "0.01:5:200", allow_hyphen_values = true)]
    pub grid: Grid,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
