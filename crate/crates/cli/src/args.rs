//! Command-line arguments.

use std::path::PathBuf;

use axisym_core::shooting::{FamilyKind, GridSpacing};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "axisym", version, about = "Axially symmetric singular solutions on spheres by shooting")]
pub struct Cli {
    /// Worker threads for parallel shooting; defaults to all processors.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Scan alpha for roots of the equator derivative and write one profile per branch.
    Scan(ScanArgs),
    /// Solve a single branch from a bracket or from a previous scan.
    Branch(BranchArgs),
    /// Integrate the autonomous limit orbit and write it as CSV.
    Limit(LimitArgs),
    /// Compare direct integration for N = 3 with the closed-form family.
    #[command(name = "oracle-n3")]
    OracleN3(OracleArgs),
    /// Scan the Lane-Emden family (power nonlinearity).
    #[command(name = "lane-emden-scan")]
    LaneEmdenScan(LaneEmdenArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyArg {
    Exp,
    Power,
}

impl From<FamilyArg> for FamilyKind {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Exp => FamilyKind::Exponential,
            FamilyArg::Power => FamilyKind::Power,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpacingArg {
    Uniform,
    Geometric,
}

impl From<SpacingArg> for GridSpacing {
    fn from(s: SpacingArg) -> Self {
        match s {
            SpacingArg::Uniform => GridSpacing::Uniform,
            SpacingArg::Geometric => GridSpacing::Geometric,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct TolArgs {
    /// Relative tolerance of the adaptive integrator.
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    /// Absolute tolerance of the adaptive integrator.
    #[arg(long, default_value_t = 1e-12)]
    pub atol: f64,
    /// Bisection stops once the bracket is this narrow.
    #[arg(long = "bisect-tol", default_value_t = 1e-10)]
    pub bisect_tol: f64,
    #[arg(long = "max-bisect", default_value_t = 200)]
    pub max_bisect: usize,
    /// Tolerance factor for the re-shoot that produces profiles and residuals.
    #[arg(long = "profile-tol-scale", default_value_t = 1e-2)]
    pub profile_tol_scale: f64,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long = "alpha-min")]
    pub alpha_min: Option<f64>,
    #[arg(long = "alpha-max")]
    pub alpha_max: Option<f64>,
    /// Grid step in alpha (uniform) or in log alpha (geometric).
    #[arg(long = "alpha-step")]
    pub alpha_step: Option<f64>,
    #[arg(long, value_enum)]
    pub spacing: Option<SpacingArg>,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    #[arg(long, value_enum, default_value = "exp")]
    pub family: FamilyArg,
    #[arg(long = "N")]
    pub n: u32,
    /// Exponent of the power nonlinearity.
    #[arg(long)]
    pub p: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    /// Profile samples on [0, pi]; must be odd.
    #[arg(long, default_value_t = 2001)]
    pub samples: usize,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct LaneEmdenArgs {
    #[arg(long = "N", default_value_t = 5)]
    pub n: u32,
    #[arg(long, default_value_t = 4.0)]
    pub p: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long, default_value_t = 2001)]
    pub samples: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct BranchArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long = "N")]
    pub n: Option<u32>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Alpha bracket containing a sign change.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], conflicts_with_all = ["from", "index"])]
    pub bracket: Option<Vec<f64>>,
    /// A branches.json written by `scan`.
    #[arg(long, requires = "index")]
    pub from: Option<PathBuf>,
    /// One-based branch index within `--from`.
    #[arg(long, requires = "from")]
    pub index: Option<usize>,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long, default_value_t = 2001)]
    pub samples: usize,
    /// Profile file; printed to standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a theta,v,vp CSV next to `--out`.
    #[arg(long, requires = "out")]
    pub csv: bool,
}

#[derive(Args, Debug, Clone)]
pub struct LimitArgs {
    #[arg(long, value_enum, default_value = "exp")]
    pub family: FamilyArg,
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long)]
    pub p: Option<f64>,
    /// End of the orbit in s.
    #[arg(long = "s-end", default_value_t = 60.0)]
    pub s_end: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub atol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub atol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
