//! Serialized result files: JSON documents and plot-ready CSV.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use axisym_core::ode::IntegratorConfig;
use axisym_core::reconstruct::{NeumannValues, ResidualReport, SolutionProfile};
use axisym_core::shooting::{Branch, FamilyKind, GridSpacing};
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub parameters: Parameters,
    pub tolerances: Tolerances,
    pub tool: String,
    pub version: String,
    pub timestamp: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub family: Option<FamilyKind>,
    #[serde(rename = "N")]
    pub n: u32,
    pub p: Option<f64>,
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub alpha_step: Option<f64>,
    pub spacing: Option<GridSpacing>,
    pub bracket: Option<(f64, f64)>,
    pub c: Option<f64>,
    pub s_end: Option<f64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub integrator: IntegratorConfig<f64>,
    pub bisect_tol: f64,
    pub max_bisect: usize,
    pub profile_tol_scale: f64,
    pub residual_h: f64,
}

impl Manifest {
    pub fn new(command: &str, parameters: Parameters, tolerances: Tolerances) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            tolerances,
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchRow {
    pub index: usize,
    pub alpha: f64,
    pub winding: usize,
    pub phi_residual: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub profile_file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanFile {
    pub schema: u32,
    pub manifest: Manifest,
    pub branches: Vec<BranchRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub residual: ResidualReport<f64>,
    pub residual_max: f64,
    pub vp_half_pi: f64,
    pub vp_pole: f64,
    pub winding: usize,
    pub tangencies: usize,
    pub phi_at_root: f64,
    pub min_v: f64,
    pub max_v: f64,
    pub positive: bool,
    /// `∫ (e^v − 1) sin^{N−2}θ dθ`, exponential family only.
    pub sphere_identity: Option<f64>,
}

impl Diagnostics {
    pub fn new(
        residual: ResidualReport<f64>,
        neumann: NeumannValues<f64>,
        branch: &Branch<f64>,
        tangencies: usize,
        positive: bool,
        profile: &SolutionProfile<f64>,
        sphere_identity: Option<f64>,
    ) -> Self {
        Self {
            residual_max: residual.residual_max,
            residual,
            vp_half_pi: neumann.vp_half_pi,
            vp_pole: neumann.vp_pole,
            winding: branch.winding,
            tangencies,
            phi_at_root: branch.phi_at_root,
            min_v: profile.min_v(),
            max_v: profile.max_v(),
            positive,
            sphere_identity,
        }
    }
}

/// Constants for lifting `v(θ)` to the singular solution on `R^N \ {0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SingularHelper {
    /// `U(R, θ) = −2 log R + log 2(N−2) + v(θ)`.
    Exp { log_2_n_minus_2: f64 },
    /// `U(R, θ) = R^{−q} v(θ)`.
    Power { a: f64, q: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileFile {
    pub schema: u32,
    pub manifest: Manifest,
    pub branch: Branch<f64>,
    pub profile: SolutionProfile<f64>,
    pub diagnostics: Diagnostics,
    pub singular: SingularHelper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub c: f64,
    pub alpha: f64,
    pub deviation: f64,
    pub theta_argmax: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleFile {
    pub schema: u32,
    pub manifest: Manifest,
    pub report: OracleReport,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).context("serializing output")?;
    s.push('\n');
    Ok(s)
}

/// Seventeen significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn profile_csv(manifest: &Manifest, profile: &SolutionProfile<f64>) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "# schema: {SCHEMA}")?;
    writeln!(out, "# manifest: {}", serde_json::to_string(manifest)?)?;
    writeln!(out, "theta,v,vp")?;
    for ((t, v), vp) in profile.theta.iter().zip(&profile.v).zip(&profile.vp) {
        writeln!(out, "{},{},{}", num(*t), num(*v), num(*vp))?;
    }
    Ok(out)
}

/// Writes every `(path, contents)` pair, creating parent directories as needed.
pub fn write_all(files: &[(std::path::PathBuf, String)]) -> Result<()> {
    for (path, body) in files {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

pub fn read_scan(path: &Path) -> Result<ScanFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
