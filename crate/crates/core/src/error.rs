use thiserror::Error;

use crate::ode::OdeError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Integrator(#[from] OdeError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("direct theta integration stalled near theta = {theta} (steep profile for this alpha)")]
    Stiff { theta: f64 },
    #[error("bracket endpoints have the same sign: phi({lo}) = {phi_lo}, phi({hi}) = {phi_hi}")]
    SameSign { lo: f64, hi: f64, phi_lo: f64, phi_hi: f64 },
    #[error("bisection did not reach tolerance within {0} iterations")]
    MaxIterations(usize),
    #[error("no sign change of phi in [{alpha_min}, {alpha_max}]: {reason}")]
    NoRootsInRange { alpha_min: f64, alpha_max: f64, reason: String },
    #[error("trace does not cover the required range: {0}")]
    IncompleteTrace(String),
    #[error("grid too coarse for finite differences: {0}")]
    GridTooCoarse(String),
    #[error("parameters outside the spiral regime: {0}")]
    NotInSpiralRegime(String),
}

pub type Result<T> = std::result::Result<T, Error>;
