//! Axially symmetric solutions of
//!
//! `Δ_{S^{N−1}} v + 2(N−2)(e^v − 1) = 0` and `Δ_{S^{N−1}} v − μv + v^p = 0`
//!
//! on the sphere, built by an Emden–Fowler change of variables, shooting in
//! the pole value `α`, and counting windings of the phase orbit. Each such
//! `v` gives a singular solution of `ΔU + e^U = 0` (resp. `ΔU + U^p = 0`) in
//! `R^N \ {0}`.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`.

pub mod error;
pub mod exp_family;
pub mod lane_emden;
pub mod limit;
pub mod ode;
pub mod reconstruct;
pub mod scalar;
pub mod shooting;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type IntegratorConfig = ode::IntegratorConfig<f64>;
pub type PhaseState = ode::PhaseState<f64>;
pub type OrbitTrace = ode::OrbitTrace<f64>;
pub type ExpParams = exp_family::ExpParams<f64>;
pub type PowerConstants = lane_emden::PowerConstants<f64>;
pub type PowerParams = lane_emden::PowerParams<f64>;
pub type PowerProblem = lane_emden::PowerProblem<f64>;
pub type LimitParams = limit::LimitParams<f64>;
pub type EquilibriumReport = limit::EquilibriumReport<f64>;
pub type ScanConfig = shooting::ScanConfig<f64>;
pub type Branch = shooting::Branch<f64>;
pub type ShotResult = shooting::ShotResult<f64>;
pub type BranchSolution = reconstruct::BranchSolution<f64>;
pub type SolutionProfile = reconstruct::SolutionProfile<f64>;
pub type ResidualReport = reconstruct::ResidualReport<f64>;

pub use exp_family::ExpProblem;
pub use limit::OriginClass;
pub use shooting::{FamilyKind, GridSpacing};
