//! The autonomous limit system
//!
//! `x̄' = ȳ`, `ȳ' = −(N−3)ȳ − 2(N−3)(e^x̄ − 1)`,
//!
//! its Lyapunov function, the classification of the origin, and the
//! reference orbit leaving `−∞` along `ȳ = 2`. The same orbit is the radial
//! Gelfand solution in `R^{N−1}` after `u = x̄ − 2s + κ̃`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exp_family::{rhs_regularized, series_start, ExpParams, R_START};
use crate::ode::{integrate, IntegratorConfig, OrbitTrace, PhaseState, State};
use crate::scalar::Scalar;

/// Start of the truncated asymptotic orbit.
pub const LIMIT_S_START: f64 = -20.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitParams<T> {
    pub n: u32,
    /// `ᾱ = log 8(N−2)`.
    pub alpha_bar: T,
    /// `κ̄ = log 2(N−3)`.
    pub kappa_bar: T,
}

impl<T: Scalar> LimitParams<T> {
    pub fn new(n: u32) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidParameter(format!("limit system needs N >= 4, got N = {n}")));
        }
        let nf = T::from_count(n);
        Ok(Self {
            n,
            alpha_bar: (T::lit(8.0) * (nf - T::lit(2.0))).ln(),
            kappa_bar: (T::lit(2.0) * (nf - T::lit(3.0))).ln(),
        })
    }
}

/// `E(x, y) = y²/2 + 2(N−3)(eˣ − x)`.
pub fn energy<T: Scalar>(x: T, y: T, n: u32) -> T {
    let m = T::from_count(n) - T::lit(3.0);
    y * y / T::lit(2.0) + T::lit(2.0) * m * (x.exp() - x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OriginClass {
    StableSpiral,
    StableNode,
    /// Double real eigenvalue.
    Degenerate,
}

impl OriginClass {
    pub fn describe(&self) -> &'static str {
        match self {
            OriginClass::StableSpiral => "stable spiral",
            OriginClass::StableNode => "stable node",
            OriginClass::Degenerate => "degenerate (double eigenvalue)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport<T> {
    pub n: u32,
    /// `λ₊`, `λ₋`.
    pub eigenvalues: [Complex<T>; 2],
    /// `(N−3)(N−11)`.
    pub discriminant: i64,
    pub classification: OriginClass,
}

/// Eigenvalues `½{−(N−3) ± √((N−3)(N−11))}` of the linearization at the origin.
pub fn classify_origin<T: Scalar>(n: u32) -> EquilibriumReport<T> {
    let disc = (i64::from(n) - 3) * (i64::from(n) - 11);
    let half = T::lit(0.5);
    let re = -(T::from_count(n) - T::lit(3.0)) * half;
    let root = T::from_i64(disc.abs()).expect("small integer").sqrt() * half;
    let (eigenvalues, classification) = match disc.signum() {
        -1 => ([Complex::new(re, root), Complex::new(re, -root)], OriginClass::StableSpiral),
        0 => ([Complex::new(re, T::zero()); 2], OriginClass::Degenerate),
        _ => ([Complex::new(re + root, T::zero()), Complex::new(re - root, T::zero())], OriginClass::StableNode),
    };
    EquilibriumReport { n, eigenvalues, discriminant: disc, classification }
}

pub fn rhs_limit<T: Scalar>(x: T, y: T, n: u32) -> (T, T) {
    let m = T::from_count(n) - T::lit(3.0);
    (y, -m * y - T::lit(2.0) * m * x.exp_m1())
}

/// Asymptotic state `x̄ = 2s − κ̄ + ᾱ`, `ȳ = 2` at `s_start`.
pub fn limit_start<T: Scalar>(p: &LimitParams<T>, s_start: T) -> PhaseState<T> {
    PhaseState::new(s_start, T::lit(2.0) * s_start - p.kappa_bar + p.alpha_bar, T::lit(2.0))
}

/// Limit orbit from `s = −20` to `s_end`.
pub fn limit_orbit<T: Scalar>(p: &LimitParams<T>, s_end: T, cfg: &IntegratorConfig<T>) -> Result<OrbitTrace<T>> {
    let s_start = T::lit(LIMIT_S_START);
    if !s_end.is_finite() || s_end <= s_start {
        return Err(Error::InvalidParameter(format!("s_end = {s_end} must exceed {LIMIT_S_START}")));
    }
    let n = p.n;
    Ok(integrate(
        |_s: T, st: &State<T>| {
            let (a, b) = rhs_limit(st[0], st[1], n);
            [a, b]
        },
        limit_start(p, s_start),
        s_end,
        cfg,
    )?)
}

/// Radial Gelfand profile `u₀(r)` on `[r_start, r_end]`: the regularized
/// problem with `δ = 0`. State is `(u, u')`.
pub fn gelfand_radial<T: Scalar>(n: u32, r_end: T, cfg: &IntegratorConfig<T>) -> Result<OrbitTrace<T>> {
    let p = ExpParams { delta: T::zero(), ..ExpParams::new(n, T::zero())? };
    let start = series_start(&p, T::lit(R_START));
    if !(r_end > start.r) {
        return Err(Error::InvalidParameter(format!("r_end = {r_end} below the series start")));
    }
    Ok(integrate(
        |r: T, st: &State<T>| {
            let (a, b) = rhs_regularized(r, st[0], st[1], &p);
            [a, b]
        },
        PhaseState::new(start.r, start.u, start.up),
        r_end,
        cfg,
    )?)
}

/// `(x̄, ȳ)` at `s = log r` recovered from the radial Gelfand profile.
pub fn limit_from_radial<T: Scalar>(n: u32, r: T, u: T, up: T) -> State<T> {
    let kt = crate::exp_family::kappa::<T>(n) - T::lit(2.0) * T::LN_2();
    let s = r.ln();
    [u + T::lit(2.0) * s - kt, r * up + T::lit(2.0)]
}
