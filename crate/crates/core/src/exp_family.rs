//! Equation forms for the exponential nonlinearity on the sphere.
//!
//! Axially symmetric solutions `v(θ)` of
//! `v'' + (N−2) cot θ v' + 2(N−2)(e^v − 1) = 0`, `v(0) = α`, `v'(0) = 0`
//! are computed through the shifted phase variables
//! `x̃(s) = v − v*`, `s = log tan(θ/2) + α/2`, where `v* = −2 log sin θ + κ`
//! is the exact singular solution. Near the pole the shifted system is
//! singular, so the orbit is started from the regularized radial problem in
//! `r = e^s`
//!
//! `u'' + (N−2)/r u' + 8(N−2) e^u − 2(N−3)δ/(1+δr²) (r u' + 2) = 0`,
//! `u(0) = u'(0) = 0`, `δ = e^{−α}`,
//!
//! integrated on `[r_start, 1]`, and continued in `s` on `[0, α/2]`. The
//! shot target is `ỹ(α/2) = v'(π/2)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{integrate, integrate_with_event, IntegratorConfig, OdeError, OrbitTrace, PhaseState, State};
use crate::scalar::Scalar;
use crate::shooting::{FamilyKind, SeriesStart, Shot, ShotResult, ShotTrace, ShootingProblem};

/// Radius at which the regularized problem is started from its series.
pub const R_START: f64 = 1e-4;
/// Angle at which the direct θ-integration is started from its series.
pub const THETA_START: f64 = 1e-4;

/// `κ_{N−1} = log((N−3)/(N−2))`.
pub fn kappa<T: Scalar>(n: u32) -> T {
    (T::from_count(n) - T::lit(3.0)).ln() - (T::from_count(n) - T::lit(2.0)).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpParams<T> {
    pub n: u32,
    pub alpha: T,
    pub kappa: T,
    pub kappa_tilde: T,
    pub delta: T,
}

impl<T: Scalar> ExpParams<T> {
    pub fn new(n: u32, alpha: T) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidParameter(format!(
                "exponential family needs N >= 4 for the singular solution, got N = {n}"
            )));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be finite, got {alpha}")));
        }
        let kappa = kappa::<T>(n);
        Ok(Self {
            n,
            alpha,
            kappa,
            kappa_tilde: kappa - T::lit(2.0) * T::LN_2(),
            delta: (-alpha).exp(),
        })
    }

    #[inline]
    fn nf(&self) -> T {
        T::from_count(self.n)
    }
}

/// State of the regularized radial problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialState<T> {
    pub r: T,
    pub u: T,
    pub up: T,
}

/// First-order form of the regularized radial equation: `(u', u'')`.
pub fn rhs_regularized<T: Scalar>(r: T, u: T, up: T, p: &ExpParams<T>) -> (T, T) {
    let n = p.nf();
    let two = T::lit(2.0);
    let upp = -(n - two) / r * up - T::lit(8.0) * (n - two) * u.exp()
        + two * (n - T::lit(3.0)) * p.delta / (T::one() + p.delta * r * r) * (r * up + two);
    (up, upp)
}

/// Coefficient `c₂` of `u(r) = c₂ r² + O(r⁴)`.
pub fn series_coefficient<T: Scalar>(p: &ExpParams<T>) -> T {
    let n = p.nf();
    (T::lit(2.0) * (n - T::lit(3.0)) * p.delta - T::lit(4.0) * (n - T::lit(2.0))) / (n - T::one())
}

/// Second-order series start of the regularized problem; requires `0 < r_start ≤ 1e−3`.
pub fn series_start<T: Scalar>(p: &ExpParams<T>, r_start: T) -> RadialState<T> {
    let c2 = series_coefficient(p);
    RadialState { r: r_start, u: c2 * r_start * r_start, up: T::lit(2.0) * c2 * r_start }
}

/// Shifted system `(x̃', ỹ')`.
pub fn rhs_shifted<T: Scalar>(s: T, x: T, y: T, p: &ExpParams<T>) -> (T, T) {
    let m = p.nf() - T::lit(3.0);
    let th = (s - p.alpha / T::lit(2.0)).tanh();
    (y, m * th * y - T::lit(2.0) * m * (x.exp_m1()))
}

pub fn radial_to_phase<T: Scalar>(st: &RadialState<T>, p: &ExpParams<T>) -> Result<PhaseState<T>> {
    if !(st.r > T::zero()) {
        return Err(Error::NonPositiveRadius(st.r.as_f64()));
    }
    let s = st.r.ln();
    Ok(PhaseState::new(s, st.u + T::lit(2.0) * s - p.kappa_tilde, st.r * st.up + T::lit(2.0)))
}

pub fn phase_to_radial<T: Scalar>(ps: &PhaseState<T>, p: &ExpParams<T>) -> RadialState<T> {
    let r = ps.s.exp();
    RadialState { r, u: ps.x - T::lit(2.0) * ps.s + p.kappa_tilde, up: (ps.y - T::lit(2.0)) / r }
}

/// Shoots from the pole to the equator for one `α`.
pub fn shoot_exp<T: Scalar>(p: &ExpParams<T>, cfg: &IntegratorConfig<T>) -> Result<Shot<T>> {
    let half = p.alpha / T::lit(2.0);
    let r_start = T::lit(R_START);
    let r_switch = half.exp().min(T::one());
    if !(r_switch > r_start) {
        return Err(Error::InvalidParameter(format!(
            "alpha = {} puts the equator inside the series region",
            p.alpha
        )));
    }
    let start = series_start(p, r_start);
    let radial = integrate_with_event(
        |r: T, st: &State<T>| {
            let (a, b) = rhs_regularized(r, st[0], st[1], p);
            [a, b]
        },
        |r: T, st: &State<T>| r * st[1] + T::lit(2.0),
        PhaseState::new(start.r, start.u, start.up),
        r_switch,
        cfg,
    )?;

    let end = radial.last();
    let shifted = if half > T::zero() {
        let ps = radial_to_phase(&RadialState { r: end.s, u: end.x, up: end.y }, p)?;
        let ps = PhaseState::new(T::zero(), ps.x, ps.y);
        Some(integrate(
            |s: T, st: &State<T>| {
                let (a, b) = rhs_shifted(s, st[0], st[1], p);
                [a, b]
            },
            ps,
            half,
            cfg,
        )?)
    } else {
        None
    };

    let phi = match &shifted {
        Some(tr) => tr.last().y,
        None => end.s * end.y + T::lit(2.0),
    };
    let trace = ShotTrace {
        series: SeriesStart { r_start, u0: T::zero(), c2: series_coefficient(p) },
        radial,
        shifted,
        r_switch,
        s_end: half,
    };
    let result = ShotResult {
        alpha: p.alpha,
        phi,
        winding: trace.winding(),
        tangencies: trace.tangencies(),
        positive: true,
        steps: trace.steps(),
    };
    Ok(Shot { result, trace })
}

/// Shifted-phase state `(x̃, ỹ)` of a shot at any `s ≤ α/2`, using the series below `r_start`.
pub fn shifted_state_at<T: Scalar>(shot: &ShotTrace<T>, p: &ExpParams<T>, s: T) -> Option<State<T>> {
    if s > shot.s_end {
        return None;
    }
    let s_switch = shot.r_switch.ln();
    if s > s_switch {
        return shot.shifted.as_ref()?.eval(s);
    }
    let r = s.exp();
    let (u, up) = shot.radial_at(r)?;
    let ps = radial_to_phase(&RadialState { r, u, up }, p).ok()?;
    Some([ps.x, ps.y])
}

/// Exponential family as a shooting problem in `α` at fixed `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExpProblem {
    pub n: u32,
}

impl<T: Scalar> ShootingProblem<T> for ExpProblem {
    fn kind(&self) -> FamilyKind {
        FamilyKind::Exponential
    }

    fn dimension(&self) -> u32 {
        self.n
    }

    fn exponent(&self) -> Option<T> {
        None
    }

    fn shoot(&self, alpha: T, cfg: &IntegratorConfig<T>) -> Result<Shot<T>> {
        shoot_exp(&ExpParams::new(self.n, alpha)?, cfg)
    }

    fn regime_note(&self) -> String {
        let rep = crate::limit::classify_origin::<f64>(self.n);
        format!(
            "origin of the limit system is a {} for N = {} (eigenvalues {} and {})",
            rep.classification.describe(),
            self.n,
            rep.eigenvalues[0],
            rep.eigenvalues[1]
        )
    }
}

/// Exact singular solution `v* = −2 log sin θ + κ` with its first two derivatives.
pub fn singular_solution<T: Scalar>(theta: T, n: u32) -> Result<(T, T, T)> {
    if !(theta > T::zero() && theta < T::PI()) {
        return Err(Error::Domain(format!("theta = {theta} not in (0, pi)")));
    }
    let (sn, cs) = theta.sin_cos();
    let v = -T::lit(2.0) * sn.ln() + kappa::<T>(n);
    Ok((v, -T::lit(2.0) * cs / sn, T::lit(2.0) / (sn * sn)))
}

/// `v'' + (N−2) cot θ v' + 2(N−2)(e^v − 1)`.
pub fn sphere_operator<T: Scalar>(n: u32, theta: T, v: T, vp: T, vpp: T) -> T {
    let m = T::from_count(n) - T::lit(2.0);
    let (sn, cs) = theta.sin_cos();
    vpp + m * cs / sn * vp + T::lit(2.0) * m * v.exp_m1()
}

/// Regular profile from direct integration in θ; `x` is `v`, `y` is `v'`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaProfile<T> {
    pub n: u32,
    pub alpha: T,
    pub theta_start: T,
    /// Coefficient of θ² in the startup series.
    pub c2: T,
    pub trace: OrbitTrace<T>,
}

impl<T: Scalar> ThetaProfile<T> {
    /// `(v, v')` at `θ`, from the series below the start angle.
    pub fn eval(&self, theta: T) -> Option<(T, T)> {
        if theta >= T::zero() && theta < self.theta_start {
            return Some((self.alpha + self.c2 * theta * theta, T::lit(2.0) * self.c2 * theta));
        }
        self.trace.eval(theta).map(|st| (st[0], st[1]))
    }
}

/// Integrates the θ-equation directly from the pole. Works for `N ≥ 3`.
pub fn direct_theta_integrate<T: Scalar>(
    n: u32,
    alpha: T,
    theta_end: T,
    cfg: &IntegratorConfig<T>,
) -> Result<ThetaProfile<T>> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("direct route needs N >= 3, got {n}")));
    }
    let theta_start = T::lit(THETA_START);
    if !(theta_end > theta_start && theta_end <= T::PI()) {
        return Err(Error::Domain(format!("theta_end = {theta_end} not in (theta_start, pi]")));
    }
    let m = T::from_count(n) - T::lit(2.0);
    let c2 = -m * alpha.exp_m1() / (T::from_count(n) - T::one());
    let start = PhaseState::new(theta_start, alpha + c2 * theta_start * theta_start, T::lit(2.0) * c2 * theta_start);
    let trace = integrate(
        |th: T, st: &State<T>| {
            let (sn, cs) = th.sin_cos();
            [st[1], -m * cs / sn * st[1] - T::lit(2.0) * m * st[0].exp_m1()]
        },
        start,
        theta_end,
        cfg,
    )
    .map_err(|e| match e {
        OdeError::StepSizeUnderflow { s, .. } | OdeError::NonFinite { s } => Error::Stiff { theta: s },
        other => Error::Integrator(other),
    })?;
    Ok(ThetaProfile { n, alpha, theta_start, c2, trace })
}
