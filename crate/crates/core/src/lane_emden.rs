//! Power nonlinearity on the sphere:
//!
//! `v'' + (N−2) cot θ v' − μv + v^p = 0`, `v(0) = α`, `v'(0) = 0`,
//!
//! with `q = 2/(p−1)`, `μ = q(N−2−q)`, singular solution `v* = A sin^{−q}θ`,
//! `A = {q(N−3−q)}^{1/(p−1)}` and `m = A^{−(p−1)/2}`. The ratio `x̃ = v/v*`
//! in `s = (1/m) log tan(θ/2) + (1/(mq)) log α` satisfies
//!
//! `x̃' = ỹ`, `ỹ' = (N−3−2q) m tanh(ms − (log α)/q) ỹ + x̃ − x̃^p`,
//!
//! and is started from the regularized radial problem in `r = e^{ms}`
//!
//! `u'' + (N−2)/r u' + u^p − 2(N−3−2q)δ/(1+δr²) (r u' + q u) = 0`,
//! `u(0) = 2^q`, `u'(0) = 0`, `δ = α^{−2/q}`, `x̃ = r^q u / A`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{integrate, integrate_with_event, IntegratorConfig, OdeError, OrbitTrace, PhaseState, State};
use crate::scalar::Scalar;
use crate::shooting::{FamilyKind, SeriesStart, Shot, ShotResult, ShotTrace, ShootingProblem};

/// Radius at which the regularized problem is started from its series.
pub const R_START: f64 = 1e-4;
/// Angle at which the direct θ-integration is started from its series.
pub const THETA_START: f64 = 1e-4;
/// Size of `x̄` at which the heteroclinic orbit is started.
pub const LIMIT_X_START: f64 = 1e-10;

/// Joseph–Lundgren exponent; `+∞` for `2 ≤ M ≤ 10`.
pub fn p_jl<T: Scalar>(m: u32) -> Result<T> {
    if m < 2 {
        return Err(Error::Domain(format!("Joseph-Lundgren exponent needs M >= 2, got {m}")));
    }
    if m <= 10 {
        return Ok(T::infinity());
    }
    let mf = T::from_count(m);
    Ok(T::one() + T::lit(4.0) / (mf - T::lit(4.0) - T::lit(2.0) * (mf - T::one()).sqrt()))
}

/// Constants of the power family at fixed `(N, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerConstants<T> {
    pub n: u32,
    pub p: T,
    pub q: T,
    pub a: T,
    pub m: T,
    pub mu: T,
    /// `N − 3 − 2q`.
    pub b: T,
}

impl<T: Scalar> PowerConstants<T> {
    pub fn new(n: u32, p: T) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidParameter(format!("power family needs N >= 4, got N = {n}")));
        }
        if !(p > T::one()) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!("exponent must satisfy p > 1, got p = {p}")));
        }
        let nf = T::from_count(n);
        let q = T::lit(2.0) / (p - T::one());
        let b = nf - T::lit(3.0) - T::lit(2.0) * q;
        if !(b > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "need N - 3 - 2q > 0, i.e. p > (N+1)/(N-3); got N = {n}, p = {p}"
            )));
        }
        let a = (q * (nf - T::lit(3.0) - q)).powf(T::one() / (p - T::one()));
        Ok(Self {
            n,
            p,
            q,
            a,
            m: a.powf(-(p - T::one()) / T::lit(2.0)),
            mu: q * (nf - T::lit(2.0) - q),
            b,
        })
    }

    /// `x^p` extended oddly to `x < 0`, so orbits leaving `x > 0` stay finite.
    #[inline]
    pub fn pow(&self, x: T) -> T {
        if x >= T::zero() {
            x.powf(self.p)
        } else {
            -(-x).powf(self.p)
        }
    }
}

/// Parameters of one shot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerParams<T> {
    pub c: PowerConstants<T>,
    pub alpha: T,
    /// `α^{−2/q}`.
    pub delta: T,
}

impl<T: Scalar> PowerParams<T> {
    pub fn new(n: u32, p: T, alpha: T) -> Result<Self> {
        let c = PowerConstants::new(n, p)?;
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be positive and finite, got {alpha}")));
        }
        Ok(Self { c, alpha, delta: alpha.powf(-T::lit(2.0) / c.q) })
    }

    /// `s_end = (1/(mq)) log α`.
    pub fn s_end(&self) -> T {
        self.alpha.ln() / (self.c.m * self.c.q)
    }

    /// `u(0) = 2^q`.
    pub fn u0(&self) -> T {
        T::lit(2.0).powf(self.c.q)
    }
}

/// `(N−3−2q)² m² − 4(p−1) < 0` together with `N − 3 − 2q > 0`.
pub fn spiral_condition<T: Scalar>(n: u32, p: T) -> bool {
    if !(p > T::one()) {
        return false;
    }
    let q = T::lit(2.0) / (p - T::one());
    let nf = T::from_count(n);
    let b = nf - T::lit(3.0) - T::lit(2.0) * q;
    let a = q * (nf - T::lit(3.0) - q);
    if !(b > T::zero()) || !(a > T::zero()) {
        return false;
    }
    // m² = 1/(q(N−3−q))
    b * b / a - T::lit(4.0) * (p - T::one()) < T::zero()
}

/// Interval form `½(N−5−2√(N−2)) < q < (N−3)/2` of the spiral condition.
pub fn spiral_condition_q_form<T: Scalar>(n: u32, p: T) -> bool {
    if !(p > T::one()) {
        return false;
    }
    let q = T::lit(2.0) / (p - T::one());
    let nf = T::from_count(n);
    let lo = (nf - T::lit(5.0) - T::lit(2.0) * (nf - T::lit(2.0)).sqrt()) / T::lit(2.0);
    lo < q && q < (nf - T::lit(3.0)) / T::lit(2.0)
}

/// Eigenvalues of the linearization `[[0, 1], [1−p, −(N−3−2q)m]]` at `(1, 0)`.
pub fn linearization_at_one<T: Scalar>(c: &PowerConstants<T>) -> [Complex<T>; 2] {
    let tr = -c.b * c.m;
    let det = c.p - T::one();
    let disc = tr * tr - T::lit(4.0) * det;
    let half = T::lit(0.5);
    if disc < T::zero() {
        let im = (-disc).sqrt() * half;
        [Complex::new(tr * half, im), Complex::new(tr * half, -im)]
    } else {
        let r = disc.sqrt() * half;
        [Complex::new(tr * half + r, T::zero()), Complex::new(tr * half - r, T::zero())]
    }
}

/// `v* = A sin^{−q}θ` with its first two derivatives.
pub fn singular_solution_power<T: Scalar>(theta: T, c: &PowerConstants<T>) -> Result<(T, T, T)> {
    if !(theta > T::zero() && theta < T::PI()) {
        return Err(Error::Domain(format!("theta = {theta} not in (0, pi)")));
    }
    let (sn, cs) = theta.sin_cos();
    let v = c.a * sn.powf(-c.q);
    let cot = cs / sn;
    let vp = -c.q * cot * v;
    let vpp = c.q * v * ((c.q + T::one()) * cot * cot + T::one());
    Ok((v, vp, vpp))
}

/// `v'' + (N−2) cot θ v' − μv + v^p`.
pub fn power_operator<T: Scalar>(c: &PowerConstants<T>, theta: T, v: T, vp: T, vpp: T) -> T {
    let (sn, cs) = theta.sin_cos();
    vpp + (T::from_count(c.n) - T::lit(2.0)) * cs / sn * vp - c.mu * v + c.pow(v)
}

/// First-order form of the regularized radial equation: `(u', u'')`.
pub fn rhs_power_regularized<T: Scalar>(r: T, u: T, up: T, p: &PowerParams<T>) -> (T, T) {
    let c = &p.c;
    let two = T::lit(2.0);
    let upp = -(T::from_count(c.n) - two) / r * up - c.pow(u)
        + two * c.b * p.delta / (T::one() + p.delta * r * r) * (r * up + c.q * u);
    (up, upp)
}

/// Coefficient `c₂` of `u = u₀ + c₂ r² + O(r⁴)`.
pub fn power_series_coefficient<T: Scalar>(p: &PowerParams<T>, u0: T) -> T {
    let c = &p.c;
    let two = T::lit(2.0);
    (two * c.b * p.delta * c.q * u0 - c.pow(u0)) / (two * (T::from_count(c.n) - T::one()))
}

/// Shifted system `(x̃', ỹ')`.
pub fn rhs_power_shifted<T: Scalar>(s: T, x: T, y: T, p: &PowerParams<T>) -> (T, T) {
    let c = &p.c;
    let th = (c.m * s - p.alpha.ln() / c.q).tanh();
    (y, c.b * c.m * th * y + x - c.pow(x))
}

/// `(x̃, ỹ)` from the radial state at `r = e^{ms}`.
pub fn power_radial_to_phase<T: Scalar>(r: T, u: T, up: T, c: &PowerConstants<T>) -> Result<State<T>> {
    if !(r > T::zero()) {
        return Err(Error::NonPositiveRadius(r.as_f64()));
    }
    let rq = r.powf(c.q);
    Ok([rq * u / c.a, c.m * rq * (c.q * u + r * up) / c.a])
}

/// Lyapunov function `I = ỹ²/2 − x̃²/2 + x̃^{p+1}/(p+1)`.
pub fn lyapunov_i<T: Scalar>(x: T, y: T, c: &PowerConstants<T>) -> T {
    let two = T::lit(2.0);
    y * y / two - x * x / two + c.pow(x) * x / (c.p + T::one())
}

/// Shoots from the pole to the equator for one `α`.
pub fn shoot_power<T: Scalar>(p: &PowerParams<T>, cfg: &IntegratorConfig<T>) -> Result<Shot<T>> {
    if !spiral_condition(p.c.n, p.c.p) {
        return Err(Error::NotInSpiralRegime(format!("N = {}, p = {}", p.c.n, p.c.p)));
    }
    let c = p.c;
    let r_start = T::lit(R_START);
    let s_end = p.s_end();
    let r_end = (c.m * s_end).exp();
    let r_switch = r_end.min(T::one());
    if !(r_switch > r_start) {
        return Err(Error::InvalidParameter(format!(
            "alpha = {} puts the equator inside the series region",
            p.alpha
        )));
    }
    let u0 = p.u0();
    let c2 = power_series_coefficient(p, u0);
    let start = PhaseState::new(r_start, u0 + c2 * r_start * r_start, T::lit(2.0) * c2 * r_start);
    let radial = integrate_with_event(
        |r: T, st: &State<T>| {
            let (a, b) = rhs_power_regularized(r, st[0], st[1], p);
            [a, b]
        },
        |r: T, st: &State<T>| c.q * st[0] + r * st[1],
        start,
        r_switch,
        cfg,
    )?;
    let end = radial.last();
    let mut positive = radial.samples.iter().all(|s| s.x > T::zero());

    let shifted = if s_end > T::zero() {
        let ph = power_radial_to_phase(end.s, end.x, end.y, &c)?;
        let tr = integrate(
            |s: T, st: &State<T>| {
                let (a, b) = rhs_power_shifted(s, st[0], st[1], p);
                [a, b]
            },
            PhaseState::new(T::zero(), ph[0], ph[1]),
            s_end,
            cfg,
        )?;
        positive &= tr.samples.iter().all(|s| s.x > T::zero());
        Some(tr)
    } else {
        None
    };

    let phi = match &shifted {
        Some(tr) => tr.last().y,
        None => power_radial_to_phase(end.s, end.x, end.y, &c)?[1],
    };
    let trace = ShotTrace {
        series: SeriesStart { r_start, u0, c2 },
        radial,
        shifted,
        r_switch,
        s_end,
    };
    let result = ShotResult {
        alpha: p.alpha,
        phi,
        winding: trace.winding(),
        tangencies: trace.tangencies(),
        positive,
        steps: trace.steps(),
    };
    Ok(Shot { result, trace })
}

/// `(x̃, ỹ)` of a shot at any `s ≤ s_end`, using the series below `r_start`.
pub fn power_shifted_state_at<T: Scalar>(shot: &ShotTrace<T>, c: &PowerConstants<T>, s: T) -> Option<State<T>> {
    if s > shot.s_end {
        return None;
    }
    let r = (c.m * s).exp();
    if r > shot.r_switch {
        return shot.shifted.as_ref()?.eval(s);
    }
    let (u, up) = shot.radial_at(r)?;
    power_radial_to_phase(r, u, up, c).ok()
}

/// Power family as a shooting problem in `α` at fixed `(N, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerProblem<T> {
    pub n: u32,
    pub p: T,
}

impl<T: Scalar> ShootingProblem<T> for PowerProblem<T> {
    fn kind(&self) -> FamilyKind {
        FamilyKind::Power
    }

    fn dimension(&self) -> u32 {
        self.n
    }

    fn exponent(&self) -> Option<T> {
        Some(self.p)
    }

    fn shoot(&self, alpha: T, cfg: &IntegratorConfig<T>) -> Result<Shot<T>> {
        shoot_power(&PowerParams::new(self.n, self.p, alpha)?, cfg)
    }

    fn regime_note(&self) -> String {
        if spiral_condition(self.n, self.p) {
            format!("(1, 0) is a spiral for N = {}, p = {}; widen the alpha range", self.n, self.p)
        } else {
            format!("(1, 0) is not a spiral for N = {}, p = {}", self.n, self.p)
        }
    }
}

/// Heteroclinic orbit of `x̄' = ȳ`, `ȳ' = −(N−3−2q)mȳ + x̄ − x̄^p` leaving
/// `(0, 0)` along the unstable direction with `x̄ ≈ 2^q e^{qms}/A`.
pub fn limit_orbit_power<T: Scalar>(c: &PowerConstants<T>, s_end: T, cfg: &IntegratorConfig<T>) -> Result<OrbitTrace<T>> {
    let lam = c.q * c.m;
    let x0 = T::lit(LIMIT_X_START);
    let s_start = (x0 * c.a / T::lit(2.0).powf(c.q)).ln() / lam;
    if !(s_end > s_start) || !s_end.is_finite() {
        return Err(Error::InvalidParameter(format!("s_end = {s_end} must exceed {s_start}")));
    }
    let cc = *c;
    Ok(integrate(
        |_s: T, st: &State<T>| [st[1], -cc.b * cc.m * st[1] + st[0] - cc.pow(st[0])],
        PhaseState::new(s_start, x0, lam * x0),
        s_end,
        cfg,
    )?)
}

/// Start of [`limit_orbit_power`].
pub fn limit_power_s_start<T: Scalar>(c: &PowerConstants<T>) -> T {
    (T::lit(LIMIT_X_START) * c.a / T::lit(2.0).powf(c.q)).ln() / (c.q * c.m)
}

/// Regular profile from direct θ-integration; `x` is `v`, `y` is `v'`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerThetaProfile<T> {
    pub c: PowerConstants<T>,
    pub alpha: T,
    pub theta_start: T,
    pub c2: T,
    pub trace: OrbitTrace<T>,
}

impl<T: Scalar> PowerThetaProfile<T> {
    pub fn eval(&self, theta: T) -> Option<(T, T)> {
        if theta >= T::zero() && theta < self.theta_start {
            return Some((self.alpha + self.c2 * theta * theta, T::lit(2.0) * self.c2 * theta));
        }
        self.trace.eval(theta).map(|st| (st[0], st[1]))
    }
}

/// Integrates the θ-equation of the power family directly from the pole.
pub fn direct_theta_integrate_power<T: Scalar>(
    c: &PowerConstants<T>,
    alpha: T,
    theta_end: T,
    cfg: &IntegratorConfig<T>,
) -> Result<PowerThetaProfile<T>> {
    let theta_start = T::lit(THETA_START);
    if !(theta_end > theta_start && theta_end <= T::PI()) {
        return Err(Error::Domain(format!("theta_end = {theta_end} not in (theta_start, pi]")));
    }
    let k = T::from_count(c.n) - T::lit(2.0);
    let c2 = (c.mu * alpha - c.pow(alpha)) / (T::lit(2.0) * (T::from_count(c.n) - T::one()));
    let start = PhaseState::new(theta_start, alpha + c2 * theta_start * theta_start, T::lit(2.0) * c2 * theta_start);
    let cc = *c;
    let trace = integrate(
        |th: T, st: &State<T>| {
            let (sn, cs) = th.sin_cos();
            [st[1], -k * cs / sn * st[1] + cc.mu * st[0] - cc.pow(st[0])]
        },
        start,
        theta_end,
        cfg,
    )
    .map_err(|e| match e {
        OdeError::StepSizeUnderflow { s, .. } | OdeError::NonFinite { s } => Error::Stiff { theta: s },
        other => Error::Integrator(other),
    })?;
    Ok(PowerThetaProfile { c: *c, alpha, theta_start, c2, trace })
}
