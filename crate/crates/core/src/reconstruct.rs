//! Maps shots back to `v(θ)` on `[0, π/2]`, reflects onto `[0, π]`, and
//! computes solver-independent diagnostics: finite-difference residuals,
//! the Neumann values, the sphere integral identity, and the singular
//! solution `U(R, σ)` in the plane.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exp_family::{kappa, shifted_state_at, shoot_exp, ExpParams, ThetaProfile};
use crate::lane_emden::{power_shifted_state_at, shoot_power, PowerConstants, PowerParams, PowerThetaProfile};
use crate::ode::{IntegratorConfig, OrbitTrace};
use crate::scalar::Scalar;
use crate::shooting::{Branch, FamilyKind, ShotResult, ShotTrace};

/// Default number of profile samples on `[0, π]`.
pub const PROFILE_SAMPLES: usize = 2001;
/// Default residual grid spacing.
pub const RESIDUAL_H: f64 = 1e-4;
/// Residual grid is clipped to `[θ_clip, π − θ_clip]`.
pub const RESIDUAL_CLIP: f64 = 1e-4;

/// `θ = 2 atan(eᵗ)`.
pub fn theta_of_t<T: Scalar>(t: T) -> Result<T> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("t = {t} is not finite")));
    }
    Ok(T::lit(2.0) * t.exp().atan())
}

/// `t = log tan(θ/2)`.
pub fn t_of_theta<T: Scalar>(theta: T) -> Result<T> {
    if !(theta > T::zero() && theta < T::PI()) {
        return Err(Error::Domain(format!("theta = {theta} not in (0, pi)")));
    }
    Ok((theta / T::lit(2.0)).tan().ln())
}

/// Anything that can report `(v, v')` at an angle.
pub trait ProfileEval<T: Scalar> {
    fn eval(&self, theta: T) -> Option<(T, T)>;

    /// `(v, v')` at `θ(t)`; families override this to avoid the round trip through θ.
    fn eval_t(&self, t: T) -> Option<(T, T)> {
        self.eval(theta_of_t(t).ok()?)
    }
}

impl<T: Scalar> ProfileEval<T> for ThetaProfile<T> {
    fn eval(&self, theta: T) -> Option<(T, T)> {
        ThetaProfile::eval(self, theta)
    }
}

impl<T: Scalar> ProfileEval<T> for PowerThetaProfile<T> {
    fn eval(&self, theta: T) -> Option<(T, T)> {
        PowerThetaProfile::eval(self, theta)
    }
}

/// A shot together with the map back to `v(θ)`, reflected about `π/2`.
#[derive(Debug, Clone, PartialEq)]
pub enum BranchSolution<T> {
    Exponential { params: ExpParams<T>, trace: ShotTrace<T>, result: ShotResult<T> },
    Power { params: PowerParams<T>, trace: ShotTrace<T>, result: ShotResult<T> },
}

impl<T: Scalar> BranchSolution<T> {
    pub fn exponential(n: u32, alpha: T, cfg: &IntegratorConfig<T>) -> Result<Self> {
        let params = ExpParams::new(n, alpha)?;
        let shot = shoot_exp(&params, cfg)?;
        Ok(Self::Exponential { params, trace: shot.trace, result: shot.result })
    }

    pub fn power(n: u32, p: T, alpha: T, cfg: &IntegratorConfig<T>) -> Result<Self> {
        let params = PowerParams::new(n, p, alpha)?;
        let shot = shoot_power(&params, cfg)?;
        Ok(Self::Power { params, trace: shot.trace, result: shot.result })
    }

    /// Re-shoots at a branch root.
    pub fn from_branch(b: &Branch<T>, cfg: &IntegratorConfig<T>) -> Result<Self> {
        match (b.family, b.p) {
            (FamilyKind::Exponential, _) => Self::exponential(b.n, b.alpha_root, cfg),
            (FamilyKind::Power, Some(p)) => Self::power(b.n, p, b.alpha_root, cfg),
            (FamilyKind::Power, None) => Err(Error::InvalidParameter("power branch without exponent".into())),
        }
    }

    pub fn family(&self) -> FamilyKind {
        match self {
            Self::Exponential { .. } => FamilyKind::Exponential,
            Self::Power { .. } => FamilyKind::Power,
        }
    }

    pub fn n(&self) -> u32 {
        match self {
            Self::Exponential { params, .. } => params.n,
            Self::Power { params, .. } => params.c.n,
        }
    }

    pub fn p(&self) -> Option<T> {
        match self {
            Self::Exponential { .. } => None,
            Self::Power { params, .. } => Some(params.c.p),
        }
    }

    pub fn alpha(&self) -> T {
        self.result().alpha
    }

    pub fn result(&self) -> &ShotResult<T> {
        match self {
            Self::Exponential { result, .. } | Self::Power { result, .. } => result,
        }
    }

    pub fn trace(&self) -> &ShotTrace<T> {
        match self {
            Self::Exponential { trace, .. } | Self::Power { trace, .. } => trace,
        }
    }

    /// `(v, v')` at `t ≤ 0` on the pole side.
    fn eval_half(&self, t: T) -> Option<(T, T)> {
        let two = T::lit(2.0);
        match self {
            Self::Exponential { params: p, trace, .. } => {
                let s = t + p.alpha / two;
                if s <= trace.r_switch.ln() {
                    let r = s.exp();
                    let (u, up) = trace.radial_at(r)?;
                    let dr2 = p.delta * r * r;
                    let v = u + p.alpha + two * dr2.ln_1p();
                    let vp = (up * (T::one() + dr2) + T::lit(4.0) * p.delta * r) / (two * p.delta.sqrt());
                    Some((v, vp))
                } else {
                    let st = shifted_state_at(trace, p, s)?;
                    let v = st[0] + two * t.cosh().ln() + p.kappa;
                    Some((v, t.cosh() * st[1] + two * t.sinh()))
                }
            }
            Self::Power { params: p, trace, .. } => {
                let c = &p.c;
                let tau = t;
                let s = tau / c.m + p.alpha.ln() / (c.m * c.q);
                let r = (c.m * s).exp();
                if r <= trace.r_switch {
                    let (u, up) = trace.radial_at(r)?;
                    let g = T::one() + p.delta * r * r;
                    let scale = p.alpha / p.u0();
                    let gq = g.powf(c.q);
                    let v = scale * gq * u;
                    let dvdr = scale * (two * c.q * p.delta * r * gq / g * u + gq * up);
                    Some((v, dvdr * g / (two * p.delta.sqrt())))
                } else {
                    let st = power_shifted_state_at(trace, c, s)?;
                    let ch = tau.cosh();
                    let v = c.a * ch.powf(c.q) * st[0];
                    let vp = c.a * ch.powf(c.q + T::one()) * (c.q * tau.tanh() * st[0] + st[1] / c.m);
                    Some((v, vp))
                }
            }
        }
    }
}

impl<T: Scalar> ProfileEval<T> for BranchSolution<T> {
    fn eval(&self, theta: T) -> Option<(T, T)> {
        if theta == T::zero() {
            return Some((self.alpha(), T::zero()));
        }
        if theta == T::PI() {
            return Some((self.alpha(), T::zero()));
        }
        let t = t_of_theta(theta).ok()?;
        self.eval_t(t)
    }

    /// In `t = log tan(θ/2)` for the exponential family and `τ = log tan(θ/2)` for the power family.
    fn eval_t(&self, t: T) -> Option<(T, T)> {
        if t <= T::zero() {
            self.eval_half(t)
        } else {
            self.eval_half(-t).map(|(v, vp)| (v, -vp))
        }
    }
}

/// Samples `(θ, v, v')` on `[0, π]`, symmetric about `π/2` by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionProfile<T> {
    pub family: FamilyKind,
    #[serde(rename = "N")]
    pub n: u32,
    pub p: Option<T>,
    pub alpha_root: T,
    pub winding: usize,
    pub theta: Vec<T>,
    pub v: Vec<T>,
    pub vp: Vec<T>,
}

impl<T: Scalar> SolutionProfile<T> {
    /// Uniform samples `θ_k = kπ/(n−1)`; the second half mirrors the first.
    pub fn from_solution(sol: &BranchSolution<T>, samples: usize, winding: usize) -> Result<Self> {
        if samples < 3 || samples % 2 == 0 {
            return Err(Error::InvalidParameter(format!("profile needs an odd sample count >= 3, got {samples}")));
        }
        let last = samples - 1;
        let half = last / 2;
        let mut theta = Vec::with_capacity(samples);
        let mut v = vec![T::zero(); samples];
        let mut vp = vec![T::zero(); samples];
        for k in 0..samples {
            theta.push(if k == half { T::FRAC_PI_2() } else if k == last { T::PI() } else { T::PI() * T::from_count(k as u32) / T::from_count(last as u32) });
        }
        for k in 0..=half {
            let (a, b) = sol
                .eval(theta[k])
                .ok_or_else(|| Error::IncompleteTrace(format!("no value at theta = {}", theta[k])))?;
            v[k] = a;
            vp[k] = b;
            if k < half {
                v[last - k] = a;
                vp[last - k] = -b;
            }
        }
        Ok(Self {
            family: sol.family(),
            n: sol.n(),
            p: sol.p(),
            alpha_root: sol.alpha(),
            winding,
            theta,
            v,
            vp,
        })
    }

    pub fn min_v(&self) -> T {
        self.v.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_v(&self) -> T {
        self.v.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// `v'` at the sample nearest to `π/2`.
    pub fn vp_half_pi(&self) -> T {
        self.vp[self.vp.len() / 2]
    }
}

impl<T: Scalar> ProfileEval<T> for SolutionProfile<T> {
    /// Cubic Hermite interpolation on the stored values and derivatives.
    fn eval(&self, theta: T) -> Option<(T, T)> {
        let n = self.theta.len();
        if n < 2 || theta < self.theta[0] || theta > self.theta[n - 1] {
            return None;
        }
        let k = self.theta.partition_point(|&x| x <= theta).clamp(1, n - 1) - 1;
        let (x0, x1) = (self.theta[k], self.theta[k + 1]);
        let h = x1 - x0;
        let s = (theta - x0) / h;
        let (y0, y1, d0, d1) = (self.v[k], self.v[k + 1], self.vp[k] * h, self.vp[k + 1] * h);
        let (two, three) = (T::lit(2.0), T::lit(3.0));
        let s2 = s * s;
        let s3 = s2 * s;
        let v = (two * s3 - three * s2 + T::one()) * y0 + (s3 - two * s2 + s) * d0 + (-two * s3 + three * s2) * y1 + (s3 - s2) * d1;
        let dv = (T::lit(6.0) * (s2 - s)) * y0 + (three * s2 - T::lit(4.0) * s + T::one()) * d0 + (T::lit(6.0) * (s - s2)) * y1 + (three * s2 - two * s) * d1;
        Some((v, dv / h))
    }
}

/// Profile from an orbit of `(x, x')` in `t`, with `v = x + v*`, `v' = cosh t x' + 2 sinh t`.
pub fn profile_from_trace<T: Scalar>(trace: &OrbitTrace<T>, n: u32, alpha: T, samples: usize) -> Result<SolutionProfile<T>> {
    let (t0, t1) = trace.span();
    if t0 > T::lit(-15.0) || t1 < T::zero() {
        return Err(Error::IncompleteTrace(format!("trace spans [{t0}, {t1}], need [-15, 0]")));
    }
    if samples < 3 || samples % 2 == 0 {
        return Err(Error::InvalidParameter(format!("profile needs an odd sample count >= 3, got {samples}")));
    }
    let kap = kappa::<T>(n);
    let lo = theta_of_t(t0)?;
    let last = samples - 1;
    let half = last / 2;
    let mut theta = vec![T::zero(); samples];
    let mut v = vec![T::zero(); samples];
    let mut vp = vec![T::zero(); samples];
    for k in 0..=half {
        let th = if k == half { T::FRAC_PI_2() } else { lo + (T::FRAC_PI_2() - lo) * T::from_count(k as u32) / T::from_count(half as u32) };
        let t = if k == half { T::zero() } else { t_of_theta(th)?.max(t0) };
        let st = trace.eval(t).ok_or_else(|| Error::IncompleteTrace(format!("no state at t = {t}")))?;
        theta[k] = th;
        theta[last - k] = T::PI() - th;
        v[k] = st[0] + T::lit(2.0) * t.cosh().ln() + kap;
        vp[k] = t.cosh() * st[1] + T::lit(2.0) * t.sinh();
        if k < half {
            v[last - k] = v[k];
            vp[last - k] = -vp[k];
        }
    }
    Ok(SolutionProfile {
        family: FamilyKind::Exponential,
        n,
        p: None,
        alpha_root: alpha,
        winding: trace.winding(),
        theta,
        v,
        vp,
    })
}

/// The equation whose residual is measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SphereEquation<T> {
    /// `v'' + (N−2) cot θ v' + 2(N−2)(e^v − 1)`.
    Exponential { n: u32 },
    /// `v'' + (N−2) cot θ v' − μv + v^p`.
    Power(PowerConstants<T>),
}

impl<T: Scalar> SphereEquation<T> {
    pub fn for_solution(sol: &BranchSolution<T>) -> Self {
        match sol {
            BranchSolution::Exponential { params, .. } => Self::Exponential { n: params.n },
            BranchSolution::Power { params, .. } => Self::Power(params.c),
        }
    }

    pub fn apply(&self, theta: T, v: T, vp: T, vpp: T) -> T {
        match self {
            Self::Exponential { n } => crate::exp_family::sphere_operator(*n, theta, v, vp, vpp),
            Self::Power(c) => crate::lane_emden::power_operator(c, theta, v, vp, vpp),
        }
    }

    pub fn n(&self) -> u32 {
        match self {
            Self::Exponential { n } => *n,
            Self::Power(c) => c.n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport<T> {
    /// Max over the interior grid of the equation residual.
    pub residual_max: T,
    pub residual_argmax: T,
    /// Max of `|D v − v'|`: the sampled derivative against differences of the sampled values.
    pub derivative_mismatch: T,
    pub h: T,
    pub points: usize,
}

const D1: [f64; 3] = [3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];

fn centered_d1<T: Scalar>(f: &[T], k: usize, h: T) -> T {
    let mut acc = T::zero();
    for (j, &c) in D1.iter().enumerate() {
        acc = acc + T::lit(c) * (f[k + j + 1] - f[k - j - 1]);
    }
    acc / h
}

/// Resamples `(v, v')` on the uniform grid `θ_lo + kh` in `[θ_lo, θ_hi]` and
/// evaluates the equation with `v''` from sixth-order centered differences
/// of the sampled `v'`.
pub fn residual_on<T, P>(prof: &P, eq: &SphereEquation<T>, h: T, theta_lo: T, theta_hi: T) -> Result<ResidualReport<T>>
where
    T: Scalar,
    P: ProfileEval<T> + ?Sized,
{
    if !(h > T::zero()) || !(theta_lo > T::zero()) || !(theta_hi < T::PI()) || !(theta_hi > theta_lo) {
        return Err(Error::InvalidParameter(format!("bad residual grid: h = {h}, [{theta_lo}, {theta_hi}]")));
    }
    let count = ((theta_hi - theta_lo) / h + T::lit(1e-9)).floor().to_usize().unwrap_or(0) + 1;
    if count < 7 {
        return Err(Error::GridTooCoarse(format!("{count} points in [{theta_lo}, {theta_hi}] at h = {h}")));
    }
    let mut th = Vec::with_capacity(count);
    let mut v = Vec::with_capacity(count);
    let mut vp = Vec::with_capacity(count);
    for k in 0..count {
        let x = theta_lo + h * T::from_count(k as u32);
        let (a, b) = prof
            .eval(x)
            .ok_or_else(|| Error::IncompleteTrace(format!("profile undefined at theta = {x}")))?;
        th.push(x);
        v.push(a);
        vp.push(b);
    }
    let mut worst = T::zero();
    let mut arg = th[3];
    let mut mismatch = T::zero();
    for k in 3..count - 3 {
        let vpp = centered_d1(&vp, k, h);
        let r = eq.apply(th[k], v[k], vp[k], vpp).abs();
        if !(r <= worst) {
            worst = r;
            arg = th[k];
        }
        let d = (centered_d1(&v, k, h) - vp[k]).abs();
        if !(d <= mismatch) {
            mismatch = d;
        }
    }
    Ok(ResidualReport { residual_max: worst, residual_argmax: arg, derivative_mismatch: mismatch, h, points: count - 6 })
}

/// Residual on `[1e−4, π − 1e−4]` with grid spacing `h`.
pub fn residual<T, P>(prof: &P, eq: &SphereEquation<T>, h: T) -> Result<ResidualReport<T>>
where
    T: Scalar,
    P: ProfileEval<T> + ?Sized,
{
    let clip = T::lit(RESIDUAL_CLIP);
    residual_on(prof, eq, h, clip, T::PI() - clip)
}

/// `v'` near the pole (`θ = 1e−4`) and at the equator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeumannValues<T> {
    pub vp_pole: T,
    pub vp_half_pi: T,
}

pub fn neumann_values<T: Scalar, P: ProfileEval<T> + ?Sized>(prof: &P) -> Result<NeumannValues<T>> {
    let at = |th: T| prof.eval(th).map(|x| x.1).ok_or_else(|| Error::IncompleteTrace(format!("no value at theta = {th}")));
    Ok(NeumannValues { vp_pole: at(T::lit(RESIDUAL_CLIP))?, vp_half_pi: at(T::FRAC_PI_2())? })
}

/// `∫₀^π f(v(θ)) sin^{N−2}θ dθ` computed in `t = log tan(θ/2)`, where
/// `dθ = sech t dt` and `sin θ = sech t`, by composite Gauss–Legendre on `[−t_max, t_max]`.
pub fn sphere_integral<T, P, F>(prof: &P, n: u32, f: F, t_max: f64, panels: usize) -> Result<f64>
where
    T: Scalar,
    P: ProfileEval<T> + ?Sized,
    F: Fn(f64) -> f64,
{
    let rule = GaussLegendre::new(NonZeroUsize::new(10).expect("nonzero"));
    let width = 2.0 * t_max / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let a = -t_max + width * k as f64;
        for &(x, w) in rule.as_node_weight_pairs() {
            let t = a + 0.5 * width * (x + 1.0);
            let (v, _) = prof
                .eval_t(T::lit(t))
                .ok_or_else(|| Error::IncompleteTrace(format!("no value at t = {t}")))?;
            let sech = 1.0 / t.cosh();
            total += 0.5 * width * w * f(v.as_f64()) * sech.powi(n as i32 - 1);
        }
    }
    Ok(total)
}

/// `∫₀^π (e^v − 1) sin^{N−2}θ dθ`, zero for every solution of the exponential problem.
pub fn sphere_identity<T: Scalar, P: ProfileEval<T> + ?Sized>(prof: &P, n: u32) -> Result<f64> {
    sphere_integral(prof, n, f64::exp_m1, 40.0, 800)
}

/// Singular solution in `R^N \ {0}` built from an exponential-family profile:
/// `U = −2 log R + log 2(N−2) + v(θ)`.
pub fn eval_singular_solution<T: Scalar, P: ProfileEval<T> + ?Sized>(r: T, theta: T, n: u32, prof: &P) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::NonPositiveRadius(r.as_f64()));
    }
    let (v, _) = prof
        .eval(theta)
        .ok_or_else(|| Error::Domain(format!("profile undefined at theta = {theta}")))?;
    Ok(-T::lit(2.0) * r.ln() + (T::lit(2.0) * (T::from_count(n) - T::lit(2.0))).ln() + v)
}

/// Singular solution of the power problem: `U = R^{−q} v(θ)`.
pub fn eval_singular_solution_power<T: Scalar, P: ProfileEval<T> + ?Sized>(r: T, theta: T, q: T, prof: &P) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::NonPositiveRadius(r.as_f64()));
    }
    let (v, _) = prof
        .eval(theta)
        .ok_or_else(|| Error::Domain(format!("profile undefined at theta = {theta}")))?;
    Ok(r.powf(-q) * v)
}
