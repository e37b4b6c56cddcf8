//! Scan of the shooting parameter `α`, bisection of sign changes of
//! `Φ(α) = ỹ(s_end; α)`, and branch indexing by winding count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{IntegratorConfig, OrbitTrace};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// `e^v` nonlinearity.
    #[serde(alias = "exp")]
    Exponential,
    /// `v^p` nonlinearity.
    Power,
}

impl FamilyKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyKind::Exponential => "exp",
            FamilyKind::Power => "power",
        }
    }
}

/// Outcome of one shot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotResult<T> {
    pub alpha: T,
    /// `Φ(α)`, the second phase component at the equator.
    pub phi: T,
    /// Zeros of the second phase component strictly before the equator.
    pub winding: usize,
    pub tangencies: usize,
    /// For the power family: the first phase component stayed positive.
    pub positive: bool,
    pub steps: usize,
}

/// Series data below the first integrated radius: `u ≈ u0 + c2 r²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesStart<T> {
    pub r_start: T,
    pub u0: T,
    pub c2: T,
}

/// Both integrated pieces of a shot: the regularized radial problem on
/// `[r_start, r_switch]` (state `(u, u')`) and the shifted phase system on
/// `[log r_switch, s_end]` (state `(x̃, ỹ)`).
#[derive(Debug, Clone, PartialEq)]
pub struct ShotTrace<T> {
    pub series: SeriesStart<T>,
    pub radial: OrbitTrace<T>,
    pub shifted: Option<OrbitTrace<T>>,
    pub r_switch: T,
    pub s_end: T,
}

impl<T: Scalar> ShotTrace<T> {
    pub fn winding(&self) -> usize {
        self.radial.winding() + self.shifted.as_ref().map_or(0, |t| t.winding())
    }

    pub fn tangencies(&self) -> usize {
        self.radial.tangencies.len() + self.shifted.as_ref().map_or(0, |t| t.tangencies.len())
    }

    pub fn steps(&self) -> usize {
        self.radial.stats.accepted + self.shifted.as_ref().map_or(0, |t| t.stats.accepted)
    }

    /// `(u, u')` of the radial piece at `0 ≤ r ≤ r_switch`.
    pub fn radial_at(&self, r: T) -> Option<(T, T)> {
        let ss = &self.series;
        if r >= T::zero() && r < ss.r_start {
            return Some((ss.u0 + ss.c2 * r * r, T::lit(2.0) * ss.c2 * r));
        }
        self.radial.eval(r).map(|st| (st[0], st[1]))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shot<T> {
    pub result: ShotResult<T>,
    pub trace: ShotTrace<T>,
}

/// A one-parameter family of initial value problems shot from the pole.
pub trait ShootingProblem<T: Scalar>: Sync {
    fn kind(&self) -> FamilyKind;
    fn dimension(&self) -> u32;
    fn exponent(&self) -> Option<T>;
    fn shoot(&self, alpha: T, cfg: &IntegratorConfig<T>) -> Result<Shot<T>>;

    /// Explanation attached to [`Error::NoRootsInRange`].
    fn regime_note(&self) -> String {
        String::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridSpacing {
    /// `α_k = α_min + k·step`.
    Uniform,
    /// `α_k = α_min·e^{k·step}`.
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig<T> {
    pub alpha_min: T,
    pub alpha_max: T,
    pub alpha_step: T,
    pub spacing: GridSpacing,
    pub bisect_tol: T,
    pub max_bisect: usize,
}

impl<T: Scalar> Default for ScanConfig<T> {
    fn default() -> Self {
        Self {
            alpha_min: T::lit(0.5),
            alpha_max: T::lit(25.0),
            alpha_step: T::lit(0.05),
            spacing: GridSpacing::Uniform,
            bisect_tol: T::lit(1e-10),
            max_bisect: 200,
        }
    }
}

impl<T: Scalar> ScanConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_min < self.alpha_max) || !self.alpha_max.is_finite() || !self.alpha_min.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha range [{}, {}] is empty",
                self.alpha_min, self.alpha_max
            )));
        }
        if !(self.alpha_step > T::zero()) {
            return Err(Error::InvalidParameter("alpha_step must be positive".into()));
        }
        if !(self.bisect_tol > T::zero()) {
            return Err(Error::InvalidParameter("bisect_tol must be positive".into()));
        }
        if self.spacing == GridSpacing::Geometric && !(self.alpha_min > T::zero()) {
            return Err(Error::InvalidParameter("geometric grid needs alpha_min > 0".into()));
        }
        Ok(())
    }

    /// Grid points, always including both ends of the range.
    pub fn grid(&self) -> Result<Vec<T>> {
        self.validate()?;
        let (lo, hi) = match self.spacing {
            GridSpacing::Uniform => (self.alpha_min, self.alpha_max),
            GridSpacing::Geometric => (self.alpha_min.ln(), self.alpha_max.ln()),
        };
        let count = ((hi - lo) / self.alpha_step + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
        let mut pts: Vec<T> = (0..=count).map(|k| lo + T::from_count(k as u32) * self.alpha_step).collect();
        if *pts.last().expect("at least one point") < hi - self.alpha_step * T::lit(1e-6) {
            pts.push(hi);
        }
        if self.spacing == GridSpacing::Geometric {
            for p in pts.iter_mut() {
                *p = p.exp();
            }
            pts[0] = self.alpha_min;
            *pts.last_mut().expect("non-empty") = self.alpha_max;
        }
        Ok(pts)
    }
}

/// A converged root `α_j` of `Φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch<T> {
    pub alpha_root: T,
    /// Zeros of `ỹ` on `(−∞, s_end]` at the root, the endpoint zero included.
    pub winding: usize,
    pub phi_at_root: T,
    pub family: FamilyKind,
    #[serde(rename = "N")]
    pub n: u32,
    pub p: Option<T>,
    pub bracket: (T, T),
    /// `|Φ(hi) − Φ(lo)| / (hi − lo)` over the final bracket.
    pub slope: T,
    pub iterations: usize,
}

/// Final state of a bisection.
#[derive(Debug, Clone, PartialEq)]
pub struct Bisection<T, R> {
    pub lo: T,
    pub hi: T,
    pub f_lo: T,
    pub f_hi: T,
    pub at_lo: R,
    pub at_hi: R,
    pub iterations: usize,
    /// Bracket width before each halving, then the final width.
    pub widths: Vec<T>,
}

impl<T: Scalar, R> Bisection<T, R> {
    pub fn midpoint(&self) -> T {
        self.lo + (self.hi - self.lo) / T::lit(2.0)
    }
}

fn strict_sign<T: Scalar>(v: T) -> i8 {
    if v > T::zero() {
        1
    } else if v < T::zero() {
        -1
    } else {
        0
    }
}

/// Bisection on `f(α) = (value, payload)` until the bracket is at most `tol` wide.
pub fn bisect<T, R, F>(mut f: F, lo: T, hi: T, tol: T, max_iter: usize) -> Result<Bisection<T, R>>
where
    T: Scalar,
    F: FnMut(T) -> Result<(T, R)>,
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (mut f_lo, mut at_lo) = f(lo)?;
    let (mut f_hi, mut at_hi) = f(hi)?;
    let (sl, sh) = (strict_sign(f_lo), strict_sign(f_hi));
    if sl == sh || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::SameSign { lo: lo.as_f64(), hi: hi.as_f64(), phi_lo: f_lo.as_f64(), phi_hi: f_hi.as_f64() });
    }
    let mut widths = vec![hi - lo];
    let mut iterations = 0;
    while hi - lo > tol {
        if iterations >= max_iter {
            return Err(Error::MaxIterations(max_iter));
        }
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let (fm, at_mid) = f(mid)?;
        iterations += 1;
        if fm == T::zero() {
            // Exact zero: collapse the bracket onto it.
            lo = mid;
            hi = mid;
            f_lo = fm;
            f_hi = fm;
            widths.push(T::zero());
            return Ok(Bisection { lo, hi, f_lo, f_hi, at_lo: at_mid, at_hi, iterations, widths });
        }
        if strict_sign(fm) == strict_sign(f_lo) {
            lo = mid;
            f_lo = fm;
            at_lo = at_mid;
        } else {
            hi = mid;
            f_hi = fm;
            at_hi = at_mid;
        }
        widths.push(hi - lo);
    }
    Ok(Bisection { lo, hi, f_lo, f_hi, at_lo, at_hi, iterations, widths })
}

/// Refines a sign change of `Φ` on `[alpha_lo, alpha_hi]` to `scan.bisect_tol`.
pub fn bisect_root<T, P>(
    alpha_lo: T,
    alpha_hi: T,
    problem: &P,
    scan: &ScanConfig<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<Branch<T>>
where
    T: Scalar,
    P: ShootingProblem<T> + ?Sized,
{
    let shot = |a: T| problem.shoot(a, cfg).map(|s| (s.result.phi, s.result));
    let bis = bisect(shot, alpha_lo, alpha_hi, scan.bisect_tol, scan.max_bisect)?;
    let mid = bis.midpoint();
    let at_mid = problem.shoot(mid, cfg)?.result;
    let width = bis.hi - bis.lo;
    let slope = if width > T::zero() { (bis.f_hi - bis.f_lo).abs() / width } else { T::zero() };
    Ok(Branch {
        alpha_root: mid,
        winding: bis.at_lo.winding.max(bis.at_hi.winding),
        phi_at_root: at_mid.phi,
        family: problem.kind(),
        n: problem.dimension(),
        p: problem.exponent(),
        bracket: (bis.lo, bis.hi),
        slope,
        iterations: bis.iterations,
    })
}

/// `Φ` on every grid point of `scan`, evaluated in parallel.
pub fn evaluate_grid<T, P>(problem: &P, scan: &ScanConfig<T>, cfg: &IntegratorConfig<T>) -> Result<Vec<ShotResult<T>>>
where
    T: Scalar,
    P: ShootingProblem<T> + ?Sized,
{
    let grid = scan.grid()?;
    grid.par_iter().map(|&a| problem.shoot(a, cfg).map(|s| s.result)).collect()
}

/// Adjacent grid sign changes of `Φ`; exact grid zeros come back as `(a, a)`.
pub fn sign_change_brackets<T: Scalar>(shots: &[ShotResult<T>]) -> Vec<(T, T)> {
    let mut out = Vec::new();
    for (k, w) in shots.windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        if a.phi == T::zero() {
            if k == 0 || shots[k - 1].phi != T::zero() {
                out.push((a.alpha, a.alpha));
            }
            continue;
        }
        if b.phi != T::zero() && strict_sign(a.phi) != strict_sign(b.phi) {
            out.push((a.alpha, b.alpha));
        }
    }
    if let Some(last) = shots.last() {
        if last.phi == T::zero() && shots.len() >= 2 && shots[shots.len() - 2].phi != T::zero() {
            out.push((last.alpha, last.alpha));
        }
    }
    out
}

/// Finds every sign change of `Φ` on the scan grid and bisects each one.
pub fn scan<T, P>(problem: &P, scan_cfg: &ScanConfig<T>, cfg: &IntegratorConfig<T>) -> Result<Vec<Branch<T>>>
where
    T: Scalar,
    P: ShootingProblem<T> + ?Sized,
{
    let shots = evaluate_grid(problem, scan_cfg, cfg)?;
    let brackets = sign_change_brackets(&shots);
    if brackets.is_empty() {
        return Err(Error::NoRootsInRange {
            alpha_min: scan_cfg.alpha_min.as_f64(),
            alpha_max: scan_cfg.alpha_max.as_f64(),
            reason: problem.regime_note(),
        });
    }
    let eps = scan_cfg.alpha_step / T::lit(10.0);
    let branches: Result<Vec<Branch<T>>> = brackets
        .par_iter()
        .map(|&(lo, hi)| {
            if lo == hi {
                exact_grid_root(lo, eps, problem, cfg)
            } else {
                bisect_root(lo, hi, problem, scan_cfg, cfg)
            }
        })
        .collect();
    let mut branches = branches?;
    branches.sort_by(|a, b| a.alpha_root.partial_cmp(&b.alpha_root).expect("finite roots"));
    branches.dedup_by(|b, a| b.alpha_root == a.alpha_root);
    Ok(branches)
}

fn exact_grid_root<T, P>(alpha: T, eps: T, problem: &P, cfg: &IntegratorConfig<T>) -> Result<Branch<T>>
where
    T: Scalar,
    P: ShootingProblem<T> + ?Sized,
{
    let lo = problem.shoot(alpha - eps, cfg)?.result;
    let hi = problem.shoot(alpha + eps, cfg)?.result;
    Ok(Branch {
        alpha_root: alpha,
        winding: lo.winding.max(hi.winding),
        phi_at_root: T::zero(),
        family: problem.kind(),
        n: problem.dimension(),
        p: problem.exponent(),
        bracket: (alpha, alpha),
        slope: (hi.phi - lo.phi).abs() / (eps + eps),
        iterations: 0,
    })
}
