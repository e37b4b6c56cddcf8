//! Adaptive Dormand–Prince 5(4) integration of planar first-order systems,
//! with continuous (dense) output and zero-crossing detection.
//!
//! Every equation form in the crate is written as a two-component system
//! `d/ds (x, y) = f(s, x, y)`. The integrator records each accepted step,
//! keeps the order-4 continuous extension of the step so the orbit can be
//! evaluated anywhere on the span, and locates sign changes of an event
//! function (by default the second component) by bisection on that
//! interpolant.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// Two-component state `(x, y)`.
pub type State<T> = [T; 2];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("non-finite state or derivative at s = {s}")]
    NonFinite { s: f64 },
    #[error("exceeded {steps} steps at s = {s}")]
    MaxStepsExceeded { steps: usize, s: f64 },
    #[error("step size collapsed to {h:e} at s = {s}")]
    StepSizeUnderflow { s: f64, h: f64 },
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("integration span must be increasing (from {from} to {to})")]
    InvalidSpan { from: f64, to: f64 },
    #[error("no sign change on [{a}, {b}]")]
    NoSignChange { a: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_step: T,
    pub max_steps: usize,
    pub event_refine_tol: T,
}

impl<T: Scalar> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-10),
            abs_tol: T::lit(1e-12),
            max_step: T::lit(0.25),
            max_steps: 2_000_000,
            event_refine_tol: T::lit(1e-12),
        }
    }
}

impl<T: Scalar> IntegratorConfig<T> {
    pub fn validate(&self) -> Result<(), OdeError> {
        let pos = |v: T| v > T::zero() && !v.is_nan();
        if !pos(self.rel_tol) {
            return Err(OdeError::InvalidConfig("rel_tol must be positive"));
        }
        if !pos(self.abs_tol) {
            return Err(OdeError::InvalidConfig("abs_tol must be positive"));
        }
        if !pos(self.max_step) {
            return Err(OdeError::InvalidConfig("max_step must be positive"));
        }
        if self.max_steps == 0 {
            return Err(OdeError::InvalidConfig("max_steps must be at least 1"));
        }
        if !pos(self.event_refine_tol) {
            return Err(OdeError::InvalidConfig("event_refine_tol must be positive"));
        }
        Ok(())
    }

    /// Same configuration with `rel_tol` and `abs_tol` multiplied by `factor`.
    pub fn with_scaled_tolerances(&self, factor: T) -> Self {
        Self {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }

    pub fn with_max_step(&self, max_step: T) -> Self {
        Self { max_step, ..*self }
    }
}

/// A point of an orbit: independent variable `s` and the state `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState<T> {
    pub s: T,
    pub x: T,
    pub y: T,
}

impl<T: Scalar> PhaseState<T> {
    pub fn new(s: T, x: T, y: T) -> Self {
        Self { s, x, y }
    }

    #[inline]
    pub fn state(&self) -> State<T> {
        [self.x, self.y]
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.s.is_finite() && self.x.is_finite() && self.y.is_finite()
    }

    pub fn norm(&self) -> T {
        self.x.hypot(self.y)
    }
}

/// Order-4 continuous extension of one accepted step on `[s0, s0 + h]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseSegment<T> {
    pub s0: T,
    pub h: T,
    coeffs: [State<T>; 5],
}

impl<T: Scalar> DenseSegment<T> {
    #[inline]
    pub fn s_end(&self) -> T {
        self.s0 + self.h
    }

    /// Evaluates the interpolant; values outside the step are extrapolated.
    pub fn eval(&self, s: T) -> State<T> {
        let theta = (s - self.s0) / self.h;
        let theta1 = T::one() - theta;
        let c = &self.coeffs;
        let mut out = [T::zero(); 2];
        for (i, o) in out.iter_mut().enumerate() {
            *o = c[0][i] + theta * (c[1][i] + theta1 * (c[2][i] + theta * (c[3][i] + theta1 * c[4][i])));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    /// Transversal sign change; counted in the winding.
    Crossing,
    /// `|g|` dipped below `abs_tol` without changing sign; reported only.
    Tangency,
    /// Zero located at the final point of the span; reported only.
    Terminal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event<T> {
    pub s: T,
    pub x: T,
    pub y: T,
    pub kind: EventKind,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

/// Sampled orbit produced by [`integrate`].
///
/// `samples` are the accepted step endpoints (strictly increasing in `s`),
/// `segments[i]` interpolates between `samples[i]` and `samples[i + 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitTrace<T> {
    pub samples: Vec<PhaseState<T>>,
    pub segments: Vec<DenseSegment<T>>,
    pub events: Vec<Event<T>>,
    pub tangencies: Vec<Event<T>>,
    pub stats: IntegrationStats,
}

impl<T: Scalar> OrbitTrace<T> {
    /// Number of transversal zeros of the event function on the span.
    #[inline]
    pub fn winding(&self) -> usize {
        self.events.len()
    }

    pub fn first(&self) -> PhaseState<T> {
        self.samples[0]
    }

    pub fn last(&self) -> PhaseState<T> {
        *self.samples.last().expect("trace has at least one sample")
    }

    pub fn span(&self) -> (T, T) {
        (self.first().s, self.last().s)
    }

    /// Dense evaluation at `s`, or `None` outside the integrated span.
    pub fn eval(&self, s: T) -> Option<State<T>> {
        let (a, b) = self.span();
        if !(s >= a && s <= b) {
            return None;
        }
        if self.segments.is_empty() {
            return Some(self.first().state());
        }
        if s == b {
            return Some(self.last().state());
        }
        let idx = self.segments.partition_point(|seg| seg.s_end() <= s);
        let seg = &self.segments[idx.min(self.segments.len() - 1)];
        Some(seg.eval(s))
    }
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[inline]
fn finite<T: Scalar>(v: &State<T>) -> bool {
    v[0].is_finite() && v[1].is_finite()
}

#[inline]
fn axpy<T: Scalar>(y: &State<T>, h: T, terms: &[(f64, &State<T>)]) -> State<T> {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = T::zero();
        for (c, k) in terms {
            acc = acc + T::lit(*c) * k[i];
        }
        *o = *o + h * acc;
    }
    out
}

fn error_norm<T: Scalar>(y0: &State<T>, y1: &State<T>, err: &State<T>, cfg: &IntegratorConfig<T>) -> T {
    let mut acc = T::zero();
    for i in 0..2 {
        let sc = cfg.abs_tol + cfg.rel_tol * y0[i].abs().max(y1[i].abs());
        let e = err[i] / sc;
        acc = acc + e * e;
    }
    (acc / T::lit(2.0)).sqrt()
}

fn initial_step<T, F>(rhs: &F, s: T, y: &State<T>, f0: &State<T>, span: T, cfg: &IntegratorConfig<T>) -> T
where
    T: Scalar,
    F: Fn(T, &State<T>) -> State<T>,
{
    let norm = |v: &State<T>, w: &State<T>| {
        let mut acc = T::zero();
        for i in 0..2 {
            let sc = cfg.abs_tol + cfg.rel_tol * w[i].abs();
            acc = acc + (v[i] / sc).powi(2);
        }
        (acc / T::lit(2.0)).sqrt()
    };
    let hmax = cfg.max_step.min(span);
    let d0 = norm(y, y);
    let d1 = norm(f0, y);
    let mut h0 = if d0 < T::lit(1e-5) || d1 < T::lit(1e-5) {
        T::lit(1e-6)
    } else {
        T::lit(0.01) * d0 / d1
    };
    h0 = h0.min(hmax);
    let y1 = axpy(y, h0, &[(1.0, f0)]);
    let f1 = rhs(s + h0, &y1);
    if !finite(&f1) {
        return h0 * T::lit(1e-3);
    }
    let diff = [f1[0] - f0[0], f1[1] - f0[1]];
    let d2 = norm(&diff, y) / h0;
    let big = d1.max(d2);
    let h1 = if big <= T::lit(1e-15) {
        T::lit(1e-6).max(h0 * T::lit(1e-3))
    } else {
        (T::lit(0.01) / big).powf(T::lit(0.2))
    };
    (T::lit(100.0) * h0).min(h1).min(hmax)
}

/// Integrates `rhs` from `from` to `to_s`, counting zeros of the `y` component.
pub fn integrate<T, F>(
    rhs: F,
    from: PhaseState<T>,
    to_s: T,
    cfg: &IntegratorConfig<T>,
) -> Result<OrbitTrace<T>, OdeError>
where
    T: Scalar,
    F: Fn(T, &State<T>) -> State<T>,
{
    integrate_with_event(rhs, |_s: T, st: &State<T>| st[1], from, to_s, cfg)
}

/// Integrates `rhs` from `from` to `to_s`, counting zeros of `event(s, state)`.
///
/// The event function must be smooth along the orbit; crossings are located
/// on the dense interpolant to within `cfg.event_refine_tol`.
pub fn integrate_with_event<T, F, G>(
    rhs: F,
    event: G,
    from: PhaseState<T>,
    to_s: T,
    cfg: &IntegratorConfig<T>,
) -> Result<OrbitTrace<T>, OdeError>
where
    T: Scalar,
    F: Fn(T, &State<T>) -> State<T>,
    G: Fn(T, &State<T>) -> T,
{
    cfg.validate()?;
    if !(to_s > from.s) || !to_s.is_finite() {
        return Err(OdeError::InvalidSpan { from: from.s.as_f64(), to: to_s.as_f64() });
    }
    if !from.is_finite() {
        return Err(OdeError::NonFinite { s: from.s.as_f64() });
    }

    let mut stats = IntegrationStats::default();
    let mut s = from.s;
    let mut y = from.state();
    let mut k1 = rhs(s, &y);
    stats.rhs_evals += 1;
    if !finite(&k1) {
        return Err(OdeError::NonFinite { s: s.as_f64() });
    }

    let mut trace = OrbitTrace {
        samples: vec![from],
        segments: Vec::new(),
        events: Vec::new(),
        tangencies: Vec::new(),
        stats,
    };

    let g0 = event(s, &y);
    if g0.abs() <= cfg.abs_tol {
        // A zero at the initial point belongs to the closed span.
        trace.events.push(Event { s, x: y[0], y: y[1], kind: EventKind::Crossing });
    }
    let mut tracker = EventTracker::new(s, g0, cfg.abs_tol);
    let mut h = initial_step(&rhs, s, &y, &k1, to_s - s, cfg);
    stats.rhs_evals += 1;
    let mut fac_old = T::lit(1e-4);
    let beta = T::lit(0.04);
    let expo = T::lit(0.2) - beta * T::lit(0.75);
    let safety = T::lit(0.9);
    let fac_min = T::lit(0.2);
    let fac_max = T::lit(10.0);
    let mut last_rejected = false;

    loop {
        if stats.accepted + stats.rejected >= cfg.max_steps {
            return Err(OdeError::MaxStepsExceeded { steps: cfg.max_steps, s: s.as_f64() });
        }
        let remaining = to_s - s;
        let last_step = h >= remaining;
        if last_step {
            h = remaining;
        }
        if h <= T::epsilon() * T::lit(10.0) * s.abs().max(T::one()) {
            return Err(OdeError::StepSizeUnderflow { s: s.as_f64(), h: h.as_f64() });
        }

        let k2 = rhs(s + T::lit(C2) * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(s + T::lit(C3) * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(s + T::lit(C4) * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            s + T::lit(C5) * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let s_new = if last_step { to_s } else { s + h };
        let k6 = rhs(
            s_new,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = rhs(s_new, &y_new);
        stats.rhs_evals += 6;

        let all_finite = [&k2, &k3, &k4, &k5, &k6, &k7, &y_new].iter().all(|v| finite(v));
        if !all_finite {
            stats.rejected += 1;
            last_rejected = true;
            h = h * T::lit(0.25);
            continue;
        }

        let err_vec = axpy(
            &[T::zero(); 2],
            h,
            &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
        );
        let err = error_norm(&y, &y_new, &err_vec, cfg);
        let fac11 = err.powf(expo);
        let mut fac = fac11 / fac_old.powf(beta);
        fac = (fac / safety).max(T::one() / fac_max).min(T::one() / fac_min);
        let h_new = h / fac;

        if err <= T::one() {
            fac_old = err.max(T::lit(1e-4));
            stats.accepted += 1;

            let ydiff = [y_new[0] - y[0], y_new[1] - y[1]];
            let bspl = [h * k1[0] - ydiff[0], h * k1[1] - ydiff[1]];
            let c3 = [ydiff[0] - h * k7[0] - bspl[0], ydiff[1] - h * k7[1] - bspl[1]];
            let c4 = axpy(
                &[T::zero(); 2],
                h,
                &[(D1, &k1), (D3, &k3), (D4, &k4), (D5, &k5), (D6, &k6), (D7, &k7)],
            );
            let seg = DenseSegment { s0: s, h: s_new - s, coeffs: [y, ydiff, bspl, c3, c4] };

            let sample = PhaseState::new(s_new, y_new[0], y_new[1]);
            let g_new = event(s_new, &y_new);
            tracker.observe_step(&mut trace, &seg, g_new, &event, cfg)?;
            trace.samples.push(sample);
            trace.segments.push(seg);

            s = s_new;
            y = y_new;
            k1 = k7;
            if last_step {
                break;
            }
            let mut h_next = h_new.min(cfg.max_step);
            if last_rejected {
                h_next = h_next.min(h);
            }
            last_rejected = false;
            h = h_next;
        } else {
            stats.rejected += 1;
            last_rejected = true;
            h = h / (T::one() / fac_min).min(fac11 / safety);
        }
    }
    tracker.finish(&mut trace, cfg);
    trace.stats = stats;
    Ok(trace)
}

/// Sub-samples per accepted step at which the event function is checked.
const EVENT_SUBDIVISIONS: usize = 4;

/// Sign bookkeeping for the event function along the accepted steps.
struct EventTracker<T> {
    last_sign: i8,
    pending_zero: Option<Event<T>>,
    // Two most recent (s, g) points; `hist[1]` is the latest.
    hist: [(T, T); 2],
    seen: usize,
    prev_seg: Option<DenseSegment<T>>,
    last_sub_start: T,
    g_scale: T,
}

fn signum<T: Scalar>(g: T) -> i8 {
    if g > T::zero() {
        1
    } else if g < T::zero() {
        -1
    } else {
        0
    }
}

impl<T: Scalar> EventTracker<T> {
    fn new(s0: T, g0: T, abs_tol: T) -> Self {
        let last_sign = if g0.abs() <= abs_tol { 0 } else { signum(g0) };
        Self {
            last_sign,
            pending_zero: None,
            hist: [(T::nan(), T::nan()), (s0, g0)],
            seen: 1,
            prev_seg: None,
            last_sub_start: s0,
            g_scale: g0.abs(),
        }
    }

    fn observe_step<G>(
        &mut self,
        trace: &mut OrbitTrace<T>,
        seg: &DenseSegment<T>,
        g_end: T,
        event: &G,
        cfg: &IntegratorConfig<T>,
    ) -> Result<(), OdeError>
    where
        G: Fn(T, &State<T>) -> T,
    {
        for k in 1..=EVENT_SUBDIVISIONS {
            let (s, g) = if k == EVENT_SUBDIVISIONS {
                (seg.s_end(), g_end)
            } else {
                let s = seg.s0 + seg.h * T::from_count(k as u32) / T::from_count(EVENT_SUBDIVISIONS as u32);
                (s, event(s, &seg.eval(s)))
            };
            self.push(trace, seg, s, g, event, cfg)?;
        }
        self.prev_seg = Some(*seg);
        Ok(())
    }

    fn push<G>(
        &mut self,
        trace: &mut OrbitTrace<T>,
        seg: &DenseSegment<T>,
        s: T,
        g: T,
        event: &G,
        cfg: &IntegratorConfig<T>,
    ) -> Result<(), OdeError>
    where
        G: Fn(T, &State<T>) -> T,
    {
        if !g.is_finite() {
            return Err(OdeError::NonFinite { s: s.as_f64() });
        }
        let prev_seg = self.prev_seg;
        let eval_at = |x: T| -> State<T> {
            match prev_seg {
                Some(p) if x < seg.s0 => p.eval(x),
                _ => seg.eval(x),
            }
        };

        // Tangency: the latest point is a local minimum of |g| with the same
        // sign on both sides; locate the minimum and compare it to abs_tol.
        if self.seen >= 2 {
            let (sa, a) = self.hist[0];
            let (_, b) = self.hist[1];
            let same = signum(a) != 0 && signum(a) == signum(b) && signum(b) == signum(g);
            if same && b.abs() <= a.abs() && b.abs() <= g.abs() {
                let (sm, gm) = golden_min_abs(|x: T| event(x, &eval_at(x)), sa, s);
                if gm.abs() <= cfg.abs_tol {
                    let st = eval_at(sm);
                    trace.tangencies.push(Event { s: sm, x: st[0], y: st[1], kind: EventKind::Tangency });
                }
            }
        }

        let sgn = signum(g);
        if sgn == 0 {
            if self.pending_zero.is_none() {
                let st = seg.eval(s);
                self.pending_zero = Some(Event { s, x: st[0], y: st[1], kind: EventKind::Crossing });
            }
        } else {
            if self.last_sign != 0 && sgn != self.last_sign {
                if let Some(z) = self.pending_zero.take() {
                    trace.events.push(z);
                } else {
                    let lo = self.hist[1].0;
                    let f = |x: T| event(x, &seg.eval(x));
                    let sz = refine_zero(f, lo, s, cfg.event_refine_tol)?;
                    let st = seg.eval(sz);
                    trace.events.push(Event { s: sz, x: st[0], y: st[1], kind: EventKind::Crossing });
                }
            } else if let Some(mut z) = self.pending_zero.take() {
                z.kind = EventKind::Tangency;
                trace.tangencies.push(z);
            }
            self.last_sign = sgn;
        }
        self.last_sub_start = self.hist[1].0;
        self.g_scale = self.g_scale.max(g.abs());
        self.hist = [self.hist[1], (s, g)];
        self.seen += 1;
        Ok(())
    }

    fn finish(&mut self, trace: &mut OrbitTrace<T>, cfg: &IntegratorConfig<T>) {
        // Zeros sitting on the final point (to integration accuracy) belong to
        // the endpoint, not the span.
        if let Some(mut z) = self.pending_zero.take() {
            z.kind = EventKind::Terminal;
            trace.tangencies.push(z);
            return;
        }
        let g_end = self.hist[1].1;
        let window = T::lit(10.0) * (cfg.abs_tol + cfg.rel_tol * self.g_scale);
        if g_end.abs() <= window {
            if let Some(last) = trace.events.last() {
                if last.s >= self.last_sub_start {
                    let mut z = trace.events.pop().expect("checked non-empty");
                    z.kind = EventKind::Terminal;
                    trace.tangencies.push(z);
                }
            }
        }
    }
}

/// Golden-section search for the minimum of `|f|` on `[a, b]`.
fn golden_min_abs<T, F>(f: F, a: T, b: T) -> (T, T)
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let inv_phi = T::lit(0.618_033_988_749_894_8);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1).abs();
    let mut f2 = f(x2).abs();
    for _ in 0..60 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1).abs();
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2).abs();
        }
    }
    if f1 <= f2 {
        (x1, f(x1))
    } else {
        (x2, f(x2))
    }
}

/// Bracketed bisection for a zero of `f` on `[a, b]`, to width `tol`.
///
/// Returns whichever final bracket end has the smaller `|f|`.
pub fn refine_zero<T, F>(f: F, a: T, b: T, tol: T) -> Result<T, OdeError>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut f_lo = f(lo);
    let f_hi0 = f(hi);
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi0 == T::zero() {
        return Ok(hi);
    }
    if signum(f_lo) == signum(f_hi0) || f_lo.is_nan() || f_hi0.is_nan() {
        return Err(OdeError::NoSignChange { a: a.as_f64(), b: b.as_f64() });
    }
    let mut f_hi = f_hi0;
    while hi - lo > tol {
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Ok(mid);
        }
        if signum(fm) == signum(f_lo) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi })
}
