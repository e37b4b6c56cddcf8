//! Independent fixed-step references shared by the integration tests.

#![allow(dead_code)]

/// Classical RK4 on `[s0, s1]` with `steps` equal steps; returns every node.
pub fn rk4<F>(f: F, s0: f64, y0: [f64; 2], s1: f64, steps: usize) -> Vec<(f64, [f64; 2])>
where
    F: Fn(f64, [f64; 2]) -> [f64; 2],
{
    let h = (s1 - s0) / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let mut y = y0;
    out.push((s0, y));
    for k in 0..steps {
        let s = s0 + h * k as f64;
        let k1 = f(s, y);
        let k2 = f(s + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = f(s + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = f(s + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out.push((s0 + h * (k + 1) as f64, y));
    }
    out
}

/// RK4 endpoint only.
pub fn rk4_end<F>(f: F, s0: f64, y0: [f64; 2], s1: f64, steps: usize) -> [f64; 2]
where
    F: Fn(f64, [f64; 2]) -> [f64; 2],
{
    rk4(f, s0, y0, s1, steps).last().unwrap().1
}

/// Sign changes of the second component between consecutive nodes.
pub fn sign_changes(nodes: &[(f64, [f64; 2])]) -> Vec<usize> {
    let mut out = Vec::new();
    for k in 1..nodes.len() {
        if nodes[k - 1].1[1] * nodes[k].1[1] < 0.0 {
            out.push(k);
        }
    }
    out
}

/// Pole-to-equator shot of the exponential family written out from the
/// equations, independent of the library. The regularized radial problem is
/// stepped in `ρ = log r` with state `(u, r u')` on `[log 1e−4, min(0, α/2)]`,
/// then the shifted system on `[0, α/2]`; both with RK4 at step `h`.
pub fn exp_phi(n: u32, alpha: f64, h: f64) -> f64 {
    exp_shot(n, alpha, h).1
}

/// `(x̃, ỹ)` at `s = α/2` from [`exp_phi`]'s scheme.
pub fn exp_shot(n: u32, alpha: f64, h: f64) -> (f64, f64) {
    let nf = n as f64;
    let delta = (-alpha).exp();
    let c2 = (2.0 * (nf - 3.0) * delta - 4.0 * (nf - 2.0)) / (nf - 1.0);
    let r0: f64 = 1e-4;
    let rho0 = r0.ln();
    let rho1 = (alpha / 2.0).min(0.0);
    let steps = ((rho1 - rho0) / h).ceil() as usize;
    let rad = |rho: f64, y: [f64; 2]| {
        let r2 = (2.0 * rho).exp();
        [y[1], -(nf - 3.0) * y[1] + r2 * (-8.0 * (nf - 2.0) * y[0].exp() + 2.0 * (nf - 3.0) * delta / (1.0 + delta * r2) * (y[1] + 2.0))]
    };
    let end = rk4_end(rad, rho0, [c2 * r0 * r0, 2.0 * c2 * r0 * r0], rho1, steps);
    let kt = ((nf - 3.0) / (nf - 2.0)).ln() - 2.0 * 2f64.ln();
    let x0 = end[0] + 2.0 * rho1 - kt;
    let y0 = end[1] + 2.0;
    if alpha / 2.0 <= rho1 {
        return (x0, y0);
    }
    let m = nf - 3.0;
    let sh = |s: f64, y: [f64; 2]| [y[1], m * (s - alpha / 2.0).tanh() * y[1] - 2.0 * m * y[0].exp_m1()];
    let steps = ((alpha / 2.0 - rho1) / h).ceil() as usize;
    let e = rk4_end(sh, rho1, [x0, y0], alpha / 2.0, steps);
    (e[0], e[1])
}

/// Limit system `x' = y`, `y' = −(N−3)y − 2(N−3)(eˣ − 1)` from the asymptotic start at `s0`.
pub fn limit_nodes(n: u32, s0: f64, s1: f64, h: f64) -> Vec<(f64, [f64; 2])> {
    let m = n as f64 - 3.0;
    let x0 = 2.0 * s0 - (2.0 * m).ln() + (8.0 * (n as f64 - 2.0)).ln();
    let steps = ((s1 - s0) / h).round() as usize;
    rk4(|_, y| [y[1], -m * y[1] - 2.0 * m * y[0].exp_m1()], s0, [x0, 2.0], s1, steps)
}
