//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;

use axisym_core::exp_family::{direct_theta_integrate, shifted_state_at, shoot_exp, singular_solution, sphere_operator, ExpParams, ExpProblem};
use axisym_core::lane_emden::{
    direct_theta_integrate_power, lyapunov_i, power_operator, singular_solution_power, spiral_condition,
    spiral_condition_q_form, PowerConstants, PowerProblem,
};
use axisym_core::limit::{classify_origin, energy, limit_orbit, LimitParams, OriginClass};
use axisym_core::ode::IntegratorConfig;
use axisym_core::reconstruct::{residual, sphere_identity, BranchSolution, ProfileEval, SolutionProfile, SphereEquation};
use axisym_core::shooting::{evaluate_grid, scan, Branch, GridSpacing, ScanConfig};
use num_complex::Complex;

const PROFILE_TOL_SCALE: f64 = 1e-2;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn exp_scan_cfg() -> ScanConfig<f64> {
    ScanConfig { alpha_min: 0.5, alpha_max: 25.0, ..ScanConfig::default() }
}

fn power_scan_cfg() -> ScanConfig<f64> {
    ScanConfig { alpha_min: 2.0, alpha_max: 1e4, alpha_step: 0.02, spacing: GridSpacing::Geometric, ..ScanConfig::default() }
}

fn residual_of(b: &Branch<f64>, cfg: &IntegratorConfig<f64>) -> f64 {
    match BranchSolution::from_branch(b, &cfg.with_scaled_tolerances(PROFILE_TOL_SCALE))
        .and_then(|sol| residual(&sol, &SphereEquation::for_solution(&sol), 1e-4))
    {
        Ok(r) => r.residual_max,
        Err(_) => f64::INFINITY,
    }
}

fn exact_residuals() -> Outcome {
    let pts: Vec<f64> = (1..=1000).map(|i| 0.01 + (FRAC_PI_2 - 0.01) * i as f64 / 1000.0).collect();
    let mut worst = 0.0f64;
    for n in 4..=10 {
        for &th in &pts {
            let (v, vp, vpp) = singular_solution(th, n).unwrap();
            worst = worst.max(sphere_operator(n, th, v, vp, vpp).abs());
        }
    }
    let mut worst_p = 0.0f64;
    let mut worst_rel = 0.0f64;
    for &(n, p) in &[(5u32, 4.0f64), (4, 6.0), (6, 3.5)] {
        let c = PowerConstants::new(n, p).unwrap();
        for &th in &pts {
            let (v, vp, vpp) = singular_solution_power(th, &c).unwrap();
            let r = power_operator(&c, th, v, vp, vpp).abs();
            worst_p = worst_p.max(r);
            worst_rel = worst_rel.max(r / vpp.abs().max(c.pow(v)));
        }
    }
    outcome(
        worst <= 1e-10 && worst_p <= 1e-10,
        format!("max residual exp {worst:.2e}, power {worst_p:.2e} ({worst_rel:.1e} relative to the largest term)"),
    )
}

fn n3_oracle(cfg: &IntegratorConfig<f64>) -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for &c in &[0.0f64, 0.5, 1.0, 2.0] {
        let alpha = -2.0 * ((c * c + 1.0).sqrt() - c).ln();
        let worst = match direct_theta_integrate(3, alpha, PI - 0.01, cfg) {
            Ok(prof) => (0..=4000)
                .map(|k| {
                    let th = 0.01 + (PI - 0.02) * k as f64 / 4000.0;
                    let exact = -2.0 * ((c * c + 1.0).sqrt() - c * th.cos()).ln();
                    prof.eval(th).map_or(f64::INFINITY, |(v, _)| (v - exact).abs())
                })
                .fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        };
        pass &= worst <= 1e-6;
        parts.push(format!("c={c}: {worst:.1e}"));
    }
    outcome(pass, parts.join(", "))
}

fn limit_suite(cfg: &IntegratorConfig<f64>) -> Outcome {
    let mut fails = Vec::new();
    for n in 4..=10 {
        let tr = match limit_orbit(&LimitParams::new(n).unwrap(), 60.0, cfg) {
            Ok(t) => t,
            Err(e) => {
                fails.push(format!("N={n}: {e}"));
                continue;
            }
        };
        let rise = tr.samples.windows(2).map(|w| energy(w[1].x, w[1].y, n) - energy(w[0].x, w[0].y, n)).fold(f64::MIN, f64::max);
        if rise > 1e-8 {
            fails.push(format!("N={n}: energy rises by {rise:.1e}"));
        }
        let xs: Vec<f64> = tr.events.iter().map(|e| e.x).collect();
        let ordered = xs.len() >= 4
            && xs.windows(2).all(|w| w[0] * w[1] < 0.0)
            && xs[1] < xs[3]
            && xs[3] < 0.0
            && 0.0 < xs[2]
            && xs[2] < xs[0];
        if !ordered {
            fails.push(format!("N={n}: event ordering"));
        }
        let norm = tr.last().norm();
        if norm >= 1e-6 {
            fails.push(format!("N={n}: |state| = {norm:.1e} at s = 60"));
        }
    }
    for n in 4..=40u32 {
        let rep = classify_origin::<f64>(n);
        let m = n as f64 - 3.0;
        let root = Complex::new(m * (n as f64 - 11.0), 0.0).sqrt();
        let expect = [(Complex::new(-m, 0.0) + root) / 2.0, (Complex::new(-m, 0.0) - root) / 2.0];
        let class = match n {
            4..=10 => OriginClass::StableSpiral,
            11 => OriginClass::Degenerate,
            _ => OriginClass::StableNode,
        };
        if rep.classification != class || rep.eigenvalues.iter().zip(expect).any(|(a, b)| (a - b).norm() > 1e-12) {
            fails.push(format!("N={n}: classification"));
        }
    }
    let detail = if fails.is_empty() { "N = 4..10 orbits, N = 4..40 classification".to_string() } else { fails.join("; ") };
    outcome(fails.is_empty(), detail)
}

fn branch_suite(scans: &[(u32, Vec<Branch<f64>>)], cfg: &IntegratorConfig<f64>) -> Outcome {
    let mut fails = Vec::new();
    let mut total = 0;
    for (n, bs) in scans {
        let n = *n;
        total += bs.len();
        if bs.len() < 3 {
            fails.push(format!("N={n}: {} roots", bs.len()));
        }
        if !bs.windows(2).all(|w| w[1].alpha_root > w[0].alpha_root && w[1].winding >= w[0].winding) {
            fails.push(format!("N={n}: ordering"));
        }
        let fine = cfg.with_scaled_tolerances(PROFILE_TOL_SCALE);
        for b in bs {
            let Ok(sol) = BranchSolution::from_branch(b, &fine) else {
                fails.push(format!("N={n} alpha={:.4}: re-shoot failed", b.alpha_root));
                continue;
            };
            let res = residual(&sol, &SphereEquation::for_solution(&sol), 1e-4).map_or(f64::INFINITY, |r| r.residual_max);
            let vph = sol.eval(FRAC_PI_2).map_or(f64::INFINITY, |x| x.1.abs());
            let range = SolutionProfile::from_solution(&sol, 2001, b.winding).map_or(0.0, |p| p.max_v() - p.min_v());
            let id = sphere_identity(&sol, n).map_or(f64::INFINITY, f64::abs);
            let mut bad = Vec::new();
            if res > 1e-5 {
                bad.push(format!("(a) residual {res:.1e}"));
            }
            if vph > 1e-6 {
                bad.push(format!("(b) |v'(pi/2)| {vph:.1e}"));
            }
            if range <= 0.1 {
                bad.push(format!("(c) range {range:.2e}"));
            }
            if id > 1e-6 {
                bad.push(format!("(d) identity {id:.1e}"));
            }
            if !bad.is_empty() {
                fails.push(format!("N={n} alpha={:.4}: {}", b.alpha_root, bad.join(" ")));
            }
        }
    }
    let detail = if fails.is_empty() { format!("{total} branches over N = 4..10") } else { format!("{total} branches, {} failing: {}", fails.len(), fails.join("; ")) };
    outcome(fails.is_empty(), detail)
}

fn limit_distance(cfg: &IntegratorConfig<f64>) -> Outcome {
    let n = 4;
    let Ok(lim) = limit_orbit(&LimitParams::new(n).unwrap(), 2.0, cfg) else {
        return outcome(false, "limit orbit failed".into());
    };
    let d: Vec<f64> = [6.0, 9.0, 12.0, 15.0]
        .iter()
        .map(|&alpha| {
            let p = ExpParams::new(n, alpha).unwrap();
            let Ok(shot) = shoot_exp(&p, cfg) else { return f64::INFINITY };
            (0..=2200)
                .map(|k| {
                    let s = -20.0 + 0.01 * k as f64;
                    match (shifted_state_at(&shot.trace, &p, s), lim.eval(s)) {
                        (Some(a), Some(b)) => (a[0] - b[0]).abs().max((a[1] - b[1]).abs()),
                        _ => f64::INFINITY,
                    }
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let pass = d.windows(2).all(|w| w[1] < w[0]);
    outcome(pass, format!("sup distances {}", d.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" > ")))
}

fn sup_gap<A: ProfileEval<f64>, B: ProfileEval<f64>>(a: &A, b: &B) -> f64 {
    (0..=2000)
        .map(|k| {
            let th = 0.01 + (FRAC_PI_2 - 0.01) * k as f64 / 2000.0;
            match (a.eval(th), b.eval(th)) {
                (Some(x), Some(y)) => (x.0 - y.0).abs(),
                _ => f64::INFINITY,
            }
        })
        .fold(0.0, f64::max)
}

fn two_routes(cfg: &IntegratorConfig<f64>) -> Outcome {
    let mut worst_e = 0.0f64;
    for &alpha in &[2.0, 4.0, 6.0] {
        let gap = match (BranchSolution::exponential(4, alpha, cfg), direct_theta_integrate(4, alpha, FRAC_PI_2, cfg)) {
            (Ok(s), Ok(d)) => sup_gap(&s, &d),
            _ => f64::INFINITY,
        };
        worst_e = worst_e.max(gap);
    }
    let c = PowerConstants::new(5, 4.0).unwrap();
    let mut worst_p = 0.0f64;
    for &alpha in &[3.0, 8.0] {
        let gap = match (BranchSolution::power(5, 4.0, alpha, cfg), direct_theta_integrate_power(&c, alpha, FRAC_PI_2, cfg)) {
            (Ok(s), Ok(d)) => sup_gap(&s, &d),
            _ => f64::INFINITY,
        };
        worst_p = worst_p.max(gap);
    }
    outcome(worst_e <= 1e-6 && worst_p <= 1e-6, format!("sup gap exp {worst_e:.1e}, power {worst_p:.1e}"))
}

fn lane_emden(scans: &[((u32, f64), Vec<Branch<f64>>)], cfg: &IntegratorConfig<f64>) -> Outcome {
    let mut fails = Vec::new();
    let mut counts = Vec::new();
    for ((n, p), bs) in scans {
        let (n, p) = (*n, *p);
        counts.push(format!("({n},{p}): {} roots", bs.len()));
        if bs.len() < 2 {
            fails.push(format!("({n},{p}): {} roots", bs.len()));
        }
        let c = PowerConstants::new(n, p).unwrap();
        for b in bs {
            let Ok(sol) = BranchSolution::from_branch(b, cfg) else {
                fails.push(format!("({n},{p}) alpha={:.4}: re-shoot failed", b.alpha_root));
                continue;
            };
            let min_v = SolutionProfile::from_solution(&sol, 2001, b.winding).map_or(f64::NEG_INFINITY, |pr| pr.min_v());
            let i_max = sol
                .trace()
                .shifted
                .as_ref()
                .map_or(f64::INFINITY, |tr| tr.samples.iter().map(|s| lyapunov_i(s.x, s.y, &c)).fold(f64::MIN, f64::max));
            if !(min_v > 0.0) || !(i_max < 0.0) {
                fails.push(format!("({n},{p}) alpha={:.4}: min v {min_v:.2e}, max I {i_max:.2e}", b.alpha_root));
            }
        }
    }
    let grid_ok = (4..=14u32).all(|n| (1..=1100).all(|k| {
        let p = 1.0 + 0.01 * k as f64;
        spiral_condition(n, p) == spiral_condition_q_form(n, p)
    }));
    if !grid_ok {
        fails.push("spiral forms disagree".into());
    }
    let detail = if fails.is_empty() { counts.join(", ") } else { fails.join("; ") };
    outcome(fails.is_empty(), detail)
}

fn negative_control(cfg: &IntegratorConfig<f64>) -> Outcome {
    let p = ExpProblem { n: 12 };
    let sc = ScanConfig { alpha_min: 0.5, alpha_max: 40.0, ..ScanConfig::default() };
    let no_change = match evaluate_grid(&p, &sc, cfg) {
        Ok(g) => g.windows(2).all(|w| w[0].phi * w[1].phi > 0.0),
        Err(_) => false,
    };
    let class = classify_origin::<f64>(12).classification;
    outcome(no_change && class == OriginClass::StableNode, format!("no sign change: {no_change}, origin: {}", class.describe()))
}

fn robustness(
    exp: &[(u32, Vec<Branch<f64>>)],
    pow: &[((u32, f64), Vec<Branch<f64>>)],
    cfg: &IntegratorConfig<f64>,
) -> Outcome {
    let half = cfg.with_scaled_tolerances(0.5);
    let mut worst_shift = 0.0f64;
    let mut worst_ratio = 1.0f64;
    let mut fails = Vec::new();
    let mut compare = |label: String, problem: &dyn Fn(&IntegratorConfig<f64>) -> Option<Vec<Branch<f64>>>, base: &[Branch<f64>], check_residual: bool| {
        let Some(again) = problem(&half) else {
            fails.push(format!("{label}: rescan failed"));
            return;
        };
        if again.len() != base.len() {
            fails.push(format!("{label}: {} roots vs {}", again.len(), base.len()));
            return;
        }
        for (a, b) in base.iter().zip(&again) {
            let shift = (a.alpha_root - b.alpha_root).abs();
            worst_shift = worst_shift.max(shift);
            if shift > 1e-8 {
                fails.push(format!("{label} alpha={:.4}: shift {shift:.1e}", a.alpha_root));
            }
            if check_residual {
                let (r0, r1) = (residual_of(a, cfg), residual_of(b, &half));
                let ratio = (r0 / r1).max(r1 / r0);
                worst_ratio = worst_ratio.max(ratio);
                if !(ratio <= 10.0) {
                    fails.push(format!("{label} alpha={:.4}: residual {r0:.1e} -> {r1:.1e}", a.alpha_root));
                }
            }
        }
    };
    for (n, bs) in exp {
        let n = *n;
        compare(format!("N={n}"), &|c| scan(&ExpProblem { n }, &exp_scan_cfg(), c).ok(), bs, true);
    }
    for ((n, p), bs) in pow {
        let (n, p) = (*n, *p);
        compare(format!("({n},{p})"), &|c| scan(&PowerProblem { n, p }, &power_scan_cfg(), c).ok(), bs, true);
    }
    let head = format!("max alpha shift {worst_shift:.1e}, max residual ratio {worst_ratio:.2}");
    let detail = if fails.is_empty() { head } else { format!("{head}; {}", fails.join("; ")) };
    outcome(fails.is_empty(), detail)
}

fn main() -> ExitCode {
    let cfg = IntegratorConfig::default();
    let exp_scans: Vec<(u32, Vec<Branch<f64>>)> =
        (4..=10).map(|n| (n, scan(&ExpProblem { n }, &exp_scan_cfg(), &cfg).unwrap_or_default())).collect();
    let pow_scans: Vec<((u32, f64), Vec<Branch<f64>>)> = [(5u32, 4.0f64), (4, 6.0)]
        .iter()
        .map(|&(n, p)| ((n, p), scan(&PowerProblem { n, p }, &power_scan_cfg(), &cfg).unwrap_or_default()))
        .collect();

    let criteria: Vec<(&str, Outcome)> = vec![
        ("exact singular solutions", exact_residuals()),
        ("N=3 closed form", n3_oracle(&cfg)),
        ("limit system", limit_suite(&cfg)),
        ("branches N=4..10", branch_suite(&exp_scans, &cfg)),
        ("approach to limit orbit", limit_distance(&cfg)),
        ("two-route consistency", two_routes(&cfg)),
        ("Lane-Emden positivity", lane_emden(&pow_scans, &cfg)),
        ("negative control N=12", negative_control(&cfg)),
        ("tolerance halving", robustness(&exp_scans, &pow_scans, &cfg)),
    ];
    let mut failed = 0;
    for (k, (name, o)) in criteria.iter().enumerate() {
        println!("{} criterion {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
