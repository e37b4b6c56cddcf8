mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use axisym_core::exp_family::{direct_theta_integrate, shifted_state_at, shoot_exp, ExpParams, ExpProblem};
use axisym_core::limit::{energy, limit_orbit, LimitParams};
use axisym_core::ode::IntegratorConfig;
use axisym_core::reconstruct::{residual, sphere_identity, BranchSolution, ProfileEval, SolutionProfile, SphereEquation};
use axisym_core::shooting::{bisect_root, evaluate_grid, scan, Branch, ScanConfig, ShootingProblem};
use axisym_core::Error;

fn cfg() -> IntegratorConfig<f64> {
    IntegratorConfig::default()
}

fn scan_exp(n: u32, lo: f64, hi: f64, step: f64) -> Vec<Branch<f64>> {
    let sc = ScanConfig { alpha_min: lo, alpha_max: hi, alpha_step: step, ..ScanConfig::default() };
    scan(&ExpProblem { n }, &sc, &cfg()).unwrap()
}

#[test]
fn phi_matches_fixed_step_oracle() {
    for &n in &[4u32, 7, 10] {
        for &alpha in &[2.0, 5.0, 9.0] {
            let lib = shoot_exp(&ExpParams::new(n, alpha).unwrap(), &cfg()).unwrap().result.phi;
            let oracle = common::exp_phi(n, alpha, 1e-4);
            assert!((lib - oracle).abs() < 1e-8, "N={n} alpha={alpha}: {lib} vs {oracle}");
        }
    }
}

#[test]
fn n4_scan_returns_increasing_roots_and_winding() {
    let bs = scan_exp(4, 0.5, 25.0, 0.05);
    assert!(bs.len() >= 3);
    for w in bs.windows(2) {
        assert!(w[1].alpha_root > w[0].alpha_root);
        assert!(w[1].winding > w[0].winding);
    }
    for b in &bs {
        assert!(b.phi_at_root.abs() <= 10.0 * b.slope * 1e-10 + 1e-15, "{b:?}");
        assert!(b.bracket.1 - b.bracket.0 <= 1e-10);
    }
}

#[test]
fn roots_confirmed_by_oracle_sign_change() {
    for b in scan_exp(4, 0.5, 25.0, 0.05).iter().take(3) {
        let lo = common::exp_phi(4, b.alpha_root - 1e-3, 1e-4);
        let hi = common::exp_phi(4, b.alpha_root + 1e-3, 1e-4);
        assert!(lo * hi < 0.0, "alpha={}: {lo} {hi}", b.alpha_root);
    }
}

#[test]
fn dense_scan_finds_the_same_roots() {
    let coarse = scan_exp(4, 0.5, 25.0, 0.05);
    let dense = scan_exp(4, 0.5, 25.0, 0.005);
    assert_eq!(coarse.len(), dense.len());
    for (a, b) in coarse.iter().zip(&dense) {
        assert!((a.alpha_root - b.alpha_root).abs() < 1e-3);
        assert_eq!(a.winding, b.winding);
    }
}

#[test]
fn roots_stable_under_step_halving() {
    let a = scan_exp(6, 0.5, 25.0, 0.05);
    let b = scan_exp(6, 0.5, 25.0, 0.025);
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!((x.alpha_root - y.alpha_root).abs() <= 10.0 * 1e-10);
    }
}

#[test]
fn tighter_bisection_moves_root_less_than_tolerance() {
    let b = scan_exp(5, 0.5, 12.0, 0.05);
    let p = ExpProblem { n: 5 };
    for br in &b {
        let sc = ScanConfig { bisect_tol: 1e-11, ..ScanConfig::default() };
        let fine = bisect_root(br.alpha_root - 0.01, br.alpha_root + 0.01, &p, &sc, &cfg()).unwrap();
        assert!((fine.alpha_root - br.alpha_root).abs() < 1e-10);
    }
}

#[test]
fn winding_steps_by_at_most_one_across_a_root() {
    let p = ExpProblem { n: 4 };
    for b in scan_exp(4, 0.5, 25.0, 0.05) {
        let lo = p.shoot(b.alpha_root - 1e-3, &cfg()).unwrap().result.winding;
        let hi = p.shoot(b.alpha_root + 1e-3, &cfg()).unwrap().result.winding;
        assert!(hi >= lo && hi - lo <= 1, "alpha={} {lo} {hi}", b.alpha_root);
    }
}

#[test]
fn every_dimension_four_to_ten_has_branches() {
    for n in 4..=10 {
        let bs = scan_exp(n, 0.5, 30.0, 0.05);
        assert!(bs.len() >= 3, "N={n}");
        assert!(bs.windows(2).all(|w| w[1].winding >= w[0].winding));
    }
}

#[test]
fn dimension_twelve_has_no_sign_change() {
    let sc = ScanConfig { alpha_min: 0.5, alpha_max: 40.0, ..ScanConfig::default() };
    let p = ExpProblem { n: 12 };
    let grid = evaluate_grid(&p, &sc, &cfg()).unwrap();
    assert!(grid.iter().all(|s| s.phi < 0.0));
    match scan(&p, &sc, &cfg()) {
        Err(Error::NoRootsInRange { reason, .. }) => assert!(reason.contains("stable node"), "{reason}"),
        other => panic!("expected NoRootsInRange, got {other:?}"),
    }
}

#[test]
fn phi_increments_shrink_with_grid_step() {
    let p = ExpProblem { n: 4 };
    let max_jump = |step: f64| {
        let sc = ScanConfig { alpha_min: 0.5, alpha_max: 12.0, alpha_step: step, ..ScanConfig::default() };
        let g = evaluate_grid(&p, &sc, &cfg()).unwrap();
        g.windows(2).map(|w| (w[1].phi - w[0].phi).abs()).fold(0.0, f64::max)
    };
    let (a, b) = (max_jump(0.1), max_jump(0.05));
    assert!(b < a && b < 0.1, "{a} {b}");
}

#[test]
fn energy_nonincreasing_on_shifted_segment() {
    for &(n, alpha) in &[(4u32, 9.0f64), (7, 14.0), (10, 20.0)] {
        let shot = shoot_exp(&ExpParams::new(n, alpha).unwrap(), &cfg()).unwrap();
        let tr = shot.trace.shifted.unwrap();
        let e: Vec<f64> = tr.samples.iter().map(|s| energy(s.x, s.y, n)).collect();
        let worst = e.windows(2).map(|w| w[1] - w[0]).fold(f64::MIN, f64::max);
        assert!(worst <= 1e-8, "N={n} alpha={alpha}: {worst}");
    }
}

#[test]
fn shifted_orbit_approaches_limit_orbit() {
    let n = 4;
    let lim = limit_orbit(&LimitParams::new(n).unwrap(), 2.0, &cfg()).unwrap();
    let dist = |alpha: f64| {
        let p = ExpParams::new(n, alpha).unwrap();
        let shot = shoot_exp(&p, &cfg()).unwrap();
        let mut worst = 0.0f64;
        for k in 0..=2200 {
            let s = -20.0 + 0.01 * k as f64;
            let a = shifted_state_at(&shot.trace, &p, s).unwrap();
            let b = lim.eval(s).unwrap();
            worst = worst.max((a[0] - b[0]).abs().max((a[1] - b[1]).abs()));
        }
        worst
    };
    let d: Vec<f64> = [6.0, 9.0, 12.0, 15.0].iter().map(|&a| dist(a)).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
}

#[test]
fn transformed_and_direct_routes_agree() {
    for n in 4..=10 {
        for &alpha in &[2.0, 4.0, 6.0] {
            let sol = BranchSolution::exponential(n, alpha, &cfg()).unwrap();
            let d = direct_theta_integrate(n, alpha, FRAC_PI_2, &cfg()).unwrap();
            let mut worst = 0.0f64;
            for k in 0..=2000 {
                let th = 0.01 + (FRAC_PI_2 - 0.01) * k as f64 / 2000.0;
                worst = worst.max((sol.eval(th).unwrap().0 - d.eval(th).unwrap().0).abs());
            }
            assert!(worst <= 1e-6, "N={n} alpha={alpha}: {worst}");
        }
    }
}

#[test]
fn first_branch_profile_satisfies_equation() {
    let fine = cfg().with_scaled_tolerances(1e-2);
    for n in [4u32, 7, 10] {
        let b = scan_exp(n, 0.5, 8.0, 0.05)[0];
        let sol = BranchSolution::from_branch(&b, &fine).unwrap();
        let r = residual(&sol, &SphereEquation::for_solution(&sol), 1e-4).unwrap();
        assert!(r.residual_max <= 1e-5, "N={n}: {r:?}");
        let prof = SolutionProfile::from_solution(&sol, 2001, b.winding).unwrap();
        assert!(prof.vp_half_pi().abs() <= 1e-6);
        assert!(prof.max_v() - prof.min_v() > 0.1);
        assert!(sphere_identity(&sol, n).unwrap().abs() <= 1e-6);
    }
}

#[test]
fn pole_derivative_follows_regular_series() {
    // v'(θ) ≈ 2c₂θ with c₂ = −(N−2)(e^α − 1)/(N−1): Neumann-compatible regular start.
    let b = scan_exp(4, 0.5, 8.0, 0.05)[0];
    let sol = BranchSolution::from_branch(&b, &cfg()).unwrap();
    let prof = SolutionProfile::from_solution(&sol, 2001, b.winding).unwrap();
    assert_eq!(prof.vp[0], 0.0);
    let c2 = -2.0 * b.alpha_root.exp_m1() / 3.0;
    let vp = sol.eval(1e-4).unwrap().1;
    assert!((vp / (2.0 * c2 * 1e-4) - 1.0).abs() < 1e-6, "{vp}");
}

#[test]
fn n3_closed_form_family() {
    for &c in &[0.0f64, 0.5, 1.0, 2.0, 5.0] {
        let alpha = -2.0 * ((c * c + 1.0).sqrt() - c).ln();
        let prof = direct_theta_integrate(3, alpha, PI - 0.01, &cfg()).unwrap();
        let mut worst = 0.0f64;
        for k in 0..=4000 {
            let th = 0.01 + (PI - 0.02) * k as f64 / 4000.0;
            let exact = -2.0 * ((c * c + 1.0).sqrt() - c * th.cos()).ln();
            worst = worst.max((prof.eval(th).unwrap().0 - exact).abs());
        }
        let tol = if c > 3.0 { 1e-5 } else { 1e-6 };
        assert!(worst <= tol, "c={c}: {worst}");
    }
}
