use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use axisym_core::exp_family::{direct_theta_integrate, ExpProblem};
use axisym_core::lane_emden::{
    limit_orbit_power, limit_power_s_start, linearization_at_one, lyapunov_i, spiral_condition, PowerConstants,
    PowerProblem,
};
use axisym_core::limit::{classify_origin, energy, limit_orbit, LimitParams, LIMIT_S_START};
use axisym_core::ode::{IntegratorConfig, OrbitTrace};
use axisym_core::reconstruct::{
    neumann_values, residual, sphere_identity, BranchSolution, SolutionProfile, SphereEquation, RESIDUAL_H,
};
use axisym_core::shooting::{bisect_root, scan, Branch, FamilyKind, GridSpacing, ScanConfig, ShootingProblem};
use axisym_core::Error;
use num_complex::Complex;
use rayon::prelude::*;

use crate::output::{
    num, profile_csv, read_scan, to_json, write_all, BranchRow, Diagnostics, Manifest, OracleFile, OracleReport,
    Parameters, ProfileFile, ScanFile, SingularHelper, Tolerances, SCHEMA,
};
use crate::args::{BranchArgs, Command, FamilyArg, GridArgs, LaneEmdenArgs, LimitArgs, OracleArgs, TolArgs};

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_NO_ROOTS: u8 = 3;
pub const EXIT_ORACLE_FAIL: u8 = 4;

pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(Error::NoRootsInRange { .. }) => EXIT_NO_ROOTS,
        Some(
            Error::InvalidParameter(_)
            | Error::Domain(_)
            | Error::NonPositiveRadius(_)
            | Error::NotInSpiralRegime(_)
            | Error::SameSign { .. },
        ) => EXIT_INVALID,
        _ => EXIT_FAILURE,
    }
}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Error::InvalidParameter(msg.into()).into()
}

pub fn run(cmd: &Command) -> Result<u8> {
    match cmd {
        Command::Scan(a) => cmd_scan("scan", a.family.into(), a.n, a.p, &a.grid, &a.tol, a.samples, &a.out),
        Command::LaneEmdenScan(a) => lane_emden_scan(a),
        Command::Branch(a) => cmd_branch(a),
        Command::Limit(a) => cmd_limit(a),
        Command::OracleN3(a) => cmd_oracle_n3(a),
    }
}

fn integrator(rtol: f64, atol: f64) -> Result<IntegratorConfig<f64>> {
    let cfg = IntegratorConfig { rel_tol: rtol, abs_tol: atol, ..IntegratorConfig::default() };
    cfg.validate().map_err(|e| invalid(e.to_string()))?;
    Ok(cfg)
}

fn tolerances(t: &TolArgs) -> Result<Tolerances> {
    if !(t.profile_tol_scale > 0.0 && t.profile_tol_scale.is_finite()) {
        return Err(invalid("--profile-tol-scale must be positive"));
    }
    Ok(Tolerances {
        integrator: integrator(t.rtol, t.atol)?,
        bisect_tol: t.bisect_tol,
        max_bisect: t.max_bisect,
        profile_tol_scale: t.profile_tol_scale,
        residual_h: RESIDUAL_H,
    })
}

fn problem(family: FamilyKind, n: u32, p: Option<f64>) -> Result<Box<dyn ShootingProblem<f64>>> {
    match (family, p) {
        (FamilyKind::Exponential, None) => Ok(Box::new(ExpProblem { n })),
        (FamilyKind::Exponential, Some(_)) => Err(invalid("--p applies to the power family only")),
        (FamilyKind::Power, Some(p)) => {
            PowerConstants::new(n, p)?;
            Ok(Box::new(PowerProblem { n, p }))
        }
        (FamilyKind::Power, None) => Err(invalid("the power family needs --p")),
    }
}

fn scan_config(family: FamilyKind, grid: &GridArgs, tol: &Tolerances) -> ScanConfig<f64> {
    let (lo, hi, step, spacing) = match family {
        FamilyKind::Exponential => (0.5, 25.0, 0.05, GridSpacing::Uniform),
        FamilyKind::Power => (2.0, 1e4, 0.02, GridSpacing::Geometric),
    };
    ScanConfig {
        alpha_min: grid.alpha_min.unwrap_or(lo),
        alpha_max: grid.alpha_max.unwrap_or(hi),
        alpha_step: grid.alpha_step.unwrap_or(step),
        spacing: grid.spacing.map_or(spacing, Into::into),
        bisect_tol: tol.bisect_tol,
        max_bisect: tol.max_bisect,
    }
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < 3 || samples % 2 == 0 {
        return Err(invalid(format!("--samples must be odd and at least 3, got {samples}")));
    }
    Ok(())
}

/// Re-shoots a root at the profile tolerance and gathers the profile and its checks.
fn profile_file(b: &Branch<f64>, tol: &Tolerances, samples: usize, manifest: &Manifest) -> Result<ProfileFile> {
    let fine = tol.integrator.with_scaled_tolerances(tol.profile_tol_scale);
    let sol = BranchSolution::from_branch(b, &fine)?;
    let profile = SolutionProfile::from_solution(&sol, samples, b.winding)?;
    let res = residual(&sol, &SphereEquation::for_solution(&sol), tol.residual_h)?;
    let nv = neumann_values(&sol)?;
    let (identity, singular) = match b.family {
        FamilyKind::Exponential => {
            (Some(sphere_identity(&sol, b.n)?), SingularHelper::Exp { log_2_n_minus_2: (2.0 * (b.n as f64 - 2.0)).ln() })
        }
        FamilyKind::Power => {
            let c = PowerConstants::new(b.n, b.p.ok_or_else(|| invalid("power branch without exponent"))?)?;
            (None, SingularHelper::Power { a: c.a, q: c.q })
        }
    };
    let r = sol.result();
    Ok(ProfileFile {
        schema: SCHEMA,
        manifest: manifest.clone(),
        branch: *b,
        diagnostics: Diagnostics::new(res, nv, b, r.tangencies, r.positive, &profile, identity),
        profile,
        singular,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    command: &str,
    family: FamilyKind,
    n: u32,
    p: Option<f64>,
    grid: &GridArgs,
    tol_args: &TolArgs,
    samples: usize,
    out: &Path,
) -> Result<u8> {
    check_samples(samples)?;
    let tol = tolerances(tol_args)?;
    let prob = problem(family, n, p)?;
    let sc = scan_config(family, grid, &tol);
    sc.validate()?;
    let params = Parameters {
        family: Some(family),
        n,
        p,
        alpha_min: Some(sc.alpha_min),
        alpha_max: Some(sc.alpha_max),
        alpha_step: Some(sc.alpha_step),
        spacing: Some(sc.spacing),
        samples: Some(samples),
        ..Parameters::default()
    };
    let manifest = Manifest::new(command, params, tol.clone());
    let branches = scan(prob.as_ref(), &sc, &tol.integrator)?;
    let profiles: Vec<ProfileFile> =
        branches.par_iter().map(|b| profile_file(b, &tol, samples, &manifest)).collect::<Result<_>>()?;

    let mut files = Vec::new();
    let mut rows = Vec::new();
    for (j, (b, pf)) in branches.iter().zip(&profiles).enumerate() {
        let stem = format!("branch_{:03}", j + 1);
        rows.push(BranchRow {
            index: j + 1,
            alpha: b.alpha_root,
            winding: b.winding,
            phi_residual: b.phi_at_root,
            bracket: b.bracket,
            iterations: b.iterations,
            profile_file: format!("{stem}.json"),
        });
        files.push((out.join(format!("{stem}.json")), to_json(pf)?));
        files.push((out.join(format!("{stem}.csv")), profile_csv(&manifest, &pf.profile)?));
    }
    let table = ScanFile { schema: SCHEMA, manifest, branches: rows };
    files.push((out.join("branches.json"), to_json(&table)?));
    write_all(&files)?;

    println!("{:>3}  {:>22}  {:>7}  {:>10}  {:>10}  {:>10}", "j", "alpha", "winding", "phi", "residual", "vp(pi/2)");
    for (row, pf) in table.branches.iter().zip(&profiles) {
        println!(
            "{:>3}  {:>22.16}  {:>7}  {:>10.2e}  {:>10.2e}  {:>10.2e}",
            row.index, row.alpha, row.winding, row.phi_residual, pf.diagnostics.residual_max, pf.diagnostics.vp_half_pi
        );
    }
    println!("wrote {} branches to {}", table.branches.len(), out.display());
    Ok(0)
}

fn lane_emden_scan(a: &LaneEmdenArgs) -> Result<u8> {
    if !spiral_condition(a.n, a.p) {
        return Err(Error::NotInSpiralRegime(format!(
            "N = {}, p = {}: the equilibrium (1, 0) of the limit system is not a spiral",
            a.n, a.p
        ))
        .into());
    }
    cmd_scan("lane-emden-scan", FamilyKind::Power, a.n, Some(a.p), &a.grid, &a.tol, a.samples, &a.out)
}

fn cmd_branch(a: &BranchArgs) -> Result<u8> {
    check_samples(a.samples)?;
    let (family, n, p, bracket, tol) = match (&a.from, a.index, &a.bracket) {
        (Some(path), Some(index), None) => {
            let table = read_scan(path).map_err(|e| invalid(format!("{e:#}")))?;
            let prm = &table.manifest.parameters;
            let family = prm.family.ok_or_else(|| invalid("scan file has no family"))?;
            if a.family.is_some_and(|f| FamilyKind::from(f) != family) || a.n.is_some_and(|n| n != prm.n) {
                return Err(invalid("--family/--N disagree with the scan file"));
            }
            let row = index
                .checked_sub(1)
                .and_then(|k| table.branches.get(k))
                .ok_or_else(|| invalid(format!("index {index} outside 1..={}", table.branches.len())))?;
            (family, prm.n, prm.p, row.bracket, table.manifest.tolerances.clone())
        }
        (None, None, Some(br)) => {
            let family = a.family.map_or(FamilyKind::Exponential, Into::into);
            let n = a.n.ok_or_else(|| invalid("--bracket needs --N"))?;
            (family, n, a.p, (br[0], br[1]), tolerances(&a.tol)?)
        }
        _ => return Err(invalid("give either --bracket LO HI or --from FILE --index J")),
    };
    let prob = problem(family, n, p)?;
    let sc = ScanConfig { bisect_tol: tol.bisect_tol, max_bisect: tol.max_bisect, ..ScanConfig::default() };
    let params = Parameters { family: Some(family), n, p, bracket: Some(bracket), samples: Some(a.samples), ..Parameters::default() };
    let manifest = Manifest::new("branch", params, tol.clone());
    let b = bisect_root(bracket.0, bracket.1, prob.as_ref(), &sc, &tol.integrator)?;
    let pf = profile_file(&b, &tol, a.samples, &manifest)?;
    let body = to_json(&pf)?;
    match &a.out {
        Some(path) => {
            let mut files = vec![(path.clone(), body)];
            if a.csv {
                files.push((path.with_extension("csv"), profile_csv(&manifest, &pf.profile)?));
            }
            write_all(&files)?;
            let d = &pf.diagnostics;
            println!(
                "alpha = {:.16}  winding = {}  residual = {:.2e}  vp(pi/2) = {:.2e}  min v = {:.6}",
                b.alpha_root, b.winding, d.residual_max, d.vp_half_pi, d.min_v
            );
        }
        None => print!("{body}"),
    }
    Ok(0)
}

fn complex(z: Complex<f64>) -> String {
    format!("{},{}", num(z.re), num(z.im))
}

fn orbit_csv(manifest: &Manifest, header: &[String], tr: &OrbitTrace<f64>, label: &str, f: impl Fn(f64, f64) -> f64) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "# schema: {SCHEMA}")?;
    writeln!(out, "# manifest: {}", serde_json::to_string(manifest)?)?;
    for h in header {
        writeln!(out, "# {h}")?;
    }
    writeln!(out, "s,x,y,{label}")?;
    for st in &tr.samples {
        writeln!(out, "{},{},{},{}", num(st.s), num(st.x), num(st.y), num(f(st.x, st.y)))?;
    }
    writeln!(out, "# events")?;
    writeln!(out, "s,x,y,kind")?;
    let mut events: Vec<_> = tr.events.iter().chain(&tr.tangencies).collect();
    events.sort_by(|a, b| a.s.total_cmp(&b.s));
    for e in events {
        writeln!(out, "{},{},{},{:?}", num(e.s), num(e.x), num(e.y), e.kind)?;
    }
    Ok(out)
}

fn cmd_limit(a: &LimitArgs) -> Result<u8> {
    let cfg = integrator(a.rtol, a.atol)?;
    let tol = Tolerances { integrator: cfg, bisect_tol: 0.0, max_bisect: 0, profile_tol_scale: 1.0, residual_h: RESIDUAL_H };
    let family: FamilyKind = a.family.into();
    let params = Parameters { family: Some(family), n: a.n, p: a.p, s_end: Some(a.s_end), ..Parameters::default() };
    let manifest = Manifest::new("limit", params, tol);
    let body = match (a.family, a.p) {
        (FamilyArg::Exp, None) => {
            let lp = LimitParams::new(a.n)?;
            if !(a.s_end > LIMIT_S_START) {
                return Err(invalid(format!("--s-end must exceed the start s = {LIMIT_S_START}")));
            }
            let tr = limit_orbit(&lp, a.s_end, &cfg)?;
            let rep = classify_origin::<f64>(a.n);
            let header = vec![
                format!("N: {}", a.n),
                format!("lambda_plus: {}", complex(rep.eigenvalues[0])),
                format!("lambda_minus: {}", complex(rep.eigenvalues[1])),
                format!("discriminant: {}", rep.discriminant),
                format!("origin: {}", rep.classification.describe()),
                format!("winding: {}", tr.winding()),
            ];
            let n = a.n;
            orbit_csv(&manifest, &header, &tr, "E", |x, y| energy(x, y, n))?
        }
        (FamilyArg::Power, Some(p)) => {
            let c = PowerConstants::new(a.n, p)?;
            let s0 = limit_power_s_start(&c);
            if !(a.s_end > s0) {
                return Err(invalid(format!("--s-end must exceed the start s = {s0}")));
            }
            let tr = limit_orbit_power(&c, a.s_end, &cfg)?;
            let ev = linearization_at_one(&c);
            let header = vec![
                format!("N: {}", a.n),
                format!("p: {}", num(p)),
                format!("lambda_plus: {}", complex(ev[0])),
                format!("lambda_minus: {}", complex(ev[1])),
                format!("equilibrium (1,0): {}", if spiral_condition(a.n, p) { "spiral" } else { "node" }),
                format!("winding: {}", tr.winding()),
            ];
            orbit_csv(&manifest, &header, &tr, "I", |x, y| lyapunov_i(x, y, &c))?
        }
        (FamilyArg::Exp, Some(_)) => return Err(invalid("--p applies to the power family only")),
        (FamilyArg::Power, None) => return Err(invalid("the power family needs --p")),
    };
    emit(a.out.as_deref(), body)
}

fn emit(out: Option<&Path>, body: String) -> Result<u8> {
    match out {
        Some(path) => write_all(&[(PathBuf::from(path), body)]).map(|_| 0),
        None => {
            print!("{body}");
            Ok(0)
        }
    }
}

fn cmd_oracle_n3(a: &OracleArgs) -> Result<u8> {
    if !a.c.is_finite() {
        return Err(invalid(format!("--c must be finite, got {}", a.c)));
    }
    let cfg = integrator(a.rtol, a.atol)?;
    let c = a.c;
    let alpha = -2.0 * ((c * c + 1.0).sqrt() - c).ln();
    let prof = direct_theta_integrate(3, alpha, PI - 0.01, &cfg).context("integrating N = 3")?;
    let (mut deviation, mut theta_argmax) = (0.0f64, 0.01);
    for k in 0..=4000 {
        let th = 0.01 + (PI - 0.02) * k as f64 / 4000.0;
        let exact = -2.0 * ((c * c + 1.0).sqrt() - c * th.cos()).ln();
        let v = prof.eval(th).ok_or_else(|| Error::IncompleteTrace(format!("no value at theta = {th}")))?.0;
        let d = (v - exact).abs();
        if !(d <= deviation) {
            deviation = d;
            theta_argmax = th;
        }
    }
    let tolerance = if c.abs() > 3.0 { 1e-5 } else { 1e-6 };
    let pass = deviation <= tolerance;
    let tol = Tolerances { integrator: cfg, bisect_tol: 0.0, max_bisect: 0, profile_tol_scale: 1.0, residual_h: RESIDUAL_H };
    let params = Parameters { n: 3, c: Some(c), ..Parameters::default() };
    let report = OracleReport { c, alpha, deviation, theta_argmax, tolerance, pass };
    let file = OracleFile { schema: SCHEMA, manifest: Manifest::new("oracle-n3", params, tol), report };
    if let Some(path) = &a.out {
        write_all(&[(path.clone(), to_json(&file)?)])?;
    }
    println!(
        "{} c = {c}: sup deviation {deviation:.3e} at theta = {theta_argmax:.4} (tolerance {tolerance:e})",
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(if pass { 0 } else { EXIT_ORACLE_FAIL })
}
