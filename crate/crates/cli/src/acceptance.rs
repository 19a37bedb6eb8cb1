//! The cross-validation suite behind `verify`. Each criterion yields one
//! PASS/FAIL line; tolerances are fixed here.

use std::path::Path;
use std::time::Instant;

use jobswitch::integral::{solve_boundaries_ie, IeSolverConfig, IntegralRep};
use jobswitch::obstacle::*;
use jobswitch::simulate::{estimate_values, run_switching, simulate_dual, verify_duality, SimConfig, SimReport};
use jobswitch::strategy::{GridPolicy, StrategySurface};
use jobswitch::{BoundaryCurve, Job, Model};
use serde::Serialize;

use crate::{Cli, Command, Failure, GridArg, MethodArg, Options};

pub mod tol {
    pub const T1: f64 = 1e-5;
    pub const X: f64 = 1e-5;
    pub const K: f64 = 1e-7;
    pub const INVARIANT_SECONDS: f64 = 60.0;
    pub const PENALTY_VS_PSOR: f64 = 5e-4;
    pub const LOG_BOUNDARY: f64 = 0.02;
    pub const CLOSED_FORM: f64 = 1e-6;
    pub const ANCHOR: f64 = 2e-5;
    pub const W0_LIMIT: f64 = 1e-2;
    pub const LIMIT_REL: f64 = 0.01;
    pub const MC_SE: f64 = 3.0;
    pub const MC_REL: f64 = 0.01;
    pub const MC_SECONDS: f64 = 120.0;
    pub const SWITCH_COUNT_REL: f64 = 0.10;
}

/// Reference values the criteria are checked against.
pub mod reference {
    pub const T1: f64 = 4.38026;
    pub const X1: f64 = -0.35066;
    pub const X2: f64 = -0.29267;
    pub const K: f64 = 0.0233333;
    /// ε₀(1−e^{−rT1})/r − L₀(1−e^{−βT1})/β on the reference parameters.
    pub const Q0_ANCHOR: f64 = -0.811_224_489_795_9;
    /// Printed for comparison only; it disagrees with the closed form above.
    pub const Q0_ANCHOR_QUOTED: f64 = -0.81129;
    /// −(ε₁−ε₀)(1−e^{−rT})/r, printed for comparison only.
    pub const W_LIMIT_QUOTED: f64 = -18.1427;
    pub const MC_LAMBDA0: f64 = 0.725;
    pub const DUALITY_WEALTH: f64 = 5.0;
}

/// Sizes of the numerical experiments.
#[derive(Clone, Debug, Serialize)]
pub struct Settings {
    pub grid: Grid,
    pub penalty_eps: f64,
    pub ie: IeSolverConfig,
    pub paths: usize,
    pub steps: usize,
    pub seed: u64,
    pub duality_paths: usize,
    pub doubling_paths: usize,
    /// Grid, path and step counts of the two repeated `simulate` runs.
    pub determinism: (GridArg, usize, usize),
}

impl Settings {
    pub fn full(model: &Model) -> Self {
        Settings {
            grid: Grid::standard(model),
            penalty_eps: 1e-6,
            ie: IeSolverConfig::default(),
            paths: 100_000,
            steps: 3000,
            seed: 20_240_601,
            duality_paths: 4000,
            doubling_paths: 20_000,
            determinism: (GridArg { nx: 501, nt: 750, n: 12.0 }, 2000, 600),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Criterion {
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("{tag} [{}] {}: {}", self.id, self.name, self.detail)
    }
}

/// Runs criteria 1 to 8 in order, reporting each through `report` as soon as it is known.
pub fn run_all(
    model: &Model,
    s: &Settings,
    scratch: &Path,
    mut report: impl FnMut(&Criterion),
) -> Result<Vec<Criterion>, Failure> {
    let mut out = Vec::new();
    let mut push = |c: Criterion, out: &mut Vec<Criterion>| {
        report(&c);
        out.push(c);
    };

    push(derived_constants(model), &mut out);

    let start = Instant::now();
    let psor = solve_obstacle(model, &s.grid, &Method::ProjectedRelaxation)?;
    let inv = check_invariants(model, &psor, None);
    push(invariants(&inv, start.elapsed().as_secs_f64()), &mut out);

    let penalty = solve_obstacle(model, &s.grid, &Method::penalty_to(s.penalty_eps))?;
    let (l0, l1) = to_lambda_boundaries(&psor.x0_curve, &psor.x1_curve, model.horizon())?;
    let ie = solve_boundaries_ie(model, &s.ie)?;
    push(cross_validation(model, &psor, &penalty, (&l0, &l1), (&ie.lambda0, &ie.lambda1))?, &mut out);
    drop(penalty);

    let surface = StrategySurface::new(model, ie.lambda0.clone(), ie.lambda1.clone())?;
    let q = recover_q01(model, &s.grid, &l0, &l1)?;
    push(closed_form_anchors(model, &surface, &q)?, &mut out);
    push(derivative_limits(model, &surface)?, &mut out);

    let policy = GridPolicy::new(model, &q)?;
    let (mc, reports) = monte_carlo(model, s, &surface, &policy, (&l0, &l1))?;
    push(mc, &mut out);
    push(structure(model, s, &reports, &surface)?, &mut out);
    push(determinism(s, scratch)?, &mut out);
    Ok(out)
}

fn check(id: u8, name: &str, passed: bool, detail: String) -> Criterion {
    Criterion {
        id,
        name: name.into(),
        passed,
        detail,
    }
}

fn derived_constants(model: &Model) -> Criterion {
    let d = &model.d;
    let ok = (d.t1 - reference::T1).abs() <= tol::T1
        && (d.x1 - reference::X1).abs() <= tol::X
        && (d.x2 - reference::X2).abs() <= tol::X
        && (d.k - reference::K).abs() <= tol::K;
    check(
        1,
        "derived constants",
        ok,
        format!("T1 {:.8} X1 {:.8} X2 {:.8} K {:.9}", d.t1, d.x1, d.x2, d.k),
    )
}

fn invariants(inv: &InvariantReport, seconds: f64) -> Criterion {
    let wanted = [
        "bounds",
        "monotone_in_x",
        "dtau_upper",
        "dtau_lower",
        "complementarity",
        "no_upper_contact_before_T1",
    ];
    let failed: Vec<&str> = wanted
        .iter()
        .copied()
        .filter(|n| !inv.get(n).is_some_and(|c| c.passed))
        .collect();
    let worst = inv.get("complementarity").map_or(f64::NAN, |c| c.worst);
    check(
        2,
        "obstacle invariants",
        failed.is_empty() && seconds < tol::INVARIANT_SECONDS,
        format!(
            "{} of {} checks pass, complementarity {:.2e}, {:.1} s (limit {} s){}",
            wanted.len() - failed.len(),
            wanted.len(),
            worst,
            seconds,
            tol::INVARIANT_SECONDS,
            if failed.is_empty() { String::new() } else { format!(", failed: {}", failed.join(" ")) }
        ),
    )
}

fn cross_validation(
    model: &Model,
    psor: &ObstacleSolution,
    penalty: &ObstacleSolution,
    pde: (&BoundaryCurve, &BoundaryCurve),
    ie: (&BoundaryCurve, &BoundaryCurve),
) -> Result<Criterion, Failure> {
    let mut du = 0.0f64;
    for (a, b) in psor.u.iter().zip(&penalty.u) {
        for (x, y) in a.iter().zip(b) {
            du = du.max((x - y).abs());
        }
    }
    let horizon = model.horizon();
    let cut = model.last_up_switch();
    let (mut d0, mut d1) = (0.0f64, 0.0f64);
    for k in 0..=1000 {
        let t = 0.5 + (horizon - 1.0) * k as f64 / 1000.0;
        d1 = d1.max((pde.1.value_at(t)?.ln() - ie.1.value_at(t)?.ln()).abs());
        if t <= cut - 0.5 {
            d0 = d0.max((pde.0.value_at(t)?.ln() - ie.0.value_at(t)?.ln()).abs());
        }
    }
    let ok = du <= tol::PENALTY_VS_PSOR && d0 <= tol::LOG_BOUNDARY && d1 <= tol::LOG_BOUNDARY;
    Ok(check(
        3,
        "method cross-validation",
        ok,
        format!(
            "max|u_pen - u_psor| {du:.2e} (tol {:.0e}), max|dln L0| {d0:.4}, max|dln L1| {d1:.4} (tol {})",
            tol::PENALTY_VS_PSOR,
            tol::LOG_BOUNDARY
        ),
    ))
}

fn closed_form_anchors(model: &Model, surface: &StrategySurface, q: &QSurfaces) -> Result<Criterion, Failure> {
    let rep = IntegralRep::new(model, surface.lambda0(), surface.lambda1())?;
    let cut = model.last_up_switch();
    let horizon = model.horizon();
    let (mut worst, mut worst_pde) = (0.0f64, 0.0f64);
    for k in 0..20 {
        let t = cut + (horizon - cut) * (k as f64 + 0.5) / 20.0;
        let lam = (-2.0 + 0.2 * k as f64).exp();
        let exact = model.q0_no_switch(t, lam);
        worst = worst.max((rep.q0(t, lam)? - exact).abs());
        worst_pde = worst_pde.max((q.value(Job::D0, t, lam)? - exact).abs());
    }
    let anchor = rep.q0(cut, 1.0)?;
    let (w0, _) = surface.wealth_boundaries()?;
    let last = *w0.values.last().ok_or_else(|| Failure::Numerical("w0 is empty".into()))?;
    let last_t = *w0.times.last().unwrap_or(&0.0);
    let p = &model.p;
    let limit = -p.eps0 * (1.0 - (-p.r * model.d.t1).exp()) / p.r;
    let ok = worst <= tol::CLOSED_FORM
        && (anchor - reference::Q0_ANCHOR).abs() <= tol::ANCHOR
        && (last - limit).abs() <= tol::W0_LIMIT;
    Ok(check(
        4,
        "closed-form anchors",
        ok,
        format!(
            "Q0 vs closed form {worst:.2e} (interpolated PDE surface {worst_pde:.2e}, not gated); Q0(T-T1,1) {anchor:.10} vs {:.10} (quoted {}); w0({:.3e} before T-T1) {last:.5} vs limit {limit:.5}",
            reference::Q0_ANCHOR,
            reference::Q0_ANCHOR_QUOTED,
            cut - last_t
        ),
    ))
}

fn derivative_limits(model: &Model, surface: &StrategySurface) -> Result<Criterion, Failure> {
    let p = &model.p;
    let annuity = (1.0 - (-p.r * model.horizon()).exp()) / p.r;
    let limit1 = -p.eps1 * annuity;
    let limit0 = limit1 + p.zeta0;
    let rel = |v: f64, l: f64| (v - l).abs() / l.abs();
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (job, limit) in [(Job::D1, limit1), (Job::D0, limit0)] {
        let merton = |lam: f64| -model.q_r_dl(0.0, lam);
        let switching = surface.wealth(job, 0.0, 1e3)? - merton(1e3);
        let full = surface.wealth(job, 0.0, 1e9)?;
        worst = worst.max(rel(switching, limit)).max(rel(full, limit));
        parts.push(format!(
            "W{} switching part at 1e3 {switching:.4}, full at 1e9 {full:.4}, limit {limit:.4}",
            job.index()
        ));
    }
    Ok(check(
        5,
        "derivative limits",
        worst <= tol::LIMIT_REL,
        format!(
            "{}; worst rel {worst:.2e} (quoted {:.4} and {:.4})",
            parts.join("; "),
            reference::W_LIMIT_QUOTED,
            reference::W_LIMIT_QUOTED + p.zeta0
        ),
    ))
}

fn run_mc(
    model: &Model,
    cfg: &SimConfig,
    bounds: (&BoundaryCurve, &BoundaryCurve),
) -> Result<SimReport, Failure> {
    let paths = simulate_dual(cfg, model)?;
    let executed = run_switching(&paths, model, bounds.0, bounds.1)?;
    Ok(estimate_values(&executed, cfg, model))
}

fn monte_carlo(
    model: &Model,
    s: &Settings,
    surface: &StrategySurface,
    policy: &GridPolicy,
    pde: (&BoundaryCurve, &BoundaryCurve),
) -> Result<(Criterion, Vec<SimReport>), Failure> {
    let start = Instant::now();
    let rep = IntegralRep::new(model, surface.lambda0(), surface.lambda1())?;
    let mut base = SimConfig::new(model, s.paths, s.steps, s.seed);
    base.lambda0 = reference::MC_LAMBDA0;
    base.antithetic = true;
    let mut ok = true;
    let mut parts = Vec::new();
    let mut reports = Vec::new();
    for job in [Job::D0, Job::D1] {
        let cfg = SimConfig { job0: job, ..base };
        let r = run_mc(model, &cfg, (surface.lambda0(), surface.lambda1()))?;
        let q = rep.q(job, 0.0, cfg.lambda0)?;
        let w = surface.wealth(job, 0.0, cfg.lambda0)?;
        let gap = (r.switching_value.mean - q).abs();
        let allowed = tol::MC_SE * r.switching_value.se + tol::MC_REL * (1.0 + q.abs());
        let budget_gap = (r.budget.mean - w).abs();
        let budget_allowed = tol::MC_SE * r.budget.se;
        ok &= gap <= allowed && budget_gap <= budget_allowed;
        parts.push(format!(
            "j={}: J_S {:.4}±{:.4} vs Q {q:.4} (gap {gap:.4} <= {allowed:.4}), budget {:.4}±{:.4} vs W {w:.4}",
            job.index(),
            r.switching_value.mean,
            r.switching_value.se,
            r.budget.mean,
            r.budget.se
        ));
        reports.push(r);
    }
    let dcfg = SimConfig {
        n_paths: s.duality_paths,
        seed: s.seed ^ 0x5eed,
        ..base
    };
    let d = verify_duality(model, policy, pde.0, pde.1, &dcfg, reference::DUALITY_WEALTH, Job::D0)?;
    let allowed = tol::MC_SE * d.primal_value.se + tol::MC_REL * d.dual_value.abs();
    ok &= d.gap.abs() <= allowed && d.nonpositive_terminal == 0;
    parts.push(format!(
        "duality at w=5, j=0: primal {:.4}±{:.4} vs dual {:.4} (gap {:.4} <= {allowed:.4})",
        d.primal_value.mean, d.primal_value.se, d.dual_value, d.gap
    ));
    let seconds = start.elapsed().as_secs_f64();
    ok &= seconds < tol::MC_SECONDS;
    parts.push(format!("{seconds:.1} s (limit {} s)", tol::MC_SECONDS));
    Ok((check(6, "Monte Carlo verification", ok, parts.join("; ")), reports))
}

fn structure(
    model: &Model,
    s: &Settings,
    reports: &[SimReport],
    surface: &StrategySurface,
) -> Result<Criterion, Failure> {
    let late: usize = reports.iter().map(|r| r.late_up_switches).sum();
    let alternation: usize = reports.iter().map(|r| r.alternation_violations).sum();
    let base = &reports[0];
    let mut cfg = SimConfig {
        n_paths: s.doubling_paths,
        n_steps: 2 * s.steps,
        ..base.config
    };
    cfg.seed ^= 0xd0b1e;
    let fine = run_mc(model, &cfg, (surface.lambda0(), surface.lambda1()))?;
    let ratio = fine.mean_switches / base.mean_switches;
    let ok = late == 0 && alternation == 0 && (ratio - 1.0).abs() <= tol::SWITCH_COUNT_REL;
    Ok(check(
        7,
        "switching structure",
        ok,
        format!(
            "late 0->1 switches {late}, alternation violations {alternation}, mean N {:.4} ({} steps) vs {:.4} ({} steps), ratio {ratio:.4}",
            base.mean_switches, base.config.n_steps, fine.mean_switches, cfg.n_steps
        ),
    ))
}

fn report_hash(dir: &Path) -> Result<String, Failure> {
    let text = std::fs::read_to_string(dir.join("manifest.json")).map_err(|e| Failure::io(dir, e))?;
    let manifest: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure::Numerical(e.to_string()))?;
    manifest["files"]
        .as_array()
        .and_then(|fs| fs.iter().find(|f| f["name"] == "sim_report.json"))
        .and_then(|f| f["sha256"].as_str())
        .map(str::to_string)
        .ok_or_else(|| Failure::Numerical("manifest lists no sim_report.json".into()))
}

fn determinism(s: &Settings, scratch: &Path) -> Result<Criterion, Failure> {
    let (grid, paths, steps) = s.determinism;
    let cli = Cli {
        command: Command::Simulate,
        opts: Options {
            config: None,
            out: scratch.to_path_buf(),
            method: Some(MethodArg::Psor),
            eps: 1e-6,
            grid: Some(grid),
            paths,
            steps,
            seed: s.seed,
            quiet: true,
        },
    };
    let a = report_hash(&crate::run_command(&cli)?)?;
    let b = report_hash(&crate::run_command(&cli)?)?;
    Ok(check(
        8,
        "determinism",
        a == b,
        format!("sim_report.json sha256 {} / {}", &a[..16], &b[..16]),
    ))
}
