use std::path::PathBuf;

use jobswitch::integral::{solve_boundaries_ie, IeBoundaries, IeSolverConfig, IntegralRep};
use jobswitch::obstacle::{check_invariants, solve_obstacle, to_lambda_boundaries, Method, ObstacleSolution, SolverControls};
use jobswitch::simulate::{estimate_values, run_switching, simulate_dual, ExecutedPath, SimConfig, SimReport};
use jobswitch::strategy::StrategySurface;
use jobswitch::{BoundaryCurve, Job, Model};
use serde::Serialize;

use crate::output::{Cell, RunDir, Table};
use crate::{acceptance, Cli, Command, Failure, MethodArg};

/// Largest number of x and τ lines kept in `u_surface.csv`.
const SURFACE_LINES: (usize, usize) = (201, 301);
/// Rows of `wealth_boundaries.csv`.
const BOUNDARY_ROWS: usize = 300;
const TABLE_TIMES: [f64; 8] = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 27.5, 29.0];
const TABLE_WEALTH_POINTS: usize = 40;
const TABLE_WEALTH_SPAN: f64 = 80.0;

/// Runs the parsed command; returns the run directory.
pub fn run_command(cli: &Cli) -> Result<PathBuf, Failure> {
    let opts = &cli.opts;
    let config = serde_json::json!({ "options": opts, "command": cli.command.name() });
    let mut rd = RunDir::create(&opts.out, cli.command.name(), config, opts.quiet)?;
    let result = rd.stage("load_config", || opts.model()).and_then(|model| {
        rd.manifest.config["params"] = serde_json::to_value(model.p).unwrap_or_default();
        rd.manifest.derived = Some(model.d);
        match cli.command {
            Command::SolvePde => solve_pde(&mut rd, cli, &model),
            Command::SolveIe => solve_ie(&mut rd, &model).map(|_| ()),
            Command::Strategy => strategy(&mut rd, cli, &model),
            Command::Simulate => simulate(&mut rd, cli, &model),
            Command::Verify => verify(&mut rd, cli, &model),
        }
    });
    let path = rd.finish(&result)?;
    result.map(|_| path)
}

fn tolerance_of(method: &Method) -> f64 {
    match method {
        Method::ProjectedRelaxation => SolverControls::default().tol_lcp,
        Method::Penalty { eps_sequence } => *eps_sequence.last().unwrap_or(&0.0),
    }
}

fn run_pde(rd: &mut RunDir, cli: &Cli, model: &Model) -> Result<ObstacleSolution, Failure> {
    let grid = cli.opts.grid(model)?;
    let method = cli.opts.pde_method()?;
    let sol = rd.stage("solve_obstacle", || Ok(solve_obstacle(model, &grid, &method)?))?;
    rd.annotate(tolerance_of(&method), sol.stats.worst_residual);
    Ok(sol)
}

fn solve_pde(rd: &mut RunDir, cli: &Cli, model: &Model) -> Result<(), Failure> {
    let sol = run_pde(rd, cli, model)?;
    let horizon = model.horizon();
    let (l0, l1) = rd.stage("extract_boundaries", || {
        Ok(to_lambda_boundaries(&sol.x0_curve, &sol.x1_curve, horizon)?)
    })?;
    let report = rd.stage("invariants", || Ok(check_invariants(model, &sol, None)))?;

    let g = &sol.grid;
    let (sx, st) = (g.nx.div_ceil(SURFACE_LINES.0).max(1), (g.nt + 1).div_ceil(SURFACE_LINES.1).max(1));
    let mut surface = Table::new(&["tau", "x", "u"]);
    for k in (0..=g.nt).step_by(st) {
        for i in (0..g.nx).step_by(sx) {
            surface.row(&[Cell::Num(g.tau(k)), Cell::Num(g.x(i)), Cell::Num(sol.u[k][i])]);
        }
    }
    rd.write_csv("u_surface.csv", &surface)?;

    let mut bounds = Table::new(&["tau", "t", "x0", "x1", "lambda0", "lambda1"]);
    for k in 0..=g.nt {
        let tau = g.tau(k);
        let t = horizon - tau;
        let finite = |v: f64| v.is_finite().then_some(v);
        bounds.row(&[
            Cell::Num(tau),
            Cell::Num(t),
            Cell::Opt(sol.x0_curve[k]),
            Cell::Opt(sol.x1_curve[k]),
            Cell::Opt(finite(l0.value_at(t)?)),
            Cell::Opt(finite(l1.value_at(t)?)),
        ]);
    }
    rd.write_csv("boundaries_pde.csv", &bounds)?;
    rd.write_json("invariants.json", &report)?;
    rd.write_json(
        "solve_report.json",
        &serde_json::json!({ "method": sol.method.tag(), "grid": sol.grid, "stats": sol.stats }),
    )?;
    rd.say(format!(
        "solve-pde: {} invariant checks, {} passed",
        report.checks.len(),
        report.checks.iter().filter(|c| c.passed).count()
    ));
    Ok(())
}

fn solve_ie(rd: &mut RunDir, model: &Model) -> Result<IeBoundaries, Failure> {
    let config = IeSolverConfig::default();
    let ie = rd.stage("solve_ie", || Ok(solve_boundaries_ie(model, &config)?))?;
    rd.annotate(config.newton_tol, ie.worst_residual);
    let mut table = Table::new(&["t", "lambda0", "lambda1", "flag0", "flag1"]);
    for i in 0..ie.lambda0.len() {
        let finite = |v: f64| v.is_finite().then_some(v);
        table.row(&[
            Cell::Num(ie.lambda0.times[i]),
            Cell::Opt(finite(ie.lambda0.values[i])),
            Cell::Opt(finite(ie.lambda1.values[i])),
            Cell::Text(flag(&ie.lambda0, i)),
            Cell::Text(flag(&ie.lambda1, i)),
        ]);
    }
    rd.write_csv("boundaries_ie.csv", &table)?;
    rd.write_json(
        "ie_report.json",
        &serde_json::json!({
            "config": config,
            "nodes": ie.lambda0.len(),
            "newton_iterations": ie.newton_iterations,
            "worst_residual": ie.worst_residual,
        }),
    )?;
    Ok(ie)
}

fn flag(curve: &BoundaryCurve, i: usize) -> String {
    serde_json::to_value(curve.flags[i])
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// Boundaries from the integral equations unless a PDE method was requested.
fn boundaries(rd: &mut RunDir, cli: &Cli, model: &Model) -> Result<(BoundaryCurve, BoundaryCurve), Failure> {
    match cli.opts.method {
        None | Some(MethodArg::Ie) => {
            let ie = solve_ie(rd, model)?;
            Ok((ie.lambda0, ie.lambda1))
        }
        Some(_) => {
            let sol = run_pde(rd, cli, model)?;
            let horizon = model.horizon();
            rd.stage("extract_boundaries", || {
                Ok(to_lambda_boundaries(&sol.x0_curve, &sol.x1_curve, horizon)?)
            })
        }
    }
}

fn strategy(rd: &mut RunDir, cli: &Cli, model: &Model) -> Result<(), Failure> {
    let (l0, l1) = boundaries(rd, cli, model)?;
    let surface = StrategySurface::new(model, l0, l1)?;
    let horizon = model.horizon();

    let table = rd.stage("wealth_boundaries", || {
        let mut t = Table::new(&["t", "w0", "w1"]);
        for k in 0..BOUNDARY_ROWS {
            let time = horizon * k as f64 / BOUNDARY_ROWS as f64;
            t.row(&[Cell::Num(time), Cell::Opt(surface.w0_at(time)?), Cell::Opt(surface.w1_at(time)?)]);
        }
        Ok(t)
    })?;
    rd.write_csv("wealth_boundaries.csv", &table)?;

    let table = rd.stage("policy_table", || {
        let mut t = Table::new(&["t", "w", "job", "c", "pi", "region"]);
        for &time in &TABLE_TIMES {
            for job in [Job::D0, Job::D1] {
                let floor = surface.wealth_floor(job, time);
                for k in 0..TABLE_WEALTH_POINTS {
                    let w = floor + 0.25 + TABLE_WEALTH_SPAN * k as f64 / (TABLE_WEALTH_POINTS - 1) as f64;
                    let d = surface.feedback_policy(job, time, w)?;
                    let region = surface.region_wealth(job, time, w)?;
                    t.row(&[
                        Cell::Num(time),
                        Cell::Num(w),
                        Cell::Int(job.index()),
                        Cell::Num(d.consumption),
                        Cell::Num(d.risky),
                        Cell::Text(region.label().into()),
                    ]);
                }
            }
        }
        Ok(t)
    })?;
    rd.write_csv("strategy.csv", &table)?;
    Ok(())
}

#[derive(Serialize)]
struct SimulationOutput {
    lambda0: f64,
    runs: Vec<JobRun>,
}

#[derive(Serialize)]
struct JobRun {
    job: usize,
    /// Qⱼ(t₀,λ0) from the integral representation on the same boundaries.
    solver_switching_value: f64,
    /// 𝒲ⱼ(t₀,λ0), the wealth the static budget should reproduce.
    solver_wealth: f64,
    report: SimReport,
}

fn simulate(rd: &mut RunDir, cli: &Cli, model: &Model) -> Result<(), Failure> {
    let opts = &cli.opts;
    let (l0, l1) = boundaries(rd, cli, model)?;
    let mut config = SimConfig::new(model, opts.paths, opts.steps, opts.seed);
    config.antithetic = true;
    config.check(model)?;
    let rep = IntegralRep::new(model, &l0, &l1)?;
    let surface = StrategySurface::new(model, l0.clone(), l1.clone())?;

    let mut runs = Vec::new();
    let mut per_path = Table::new(&["path", "job0", "switches", "switch_times", "switching_value", "dual_value"]);
    for job in [Job::D0, Job::D1] {
        let cfg = SimConfig { job0: job, ..config };
        let executed: Vec<ExecutedPath> = rd.stage(&format!("monte_carlo_job{}", job.index()), || {
            let paths = simulate_dual(&cfg, model)?;
            Ok(run_switching(&paths, model, &l0, &l1)?)
        })?;
        for (k, e) in executed.iter().enumerate() {
            let times: Vec<String> = e.switches.iter().map(|s| format!("{:.6}", s.time)).collect();
            per_path.row(&[
                Cell::Int(k),
                Cell::Int(job.index()),
                Cell::Int(e.switches.len()),
                Cell::Text(times.join(";")),
                Cell::Num(e.switching_value),
                Cell::Num(e.dual_value),
            ]);
        }
        let report = estimate_values(&executed, &cfg, model);
        rd.say(format!(
            "job {}: J_S = {:.5} ± {:.5}, Q = {:.5}",
            job.index(),
            report.switching_value.mean,
            report.switching_value.se,
            rep.q(job, cfg.t_start, cfg.lambda0)?
        ));
        runs.push(JobRun {
            job: job.index(),
            solver_switching_value: rep.q(job, cfg.t_start, cfg.lambda0)?,
            solver_wealth: surface.wealth(job, cfg.t_start, cfg.lambda0)?,
            report,
        });
    }
    rd.write_json("sim_report.json", &SimulationOutput { lambda0: config.lambda0, runs })?;
    rd.write_csv("paths.csv", &per_path)?;
    Ok(())
}

fn verify(rd: &mut RunDir, cli: &Cli, model: &Model) -> Result<(), Failure> {
    let opts = &cli.opts;
    let mut settings = acceptance::Settings::full(model);
    settings.grid = opts.grid(model)?;
    settings.paths = opts.paths;
    settings.steps = opts.steps;
    settings.seed = opts.seed;
    let scratch = rd.path.join("determinism");
    let quiet = cli.opts.quiet;
    let results = rd.stage("acceptance", || {
        acceptance::run_all(model, &settings, &scratch, |c| {
            if !quiet {
                println!("{}", c.line());
            }
        })
    })?;
    rd.write_json("verify.json", &results)?;
    let failed: Vec<String> = results.iter().filter(|c| !c.passed).map(|c| c.id.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Acceptance(format!("criteria {} failed", failed.join(", "))))
    }
}
