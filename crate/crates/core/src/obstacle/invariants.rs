use serde::Serialize;

use super::{ObstacleSolution, QSurfaces};
use crate::model::{Job, Model};

#[derive(Clone, Debug, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    pub passed: bool,
    /// Worst violation (positive means violated by that much), or the measured quantity.
    pub worst: f64,
    pub tol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub checks: Vec<InvariantCheck>,
}

impl InvariantReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Tolerances used by [`check_invariants`].
pub mod tol {
    pub const BOUNDS: f64 = 1e-12;
    pub const MONOTONE: f64 = 1e-12;
    pub const DTAU: f64 = 1e-6;
    pub const COMPLEMENTARITY: f64 = 1e-7;
}

/// Evaluates the structural properties of an obstacle solution (and, when given,
/// of the recovered Q surfaces). Report-only: never fails.
pub fn check_invariants(model: &Model, sol: &ObstacleSolution, q: Option<&QSurfaces>) -> InvariantReport {
    let g = &sol.grid;
    let p = &model.p;
    let (nx, dt) = (g.nx, g.dt());
    let xs = g.xs();
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    for (k, row) in sol.u.iter().enumerate() {
        let top = model.varphi_plus(g.tau(k));
        for &v in row {
            worst = worst.max(-p.zeta1 - v).max(v - top);
        }
    }
    push(&mut checks, "bounds", worst, tol::BOUNDS);

    push(&mut checks, "initial_zero", sol.u[0].iter().fold(0.0, |a, v| a.max(v.abs())), 0.0);

    let mut worst = 0.0f64;
    for row in &sol.u {
        for w in row.windows(2) {
            worst = worst.max(w[0] - w[1]);
        }
    }
    push(&mut checks, "monotone_in_x", worst, tol::MONOTONE);

    let (mut up, mut down) = (0.0f64, 0.0f64);
    for k in 1..sol.u.len() {
        let tau_prev = g.tau(k - 1);
        for i in 1..nx - 1 {
            let d = (sol.u[k][i] - sol.u[k - 1][i]) / dt;
            up = up.max(d - (p.eps1 - p.eps0) * (-p.r * tau_prev).exp());
            down = down.max(-p.l1 * (-p.beta * tau_prev - xs[i]).exp() - d);
        }
    }
    push(&mut checks, "dtau_upper", up, tol::DTAU);
    push(&mut checks, "dtau_lower", down, tol::DTAU);

    let worst = sol.residual.iter().flatten().fold(0.0f64, |a, &v| a.max(v));
    push(&mut checks, "complementarity", worst, tol::COMPLEMENTARITY);

    let hi_tol = sol.contact_tol * (1.0 + p.zeta0);
    let mut early_contacts = 0usize;
    for (k, row) in sol.u.iter().enumerate() {
        if g.tau(k) <= model.d.t1 {
            early_contacts += row[1..nx - 1].iter().filter(|&&v| (v - p.zeta0).abs() <= hi_tol).count();
        }
    }
    push(&mut checks, "no_upper_contact_before_T1", early_contacts as f64, 0.0);

    let mut worst = 0.0f64;
    for (k, row) in sol.u.iter().enumerate() {
        let tau = g.tau(k);
        let lo = if k == 0 { 0.0 } else { model.varphi_minus_n(tau, g.n_trunc) };
        let hi = if k == 0 { 0.0 } else { model.varphi_plus(tau) };
        worst = worst.max((row[0] - lo).abs()).max((row[nx - 1] - hi).abs());
    }
    push(&mut checks, "edge_data", worst, 0.0);

    push(&mut checks, "cone_constant_finite", cone_constant(model, sol), f64::MAX);

    let mut worst = f64::NEG_INFINITY;
    for (x0, x1) in sol.x0_curve.iter().zip(&sol.x1_curve) {
        if let Some(x1) = x1 {
            worst = worst.max(x1 - model.d.x1);
        }
        if let Some(x0) = x0 {
            worst = worst.max(model.d.x2 - x0);
        }
    }
    // Strict inequalities: anything below zero passes.
    checks.push(InvariantCheck {
        name: "boundaries_beyond_thresholds".into(),
        passed: worst < 0.0,
        worst,
        tol: 0.0,
    });

    if let Some(q) = q {
        let horizon = model.horizon();
        let growth = (p.eps1 - p.r).max(0.0) * horizon;
        let (mut above, mut below) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for k in 0..=q.grid.nt {
            let t = horizon - q.grid.tau(k);
            for (i, &x) in xs.iter().enumerate() {
                let lambda = x.exp();
                let cap = (growth - (p.eps1 - p.r) * t).exp() * lambda;
                for job in [Job::D0, Job::D1] {
                    let v = q.q[job.index()][k][i];
                    above = above.max(v - cap);
                    below = below.max(model.stay_value(job, t, lambda) - v);
                }
            }
        }
        push(&mut checks, "q_upper_growth_bound", above, 0.0);
        push(&mut checks, "q_at_least_no_switch_value", below, 1e-9);
    }

    InvariantReport { checks }
}

fn push(checks: &mut Vec<InvariantCheck>, name: &str, worst: f64, tol: f64) {
    checks.push(InvariantCheck {
        name: name.to_string(),
        passed: worst <= tol,
        worst,
        tol,
    });
}

/// Smallest C with −C·∂ₓu ≤ τ∂τu ≤ C·eˣ·∂ₓu on the inner half-domain, measured
/// at nodes whose stencil stays off both obstacles over the step. Infinite when
/// such a node has flat u yet still moves in τ.
fn cone_constant(model: &Model, sol: &ObstacleSolution) -> f64 {
    let g = &sol.grid;
    let (dx, dt) = (g.dx(), g.dt());
    let (lo, hi) = (-model.p.zeta1, model.p.zeta0);
    let slack = sol.contact_tol * (1.0 + lo.abs().max(hi));
    let free = |v: f64| v - lo > slack && hi - v > slack;
    let half = 0.5 * g.n_trunc;
    let mut c = 0.0f64;
    for k in 2..sol.u.len() {
        let tau = g.tau(k);
        let (cur, prev) = (&sol.u[k], &sol.u[k - 1]);
        for i in 1..g.nx - 1 {
            let x = g.x(i);
            if x.abs() > half || !(free(cur[i - 1]) && free(cur[i]) && free(cur[i + 1]) && free(prev[i])) {
                continue;
            }
            let ux = (cur[i + 1] - cur[i - 1]) / (2.0 * dx);
            let tut = tau * (cur[i] - prev[i]) / dt;
            if ux > 0.0 {
                c = c.max(-tut / ux).max(tut / (x.exp() * ux));
            } else if tut != 0.0 {
                return f64::INFINITY;
            }
        }
    }
    c
}
