//! Recovery of Q₀ and Q₁ from the free boundaries.
//!
//! Each Q_j splits into the value of never switching,
//! G_j = ε_jλ(1−e^{−rτ})/r − L_j(1−e^{−βτ})/β, plus a remainder R_j solving
//! ∂τR − ℒR = f_j, R(τ=0) = 0, with ℒ = (θ²/2)∂ₓₓ + (β−r−θ²/2)∂ₓ − β in x = ln λ and
//!
//! ```text
//! f₀ = [(ε₁−ε₀−rζ₀)λ − (L₁−L₀)]·1{λ ≥ Λ₀(t)}
//! f₁ = [(L₁−L₀) − (ε₁−ε₀+rζ₁)λ]·1{λ ≤ Λ₁(t)}
//! ```

use serde::Serialize;

use super::{Grid, Stencil};
use crate::curve::BoundaryCurve;
use crate::error::{Error, Result};
use crate::linalg::solve_tridiagonal;
use crate::model::{Job, Model};

#[derive(Clone, Debug, Serialize)]
pub struct QSurfaces {
    pub grid: Grid,
    /// q[j][k][i] at τ = k·dt (t = T − τ), x = −n + i·dx.
    pub q: [Vec<Vec<f64>>; 2],
}

pub fn recover_q01(model: &Model, grid: &Grid, lambda0: &BoundaryCurve, lambda1: &BoundaryCurve) -> Result<QSurfaces> {
    let horizon = model.horizon();
    if !lambda0.covers(0.0, horizon) || !lambda1.covers(0.0, horizon) {
        return Err(Error::Input("boundary curves must cover [0, T]".into()));
    }
    let p = &model.p;
    let th2 = model.d.theta * model.d.theta;
    let st = Stencil::new(grid, 0.5 * th2, p.beta - p.r - 0.5 * th2, p.beta);
    let (nx, dx, n) = (grid.nx, grid.dx(), grid.n_trunc);
    let dl = p.l1 - p.l0;
    let a0 = p.eps1 - p.eps0 - p.r * p.zeta0;
    let a1 = p.eps1 - p.eps0 + p.r * p.zeta1;
    let xs = grid.xs();

    // ∫ over [lo, hi] of (c·e^x + d) dx / dx, zero for an empty interval.
    let cell_avg = |lo: f64, hi: f64, c: f64, d: f64| -> f64 {
        if hi <= lo {
            0.0
        } else {
            (c * (hi.exp() - lo.exp()) + d * (hi - lo)) / dx
        }
    };

    let mut r = [vec![vec![0.0; nx]; grid.nt + 1], vec![vec![0.0; nx]; grid.nt + 1]];
    let m = nx - 2;
    let lower = vec![st.lower; m];
    let diag = vec![st.diag; m];
    let upper = vec![st.upper; m];
    let mut rhs = vec![0.0; m];
    let mut scratch = Vec::with_capacity(m);
    let mut x0_sub = [f64::INFINITY; SUB_STEPS];
    let mut x1_sub = [f64::NEG_INFINITY; SUB_STEPS];
    for k in 1..=grid.nt {
        let tau = grid.tau(k);
        let (ar, ab) = (model.annuity_r(tau), model.annuity_beta(tau));
        for s in 0..SUB_STEPS {
            let ts = tau - grid.dt() * (1.0 - (s as f64 + 0.5) / SUB_STEPS as f64);
            x0_sub[s] = upper_boundary_log(model, lambda0, ts, tau)?;
            x1_sub[s] = lambda1.value_at(horizon - ts)?.ln();
        }
        let x0_range = range(&x0_sub);
        let x1_range = range(&x1_sub);

        let r0_top = if tau > model.d.t1 {
            (model.up_switch_gain_rate(tau) * n.exp() - dl * ab).max(0.0)
        } else {
            0.0
        };
        let r1_bottom = -(p.eps1 - p.eps0) * ar * (-n).exp() + dl * ab - p.zeta1 * (-n).exp();
        let edges = [(0.0, r0_top), (r1_bottom, 0.0)];

        for j in 0..2 {
            for i in 1..nx - 1 {
                let (xl, xr) = (xs[i] - 0.5 * dx, xs[i] + 0.5 * dx);
                let f = if j == 0 {
                    if xl >= x0_range.1 {
                        cell_avg(xl, xr, a0, -dl)
                    } else if xr <= x0_range.0 {
                        0.0
                    } else {
                        x0_sub.iter().map(|&b| cell_avg(xl.max(b), xr, a0, -dl)).sum::<f64>() / SUB_STEPS as f64
                    }
                } else if xr <= x1_range.0 {
                    cell_avg(xl, xr, -a1, dl)
                } else if xl >= x1_range.1 {
                    0.0
                } else {
                    x1_sub.iter().map(|&b| cell_avg(xl, xr.min(b), -a1, dl)).sum::<f64>() / SUB_STEPS as f64
                };
                rhs[i - 1] = r[j][k - 1][i] * st.inv_dt + f;
            }
            let (bottom, top) = edges[j];
            rhs[0] -= st.lower * bottom;
            rhs[m - 1] -= st.upper * top;
            if !solve_tridiagonal(&lower, &diag, &upper, &mut rhs, &mut scratch) {
                return Err(Error::numerical("recover_q01", format!("singular system at step {k}"), f64::NAN));
            }
            let row = &mut r[j][k];
            row[0] = bottom;
            row[nx - 1] = top;
            row[1..nx - 1].copy_from_slice(&rhs);
        }
    }

    let mut q = r;
    for (j, surf) in q.iter_mut().enumerate() {
        let job = if j == 0 { Job::D0 } else { Job::D1 };
        for (k, row) in surf.iter_mut().enumerate() {
            let t = horizon - grid.tau(k);
            for (i, v) in row.iter_mut().enumerate() {
                *v += model.stay_value(job, t, xs[i].exp());
            }
        }
    }
    Ok(QSurfaces { grid: *grid, q })
}

/// Sub-steps per time step over which the indicator sources are averaged.
const SUB_STEPS: usize = 8;

fn range(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// ln Λ₀ at residual horizon `ts` inside the step ending at `tau`. On the step
/// where Λ₀ enters from +∞ the curve has no finite neighbour, so the level
/// follows Λ₀ ∝ 1/g(τ), g the up-switch gain rate, which vanishes at T1.
fn upper_boundary_log(model: &Model, lambda0: &BoundaryCurve, ts: f64, tau: f64) -> Result<f64> {
    let horizon = model.horizon();
    if ts <= model.d.t1 {
        return Ok(f64::INFINITY);
    }
    let v = lambda0.value_at(horizon - ts)?;
    if v.is_finite() {
        return Ok(v.ln());
    }
    let end = lambda0.value_at(horizon - tau)?;
    if !end.is_finite() {
        return Ok(f64::INFINITY);
    }
    Ok(end.ln() + (model.up_switch_gain_rate(tau) / model.up_switch_gain_rate(ts)).ln())
}

/// Value together with ∂λ and λ·∂λλ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub value: f64,
    pub d_lambda: f64,
    pub lambda_d2: f64,
}

impl QSurfaces {
    fn locate(&self, t: f64, lambda: f64) -> Result<(usize, f64, usize, f64)> {
        let g = &self.grid;
        let tau = g.horizon - t;
        let x = lambda.ln();
        if !(-1e-9..=g.horizon + 1e-9).contains(&tau) || !(x >= g.x(1) && x <= g.x(g.nx - 2)) {
            return Err(Error::Domain(format!("point (t={t}, lambda={lambda}) outside the recovered surface")));
        }
        let kf = (tau / g.dt()).clamp(0.0, g.nt as f64);
        let k = (kf.floor() as usize).min(g.nt - 1);
        let xf = (x - g.x(0)) / g.dx();
        let i = (xf.floor() as usize).clamp(1, g.nx - 3);
        Ok((k, kf - k as f64, i, xf - i as f64))
    }

    fn bilinear(&self, k: usize, wk: f64, i: usize, wi: f64, f: impl Fn(usize, usize) -> f64) -> f64 {
        let a = f(k, i) * (1.0 - wi) + f(k, i + 1) * wi;
        let b = f(k + 1, i) * (1.0 - wi) + f(k + 1, i + 1) * wi;
        a * (1.0 - wk) + b * wk
    }

    /// Q_j(t, λ) by bilinear interpolation in (τ, ln λ).
    pub fn value(&self, j: Job, t: f64, lambda: f64) -> Result<f64> {
        let (k, wk, i, wi) = self.locate(t, lambda)?;
        let s = &self.q[j.index()];
        Ok(self.bilinear(k, wk, i, wi, |k, i| s[k][i]))
    }

    /// Q_j with ∂λQ_j and λ∂λλQ_j from central differences at the nodes,
    /// interpolated bilinearly.
    pub fn point(&self, j: Job, t: f64, lambda: f64) -> Result<SurfacePoint> {
        let (k, wk, i, wi) = self.locate(t, lambda)?;
        let g = &self.grid;
        let s = &self.q[j.index()];
        let dx = g.dx();
        let dx_at = |k: usize, i: usize| (s[k][i + 1] - s[k][i - 1]) / (2.0 * dx);
        let dxx_at = |k: usize, i: usize| (s[k][i + 1] - 2.0 * s[k][i] + s[k][i - 1]) / (dx * dx);
        let value = self.bilinear(k, wk, i, wi, |k, i| s[k][i]);
        // ∂λQ = e^{−x}∂ₓQ and λ∂λλQ = e^{−x}(∂ₓₓQ − ∂ₓQ).
        let d_lambda = self.bilinear(k, wk, i, wi, |k, i| (-g.x(i)).exp() * dx_at(k, i));
        let lambda_d2 = self.bilinear(k, wk, i, wi, |k, i| (-g.x(i)).exp() * (dxx_at(k, i) - dx_at(k, i)));
        Ok(SurfacePoint {
            value,
            d_lambda,
            lambda_d2,
        })
    }
}
