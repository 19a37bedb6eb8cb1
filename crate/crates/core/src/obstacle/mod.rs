//! The double obstacle problem for u(τ,x) = (Q₁−Q₀)/λ in log-dual coordinates
//! x = ln λ and residual horizon τ = T − t:
//!
//! ```text
//! ∂τu − ℒₓu − (ε₁−ε₀) + (L₁−L₀)e^{−x}  = 0   where −ζ₁ < u < ζ₀
//!                                       ≥ 0   where u = −ζ₁
//!                                       ≤ 0   where u = ζ₀
//! ℒₓ = (θ²/2)∂ₓₓ + (β−r+θ²/2)∂ₓ − r,   u(0,·) = 0
//! ```
//!
//! truncated to x ∈ [−n, n] with Dirichlet data φ₋,ₙ and φ₊.

mod extract;
mod invariants;
mod penalty;
mod recover;

pub use extract::{extract_free_boundaries, to_lambda_boundaries};
pub use invariants::{check_invariants, InvariantCheck, InvariantReport};
pub use penalty::{beta1, beta1_prime, beta2, beta2_prime};
pub use recover::{recover_q01, QSurfaces, SurfacePoint};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Model;

/// Uniform space-time grid on [0,T] × [−n, n].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub n_trunc: f64,
    pub nx: usize,
    pub nt: usize,
    pub horizon: f64,
}

impl Grid {
    pub fn new(n_trunc: f64, nx: usize, nt: usize, horizon: f64) -> Result<Self> {
        if nx < 3 || nt < 1 || !(n_trunc > 0.0) || !(horizon > 0.0) {
            return Err(Error::Input(format!(
                "grid needs nx >= 3, nt >= 1, n > 0, T > 0 (nx={nx}, nt={nt}, n={n_trunc})"
            )));
        }
        Ok(Grid {
            n_trunc,
            nx,
            nt,
            horizon,
        })
    }

    /// Default production grid: n = 12, 2001 × 3000.
    pub fn standard(model: &Model) -> Self {
        Grid::new(12.0, 2001, 3000, model.horizon()).expect("standard grid is valid")
    }

    /// Checks that the truncation clears both thresholds by at least 5 units.
    pub fn check_for(&self, model: &Model) -> Result<()> {
        let need = model.d.x1.abs().max(model.d.x2.abs()) + 5.0;
        if self.n_trunc < need {
            return Err(Error::Input(format!(
                "truncation n = {} must be at least max(|X1|,|X2|)+5 = {need}",
                self.n_trunc
            )));
        }
        if (self.horizon - model.horizon()).abs() > 1e-12 {
            return Err(Error::Input("grid horizon differs from T".into()));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.n_trunc / (self.nx - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.nt as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.n_trunc + i as f64 * self.dx()
    }

    pub fn tau(&self, k: usize) -> f64 {
        k as f64 * self.dt()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    ProjectedRelaxation,
    /// Penalty scheme, solved for each ε of the (decreasing) sequence in turn.
    Penalty { eps_sequence: Vec<f64> },
}

impl Method {
    pub const DEFAULT_EPS_SEQUENCE: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-6];

    /// Penalty method whose sequence is the default one cut off at `final_eps`.
    pub fn penalty_to(final_eps: f64) -> Self {
        let mut seq: Vec<f64> = Self::DEFAULT_EPS_SEQUENCE
            .iter()
            .copied()
            .filter(|&e| e > final_eps)
            .collect();
        seq.push(final_eps);
        Method::Penalty { eps_sequence: seq }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Method::ProjectedRelaxation => "projected_relaxation",
            Method::Penalty { .. } => "penalty",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SolverControls {
    /// Complementarity residual target for projected relaxation.
    pub tol_lcp: f64,
    pub max_sweeps: usize,
    pub max_newton: usize,
}

impl Default for SolverControls {
    fn default() -> Self {
        SolverControls {
            tol_lcp: 1e-10,
            max_sweeps: 50_000,
            max_newton: 60,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SolveStats {
    /// Relaxation sweeps (projected) or Newton iterations (penalty), summed over steps.
    pub total_iterations: usize,
    pub max_iterations_per_step: usize,
    pub worst_residual: f64,
    pub relaxation_factor: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstacleSolution {
    pub grid: Grid,
    pub method: Method,
    /// u[k][i] at τ = k·dt, x = −n + i·dx.
    pub u: Vec<Vec<f64>>,
    /// Discrete complementarity residual |min(u+ζ₁, max(u−ζ₀, F))| per node.
    pub residual: Vec<Vec<f64>>,
    /// x₀(τ_k); `None` when the upper contact set is empty (x₀ = +∞).
    pub x0_curve: Vec<Option<f64>>,
    /// x₁(τ_k); `None` when the lower contact set is empty (x₁ = −∞).
    pub x1_curve: Vec<Option<f64>>,
    /// Absolute slack used to classify a node as in contact.
    pub contact_tol: f64,
    pub stats: SolveStats,
}

/// Relative contact tolerance: a node is in contact when |u − obstacle| ≤ 1e−9·(1+|obstacle|).
pub const CONTACT_RTOL: f64 = 1e-9;

/// Constant-coefficient implicit Euler stencil for the u-problem.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Stencil {
    pub lower: f64,
    pub diag: f64,
    pub upper: f64,
    pub inv_dt: f64,
}

impl Stencil {
    pub fn new(grid: &Grid, diffusion: f64, drift: f64, decay: f64) -> Self {
        let (dx, dt) = (grid.dx(), grid.dt());
        let a = diffusion / (dx * dx);
        let b = drift / (2.0 * dx);
        Stencil {
            lower: -a + b,
            diag: 1.0 / dt + 2.0 * a + decay,
            upper: -a - b,
            inv_dt: 1.0 / dt,
        }
    }

    #[inline]
    pub fn apply(&self, u: &[f64], i: usize) -> f64 {
        self.lower * u[i - 1] + self.diag * u[i] + self.upper * u[i + 1]
    }
}

pub(crate) struct UProblem {
    pub stencil: Stencil,
    /// (ε₁−ε₀) − (L₁−L₀)e^{−x} at every node.
    pub source: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
}

impl UProblem {
    pub fn new(model: &Model, grid: &Grid) -> Self {
        let p = &model.p;
        let th2 = model.d.theta * model.d.theta;
        let stencil = Stencil::new(grid, 0.5 * th2, p.beta - p.r + 0.5 * th2, p.r);
        let source = (0..grid.nx)
            .map(|i| (p.eps1 - p.eps0) - (p.l1 - p.l0) * (-grid.x(i)).exp())
            .collect();
        UProblem {
            stencil,
            source,
            lo: -p.zeta1,
            hi: p.zeta0,
        }
    }

    /// F_i = (u_i − u_old_i)/dt − ℒu_i − source_i, i.e. A·u − rhs.
    #[inline]
    pub fn operator(&self, u: &[f64], rhs: &[f64], i: usize) -> f64 {
        self.stencil.apply(u, i) - rhs[i]
    }

    pub fn complementarity(&self, u: f64, f: f64) -> f64 {
        (u - self.lo).min((u - self.hi).max(f))
    }
}

/// Solves the truncated double obstacle problem by fully implicit time stepping.
pub fn solve_obstacle(model: &Model, grid: &Grid, method: &Method) -> Result<ObstacleSolution> {
    solve_obstacle_with(model, grid, method, &SolverControls::default())
}

pub fn solve_obstacle_with(
    model: &Model,
    grid: &Grid,
    method: &Method,
    controls: &SolverControls,
) -> Result<ObstacleSolution> {
    grid.check_for(model)?;
    if let Method::Penalty { eps_sequence } = method {
        if eps_sequence.is_empty() || eps_sequence.iter().any(|e| !(*e > 0.0)) {
            return Err(Error::Input("penalty epsilon sequence must be non-empty and positive".into()));
        }
        let cap = model.p.zeta0.min(model.p.zeta1);
        if eps_sequence.iter().any(|&e| e >= cap) {
            return Err(Error::Input(format!("penalty epsilon must be below min(zeta0, zeta1) = {cap}")));
        }
    }
    let prob = UProblem::new(model, grid);
    let nx = grid.nx;
    let mut u = vec![vec![0.0; nx]; grid.nt + 1];
    let mut residual = vec![vec![0.0; nx]; grid.nt + 1];
    let mut stats = SolveStats::default();
    let omega = optimal_relaxation(&prob.stencil, nx);
    stats.relaxation_factor = omega;

    let mut rhs = vec![0.0; nx];
    let mut cur = vec![0.0; nx];
    let mut newton = penalty::NewtonWork::new(nx);
    for k in 1..=grid.nt {
        let tau = grid.tau(k);
        for i in 1..nx - 1 {
            rhs[i] = u[k - 1][i] * prob.stencil.inv_dt + prob.source[i];
        }
        cur.copy_from_slice(&u[k - 1]);
        cur[0] = model.varphi_minus_n(tau, grid.n_trunc);
        cur[nx - 1] = model.varphi_plus(tau);
        let iters = match method {
            Method::ProjectedRelaxation => psor(&prob, &rhs, &mut cur, omega, controls)
                .map_err(|worst| {
                    Error::numerical(
                        "solve_obstacle",
                        format!("projected relaxation did not converge at step {k} (tau={tau})"),
                        worst,
                    )
                })?,
            Method::Penalty { eps_sequence } => {
                let mut n_it = 0;
                for &eps in eps_sequence {
                    n_it += penalty::newton_solve(&prob, &rhs, &mut cur, eps, grid.n_trunc, model, controls, &mut newton)
                        .map_err(|worst| {
                            Error::numerical(
                                "solve_obstacle",
                                format!("penalty Newton failed at step {k} (tau={tau}, eps={eps})"),
                                worst,
                            )
                        })?;
                }
                n_it
            }
        };
        stats.total_iterations += iters;
        stats.max_iterations_per_step = stats.max_iterations_per_step.max(iters);
        for i in 1..nx - 1 {
            let f = prob.operator(&cur, &rhs, i);
            let res = prob.complementarity(cur[i], f).abs();
            residual[k][i] = res;
            stats.worst_residual = stats.worst_residual.max(res);
        }
        u[k].copy_from_slice(&cur);
    }

    let contact_tol = match method {
        Method::ProjectedRelaxation => CONTACT_RTOL,
        Method::Penalty { eps_sequence } => eps_sequence.last().copied().unwrap().max(CONTACT_RTOL),
    };
    let mut sol = ObstacleSolution {
        grid: *grid,
        method: method.clone(),
        u,
        residual,
        x0_curve: Vec::new(),
        x1_curve: Vec::new(),
        contact_tol,
        stats,
    };
    let (x0, x1) = extract_free_boundaries(model, &sol)?;
    sol.x0_curve = x0;
    sol.x1_curve = x1;
    Ok(sol)
}

/// Relaxation factor from the Jacobi spectral radius of the constant stencil.
fn optimal_relaxation(s: &Stencil, nx: usize) -> f64 {
    let off = 2.0 * (s.lower * s.upper).max(0.0).sqrt();
    let rho = (off / s.diag) * (std::f64::consts::PI / (nx - 1) as f64).cos();
    if rho >= 1.0 {
        return 1.0;
    }
    2.0 / (1.0 + (1.0 - rho * rho).sqrt())
}

/// Projected SOR sweeps until the complementarity residual meets `tol_lcp`.
/// Returns the sweep count or, on failure, the worst residual.
fn psor(prob: &UProblem, rhs: &[f64], u: &mut [f64], omega: f64, c: &SolverControls) -> std::result::Result<usize, f64> {
    let n = u.len();
    let s = prob.stencil;
    let mut worst = f64::INFINITY;
    for sweep in 1..=c.max_sweeps {
        for i in 1..n - 1 {
            let gs = (rhs[i] - s.lower * u[i - 1] - s.upper * u[i + 1]) / s.diag;
            u[i] = (u[i] + omega * (gs - u[i])).clamp(prob.lo, prob.hi);
        }
        worst = 0.0;
        for i in 1..n - 1 {
            let f = prob.operator(u, rhs, i);
            worst = f64::max(worst, prob.complementarity(u[i], f).abs());
        }
        if worst <= c.tol_lcp {
            return Ok(sweep);
        }
    }
    Err(worst)
}
