//! Penalty scheme: the obstacle constraints replaced by the smooth penalties
//! β₁,ε(u+ζ₁) ≥ 0 and β₂,ε(u−ζ₀) ≤ 0, solved per time step by damped Newton.

use super::{SolverControls, UProblem};
use crate::linalg::solve_tridiagonal;
use crate::model::Model;

/// C² blend from 1 (with slope −2, zero curvature) at s=0 to 0 (flat) at s=1.
/// Decreasing and convex on [0,1].
#[inline]
fn blend(s: f64) -> f64 {
    1.0 - 2.0 * s + 2.0 * s.powi(3) - s.powi(4)
}

#[inline]
fn blend_prime(s: f64) -> f64 {
    -2.0 * (1.0 - s).powi(2) * (1.0 + 2.0 * s)
}

/// β₁,ε(ξ): L₁eⁿ(1−2ξ/ε) for ξ ≤ 0, zero for ξ ≥ ε.
pub fn beta1(xi: f64, eps: f64, scale: f64) -> f64 {
    if xi <= 0.0 {
        scale * (1.0 - 2.0 * xi / eps)
    } else if xi >= eps {
        0.0
    } else {
        scale * blend(xi / eps)
    }
}

pub fn beta1_prime(xi: f64, eps: f64, scale: f64) -> f64 {
    if xi <= 0.0 {
        -2.0 * scale / eps
    } else if xi >= eps {
        0.0
    } else {
        scale * blend_prime(xi / eps) / eps
    }
}

/// β₂,ε(ξ): (ε₀−ε₁)(1+2ξ/ε) for ξ ≥ 0, zero for ξ ≤ −ε. `scale` is ε₀−ε₁ < 0.
pub fn beta2(xi: f64, eps: f64, scale: f64) -> f64 {
    if xi >= 0.0 {
        scale * (1.0 + 2.0 * xi / eps)
    } else if xi <= -eps {
        0.0
    } else {
        scale * blend(-xi / eps)
    }
}

pub fn beta2_prime(xi: f64, eps: f64, scale: f64) -> f64 {
    if xi >= 0.0 {
        2.0 * scale / eps
    } else if xi <= -eps {
        0.0
    } else {
        -scale * blend_prime(-xi / eps) / eps
    }
}

pub(crate) struct NewtonWork {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    step: Vec<f64>,
    trial: Vec<f64>,
    scratch: Vec<f64>,
}

impl NewtonWork {
    pub fn new(nx: usize) -> Self {
        let m = nx - 2;
        NewtonWork {
            lower: vec![0.0; m],
            diag: vec![0.0; m],
            upper: vec![0.0; m],
            step: vec![0.0; m],
            trial: vec![0.0; nx],
            scratch: Vec::with_capacity(m),
        }
    }
}

struct Penalties {
    eps: f64,
    s1: f64,
    s2: f64,
    zeta0: f64,
    zeta1: f64,
}

impl Penalties {
    fn residual(&self, prob: &UProblem, u: &[f64], rhs: &[f64], i: usize) -> f64 {
        prob.operator(u, rhs, i) - beta1(u[i] + self.zeta1, self.eps, self.s1) - beta2(u[i] - self.zeta0, self.eps, self.s2)
    }

    /// Euclidean norm of the residual, the line-search merit.
    fn norm(&self, prob: &UProblem, u: &[f64], rhs: &[f64]) -> f64 {
        (1..u.len() - 1).map(|i| self.residual(prob, u, rhs, i).powi(2)).sum::<f64>().sqrt()
    }
}

/// Damped Newton on the penalized step equations. Boundary entries of `u` are held fixed.
/// Returns the iteration count or, on failure, the worst residual.
#[allow(clippy::too_many_arguments)]
pub(crate) fn newton_solve(
    prob: &UProblem,
    rhs: &[f64],
    u: &mut [f64],
    eps: f64,
    n_trunc: f64,
    model: &Model,
    controls: &SolverControls,
    w: &mut NewtonWork,
) -> std::result::Result<usize, f64> {
    let p = &model.p;
    let pen = Penalties {
        eps,
        s1: p.l1 * n_trunc.exp(),
        s2: p.eps0 - p.eps1,
        zeta0: p.zeta0,
        zeta1: p.zeta1,
    };
    let s = prob.stencil;
    let nx = u.len();
    let mut g_norm = pen.norm(prob, u, rhs);
    for it in 1..=controls.max_newton {
        for i in 1..nx - 1 {
            let m = i - 1;
            let d1 = beta1_prime(u[i] + pen.zeta1, eps, pen.s1);
            let d2 = beta2_prime(u[i] - pen.zeta0, eps, pen.s2);
            w.lower[m] = s.lower;
            w.upper[m] = s.upper;
            w.diag[m] = s.diag - d1 - d2;
            w.step[m] = -pen.residual(prob, u, rhs, i);
        }
        if !solve_tridiagonal(&w.lower, &w.diag, &w.upper, &mut w.step, &mut w.scratch) {
            return Err(g_norm);
        }
        let step_norm = w.step.iter().fold(0.0f64, |a, d| a.max(d.abs()));
        let u_scale = 1.0 + u.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        // Halve the step while that lowers the merit; far from the solution the
        // full step can overshoot into a steep penalty branch, and if no
        // fraction helps the full step is taken anyway.
        let mut alpha = 1.0;
        let mut best = (f64::INFINITY, 1.0);
        for _ in 0..12 {
            w.trial.copy_from_slice(u);
            for i in 1..nx - 1 {
                w.trial[i] += alpha * w.step[i - 1];
            }
            let trial_norm = pen.norm(prob, &w.trial, rhs);
            if trial_norm < best.0 {
                best = (trial_norm, alpha);
            }
            if trial_norm < g_norm {
                break;
            }
            alpha *= 0.5;
        }
        alpha = if best.0 < g_norm { best.1 } else { 1.0 };
        for i in 1..nx - 1 {
            u[i] += alpha * w.step[i - 1];
        }
        if !u.iter().all(|v| v.is_finite()) {
            return Err(g_norm);
        }
        g_norm = pen.norm(prob, u, rhs);
        if alpha * step_norm <= 1e-12 * u_scale {
            return Ok(it);
        }
    }
    Err(g_norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blend_matches_endpoints() {
        assert_eq!(blend(0.0), 1.0);
        assert_eq!(blend(1.0), 0.0);
        assert_eq!(blend_prime(0.0), -2.0);
        assert_eq!(blend_prime(1.0), 0.0);
        // Curvature 12s − 12s² vanishes at both ends.
        let h = 1e-5;
        let curv = |s: f64| (blend(s + h) - 2.0 * blend(s) + blend(s - h)) / (h * h);
        assert!(curv(0.0).abs() < 1e-3 && curv(1.0).abs() < 1e-3);
    }

    #[test]
    fn penalties_are_c1_and_signed() {
        let (eps, s1, s2) = (1e-3, 10.0, -0.7);
        for xi in [0.0, eps, -eps] {
            let d = 1e-9;
            assert!((beta1(xi - d, eps, s1) - beta1(xi + d, eps, s1)).abs() < 1e-4);
            assert!((beta2(xi - d, eps, s2) - beta2(xi + d, eps, s2)).abs() < 1e-4);
            let slope = |f: &dyn Fn(f64) -> f64, x: f64| (f(x + d) - f(x - d)) / (2.0 * d);
            assert!((slope(&|x| beta1(x, eps, s1), xi) - beta1_prime(xi, eps, s1)).abs() < 1e-2 * s1 / eps);
            assert!((slope(&|x| beta2(x, eps, s2), xi) - beta2_prime(xi, eps, s2)).abs() < 1e-2 * s2.abs() / eps);
        }
        for k in -30..30 {
            let xi = k as f64 * eps / 10.0;
            assert!(beta1(xi, eps, s1) >= 0.0 && beta1_prime(xi, eps, s1) <= 0.0);
            assert!(beta2(xi, eps, s2) <= 0.0 && beta2_prime(xi, eps, s2) <= 0.0);
        }
    }
}
