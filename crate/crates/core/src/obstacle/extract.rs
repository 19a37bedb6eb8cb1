use super::ObstacleSolution;
use crate::curve::{BoundaryCurve, NodeFlag};
use crate::error::{Error, Result};
use crate::model::Model;

/// Boundary positions in x per time step; `None` where absent.
pub type LogCurve = Vec<Option<f64>>;

/// Free boundaries per time slice: x₀(τ) (upper contact starts above it) and
/// x₁(τ) (lower contact ends at it). `None` marks an empty contact set.
///
/// The node estimate is refined by extrapolating √|u − obstacle| linearly from
/// the two nearest free nodes; the gap grows quadratically away from a
/// smooth-pasting boundary, so its square root is locally linear. The discrete
/// contact set overshoots the smooth profile by a fraction of a cell, so the
/// extrapolated root may lie up to one cell inside it.
pub fn extract_free_boundaries(model: &Model, sol: &ObstacleSolution) -> Result<(LogCurve, LogCurve)> {
    let g = &sol.grid;
    let (lo, hi) = (-model.p.zeta1, model.p.zeta0);
    let tol_lo = sol.contact_tol * (1.0 + lo.abs());
    let tol_hi = sol.contact_tol * (1.0 + hi.abs());
    let dx = g.dx();
    let mut x0 = Vec::with_capacity(g.nt + 1);
    let mut x1 = Vec::with_capacity(g.nt + 1);
    for (k, u) in sol.u.iter().enumerate() {
        let lower: Vec<bool> = u.iter().map(|v| (v - lo).abs() <= tol_lo).collect();
        let upper: Vec<bool> = u.iter().map(|v| (v - hi).abs() <= tol_hi).collect();

        let n_lower = lower.iter().take_while(|&&c| c).count();
        if lower[n_lower..].iter().any(|&c| c) {
            return Err(Error::Structural(format!(
                "lower contact set is not a half-line at tau = {}",
                g.tau(k)
            )));
        }
        let n_upper = upper.iter().rev().take_while(|&&c| c).count();
        if upper[..u.len() - n_upper].iter().any(|&c| c) {
            return Err(Error::Structural(format!(
                "upper contact set is not a half-line at tau = {}",
                g.tau(k)
            )));
        }
        if n_lower + n_upper > u.len() {
            return Err(Error::Structural(format!("contact sets overlap at tau = {}", g.tau(k))));
        }

        x1.push(if n_lower == 0 {
            None
        } else {
            let i = n_lower - 1;
            let shift = sqrt_gap_root(u, i + 1, i + 2, lo);
            Some(g.x(i) + dx * (1.0 - shift))
        });
        x0.push(if n_upper == 0 {
            None
        } else {
            let b = u.len() - n_upper;
            if b == 0 {
                Some(g.x(0))
            } else {
                let shift = if b >= 2 { sqrt_gap_root(u, b - 1, b - 2, hi) } else { 1.0 };
                Some(g.x(b) - dx * (1.0 - shift))
            }
        });
    }
    Ok((x0, x1))
}

/// Distance, in cells and measured from the free node `a` towards the contact
/// set, at which the line through √gap(a), √gap(b) vanishes; clamped to [0, 2].
fn sqrt_gap_root(u: &[f64], a: usize, b: usize, obstacle: f64) -> f64 {
    if b >= u.len() {
        return 1.0;
    }
    let sa = (u[a] - obstacle).abs().sqrt();
    let sb = (u[b] - obstacle).abs().sqrt();
    if sb <= sa {
        return 1.0;
    }
    (sa / (sb - sa)).clamp(0.0, 2.0)
}

/// Maps x-curves indexed by τ-steps to (t, λ) curves: Λ₀(t) = e^{x₀(T−t)}, Λ₁(t) = e^{x₁(T−t)}.
/// An empty upper contact set gives an absent Λ₀; an empty lower one gives Λ₁ = 0.
pub fn to_lambda_boundaries(
    x0_curve: &[Option<f64>],
    x1_curve: &[Option<f64>],
    horizon: f64,
) -> Result<(BoundaryCurve, BoundaryCurve)> {
    let nt = x0_curve.len();
    if nt != x1_curve.len() || nt < 2 {
        return Err(Error::Input("x-curves must have equal length >= 2".into()));
    }
    let dt = horizon / (nt - 1) as f64;
    let times: Vec<f64> = (0..nt).map(|k| k as f64 * dt).collect();
    let mut l0 = Vec::with_capacity(nt);
    let mut l1 = Vec::with_capacity(nt);
    let mut f0 = Vec::with_capacity(nt);
    let mut f1 = Vec::with_capacity(nt);
    for k in 0..nt {
        let step = nt - 1 - k;
        match x0_curve[step] {
            Some(x) => {
                l0.push(x.exp());
                f0.push(NodeFlag::Solved);
            }
            None => {
                l0.push(f64::INFINITY);
                f0.push(NodeFlag::Limit);
            }
        }
        match x1_curve[step] {
            Some(x) => {
                l1.push(x.exp());
                f1.push(NodeFlag::Solved);
            }
            None => {
                l1.push(0.0);
                f1.push(NodeFlag::Limit);
            }
        }
    }
    Ok((
        BoundaryCurve::new(times.clone(), l0, f0)?,
        BoundaryCurve::new(times, l1, f1)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absent_and_exponentiated() {
        let m = Model::reference();
        let x0 = vec![None, Some(m.d.x2), Some(1.0)];
        let x1 = vec![None, Some(-2.0), Some(-1.0)];
        let (l0, l1) = to_lambda_boundaries(&x0, &x1, 30.0).unwrap();
        assert_eq!(l0.times, vec![0.0, 15.0, 30.0]);
        assert!((l0.values[1] - 0.746_268_656_716_418).abs() < 1e-14);
        assert!(l0.values[2].is_infinite());
        assert_eq!(l1.values[2], 0.0);
        assert!((l1.values[0] - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn sqrt_gap_recovers_parabola_root() {
        // gap = (x − 0.3)² sampled at x = 1, 2 → root at 0.3 cells before node 1.
        let u = vec![0.0, 0.49, 2.89];
        let s = sqrt_gap_root(&u, 1, 2, 0.0);
        assert!((s - 0.7).abs() < 1e-12);
    }
}
