//! Checks that need a full solve. The reference solutions are computed once per run.

use std::sync::OnceLock;

use jobswitch::integral::{solve_boundaries_ie, IeBoundaries, IeSolverConfig, IntegralRep};
use jobswitch::obstacle::*;
use jobswitch::strategy::{GridPolicy, StrategySurface};
use jobswitch::{BoundaryCurve, Job, Model};

struct Fixture {
    model: Model,
    grid: Grid,
    pde: ObstacleSolution,
    l0: BoundaryCurve,
    l1: BoundaryCurve,
    q: QSurfaces,
    ie: IeBoundaries,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let model = Model::reference();
        let grid = Grid::standard(&model);
        let pde = solve_obstacle(&model, &grid, &Method::ProjectedRelaxation).unwrap();
        let (l0, l1) = to_lambda_boundaries(&pde.x0_curve, &pde.x1_curve, model.horizon()).unwrap();
        let q = recover_q01(&model, &grid, &l0, &l1).unwrap();
        let ie = solve_boundaries_ie(&model, &IeSolverConfig::default()).unwrap();
        Fixture { model, grid, pde, l0, l1, q, ie }
    })
}

fn consistency_error(sol: &ObstacleSolution, q: &QSurfaces) -> f64 {
    let g = &sol.grid;
    let mut worst = 0.0f64;
    for k in 0..=g.nt {
        for i in 0..g.nx {
            let lam = g.x(i).exp();
            let e = (q.q[1][k][i] - q.q[0][k][i] - lam * sol.u[k][i]).abs() / (1.0 + lam);
            worst = worst.max(e);
        }
    }
    worst
}

#[test]
fn invariants_hold_on_the_standard_grid() {
    let f = fixture();
    let report = check_invariants(&f.model, &f.pde, Some(&f.q));
    for c in &report.checks {
        assert!(c.passed, "{} worst {:e} tol {:e}", c.name, c.worst, c.tol);
    }
}

#[test]
fn recovered_surfaces_match_the_value_difference() {
    let f = fixture();
    let fine = consistency_error(&f.pde, &f.q);
    assert!(fine <= 3e-3, "{fine:e}");

    let m = &f.model;
    let coarse = Grid::new(f.grid.n_trunc, 1001, 1500, m.horizon()).unwrap();
    let sol = solve_obstacle(m, &coarse, &Method::ProjectedRelaxation).unwrap();
    let (l0, l1) = to_lambda_boundaries(&sol.x0_curve, &sol.x1_curve, m.horizon()).unwrap();
    let q = recover_q01(m, &coarse, &l0, &l1).unwrap();
    let rough = consistency_error(&sol, &q);
    assert!(fine < rough, "standard {fine:e} coarse {rough:e}");
}

#[test]
fn pde_and_ie_boundaries_agree() {
    let f = fixture();
    let m = &f.model;
    let (t, cut) = (m.horizon(), m.last_up_switch());
    for k in 0..=200 {
        let s = 0.5 + k as f64 * (t - 1.0) / 200.0;
        let d1 = (f.l1.value_at(s).unwrap().ln() - f.ie.lambda1.value_at(s).unwrap().ln()).abs();
        assert!(d1 <= 0.02, "Lambda1 at {s}: {d1}");
        if s <= cut - 0.5 {
            let d0 = (f.l0.value_at(s).unwrap().ln() - f.ie.lambda0.value_at(s).unwrap().ln()).abs();
            assert!(d0 <= 0.02, "Lambda0 at {s}: {d0}");
        }
    }
}

#[test]
fn ie_boundaries_satisfy_contact_identities() {
    let f = fixture();
    let m = &f.model;
    let rep = IntegralRep::new(m, &f.ie.lambda0, &f.ie.lambda1).unwrap();
    for k in 0..40 {
        let s = 0.25 + k as f64 * 0.7;
        let b1 = f.ie.lambda1.value_at(s).unwrap();
        let gap1 = rep.q1(s, b1).unwrap() - rep.q0(s, b1).unwrap() + m.p.zeta1 * b1;
        assert!(gap1.abs() <= 1e-8 * (1.0 + b1), "Lambda1 identity at {s}: {gap1:e}");
        if s < m.last_up_switch() {
            let b0 = f.ie.lambda0.value_at(s).unwrap();
            let gap0 = rep.q1(s, b0).unwrap() - rep.q0(s, b0).unwrap() - m.p.zeta0 * b0;
            assert!(gap0.abs() <= 1e-8 * (1.0 + b0), "Lambda0 identity at {s}: {gap0:e}");
        }
    }
}

#[test]
fn ie_endpoint_clusters_are_monotone() {
    let f = fixture();
    let m = &f.model;
    let h = m.horizon() / IeSolverConfig::default().nt_ie as f64;
    let (cut, t) = (m.last_up_switch(), m.horizon());
    let c0 = &f.ie.lambda0;
    let near0: Vec<f64> = (0..c0.len()).filter(|&i| c0.times[i] > cut - 3.0 * h && c0.times[i] < cut).map(|i| c0.values[i]).collect();
    assert!(near0.len() > 20);
    assert!(near0.windows(2).all(|w| w[1] > w[0]));
    assert!(*near0.last().unwrap() > 1e10);
    let c1 = &f.ie.lambda1;
    let near1: Vec<f64> = (0..c1.len()).filter(|&i| c1.times[i] > t - 3.0 * h && c1.times[i] < t).map(|i| c1.values[i]).collect();
    assert!(near1.len() > 20);
    assert!(near1.windows(2).all(|w| w[1] < w[0]));
    assert!(*near1.last().unwrap() < 1e-10);
}

#[test]
fn ie_boundaries_are_stable_under_refinement() {
    let f = fixture();
    let m = &f.model;
    let half = solve_boundaries_ie(m, &IeSolverConfig { nt_ie: 750, ..Default::default() }).unwrap();
    let h = m.horizon() / 750.0;
    let (cut, t) = (m.last_up_switch(), m.horizon());
    for k in 0..=750 {
        let s = k as f64 * h;
        if t - s > 2.0 * h {
            let d = (half.lambda1.value_at(s).unwrap().ln() - f.ie.lambda1.value_at(s).unwrap().ln()).abs();
            assert!(d <= 5e-3, "Lambda1 at {s}: {d}");
        }
        if cut - s > 2.0 * h {
            let d = (half.lambda0.value_at(s).unwrap().ln() - f.ie.lambda0.value_at(s).unwrap().ln()).abs();
            assert!(d <= 5e-3, "Lambda0 at {s}: {d}");
        }
    }
}

#[test]
fn q0_matches_closed_form_after_last_switch() {
    let f = fixture();
    let m = &f.model;
    let rep = IntegralRep::new(m, &f.ie.lambda0, &f.ie.lambda1).unwrap();
    let cut = m.last_up_switch();
    for k in 0..20 {
        let t = cut + (m.horizon() - cut) * k as f64 / 20.0;
        let lam = 0.2 + 0.15 * k as f64;
        let exact = m.q0_no_switch(t, lam);
        assert!((rep.q0(t, lam).unwrap() - exact).abs() <= 1e-6, "t {t} lambda {lam}");
    }
    assert!((rep.q0(cut, 1.0).unwrap() + 0.811_224_489_795_9).abs() <= 1e-9);
}

/// Interior sample points at least 0.15 in ln λ from either boundary.
fn interior_points(f: &Fixture) -> Vec<(Job, f64, f64)> {
    let mut pts = Vec::new();
    for &t in &[0.0, 3.0, 8.0, 15.0, 22.0, 26.5, 28.0] {
        for k in 0..16 {
            let lam = (-2.5 + 0.3 * k as f64).exp();
            for j in [Job::D0, Job::D1] {
                let far = [f.ie.lambda0.value_at(t).unwrap(), f.ie.lambda1.value_at(t).unwrap()]
                    .iter()
                    .all(|b| !(*b > 0.0 && b.is_finite()) || (lam.ln() - b.ln()).abs() > 0.15);
                if far {
                    pts.push((j, t, lam));
                }
            }
        }
    }
    pts
}

#[test]
fn strategy_matches_finite_differences_of_the_pde_surface() {
    let f = fixture();
    let ss = StrategySurface::new(&f.model, f.ie.lambda0.clone(), f.ie.lambda1.clone()).unwrap();
    let gp = GridPolicy::new(&f.model, &f.q).unwrap();
    let m = &f.model;
    for (j, t, lam) in interior_points(f) {
        // Differences in x = ln λ, several PDE cells wide.
        let h = 0.05;
        let q = |dx: f64| gp.q_hat(j, t, lam * dx.exp()).unwrap();
        let q_x = (q(h) - q(-h)) / (2.0 * h);
        let q_xx = (q(h) - 2.0 * q(0.0) + q(-h)) / (h * h);
        let w_fd = -q_x / lam;
        let pi_fd = m.d.theta / m.p.sigma * (q_xx - q_x) / lam;
        let w = ss.wealth(j, t, lam).unwrap();
        let pi = ss.investment(j, t, lam).unwrap();
        assert!((w - w_fd).abs() <= 1e-2 * (1.0 + w.abs()), "W {j:?} t {t} lambda {lam}: {w} vs {w_fd}");
        assert!((pi - pi_fd).abs() <= 2e-2 * (1.0 + pi.abs()), "Pi {j:?} t {t} lambda {lam}: {pi} vs {pi_fd}");
    }
}

#[test]
fn wealth_inversion_round_trips_and_minimizes_the_dual() {
    let f = fixture();
    let ss = StrategySurface::new(&f.model, f.ie.lambda0.clone(), f.ie.lambda1.clone()).unwrap();
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut unit = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..50 {
        let j = if unit() < 0.5 { Job::D0 } else { Job::D1 };
        let t = 29.0 * unit();
        let w = ss.wealth_floor(j, t) + 0.5 + 60.0 * unit();
        let lam = ss.lambda_from_wealth(j, t, w).unwrap();
        let back = ss.wealth(j, t, lam).unwrap();
        assert!((back - w).abs() <= 1e-6 * (1.0 + w.abs()), "{j:?} t {t} w {w}: {back}");
        let v = |l: f64| ss.q_hat(j, t, l).unwrap() + l * w;
        assert!(v(lam) <= v(lam * 1.05) + 1e-9 && v(lam) <= v(lam / 1.05) + 1e-9);
    }
}

#[test]
fn wealth_is_decreasing_in_lambda() {
    let f = fixture();
    let ss = StrategySurface::new(&f.model, f.ie.lambda0.clone(), f.ie.lambda1.clone()).unwrap();
    for &t in &[0.0, 10.0, 27.0] {
        for j in [Job::D0, Job::D1] {
            let ws: Vec<f64> = (0..60).map(|k| ss.wealth(j, t, (-4.0 + 0.15 * k as f64).exp()).unwrap()).collect();
            assert!(ws.windows(2).all(|w| w[1] < w[0]), "{j:?} t {t}");
        }
    }
}

#[test]
fn wealth_boundaries_are_ordered_with_the_right_limits() {
    let f = fixture();
    let m = &f.model;
    let ss = StrategySurface::new(m, f.ie.lambda0.clone(), f.ie.lambda1.clone()).unwrap();
    let (w0, w1) = ss.wealth_boundaries().unwrap();
    for (i, &t) in w0.times.iter().enumerate() {
        if let Ok(Some(upper)) = ss.w1_at(t) {
            assert!(w0.values[i] < upper, "t {t}");
        }
    }
    let limit = -m.p.eps0 / m.p.r * (1.0 - (-m.p.r * m.d.t1).exp());
    assert!((limit + 1.285_714_285_714_284_5).abs() < 1e-12);
    assert!((w0.values.last().unwrap() - limit).abs() <= 1e-2);
    let tail: Vec<f64> = w1.values.iter().rev().take(20).copied().collect();
    assert!(tail.windows(2).all(|w| w[0] > w[1]));
    assert!(tail[0] > 1e4);
}
