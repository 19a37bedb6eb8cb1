//! Integral representations of Q₀, Q₁ (CRRA case) and the coupled integral
//! equations for the free boundaries, solved by backward recursion in time.
//!
//! With u = s − t and d±(u, ρ) = (ln ρ + (β−r±θ²/2)u)/(θ√u):
//!
//! ```text
//! Q₀(t,λ) = G₀ + ∫_t^{T−T1} [a₀λe^{−ru}N(d₊(u, λ/Λ₀(s))) − (L₁−L₀)e^{−βu}N(d₋(·))] ds,   λ < Λ₀(t)
//! Q₁(t,λ) = G₁ + ∫_t^T [−a₁λe^{−ru}N(−d₊(u, λ/Λ₁(s))) + (L₁−L₀)e^{−βu}N(−d₋(·))] ds,    λ > Λ₁(t)
//! ```
//!
//! where G_j is the no-switch value, a₀ = ε₁−ε₀−rζ₀ and a₁ = ε₁−ε₀+rζ₁. The
//! boundaries solve Q₁−Q₀ = ζ₀Λ₀ and Q₁−Q₀ = −ζ₁Λ₁.

use serde::Serialize;

use crate::curve::{BoundaryCurve, NodeFlag};
use crate::error::{Error, Result};
use crate::model::{Job, Model};
use crate::normal::norm_cdf;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// d±(u, ρ) = (ln ρ + (β−r±θ²/2)u)/(θ√u).
pub fn d_pm(model: &Model, sign: Sign, t_elapsed: f64, ratio: f64) -> Result<f64> {
    if !(t_elapsed > 0.0) {
        return Err(Error::Domain(format!("d_pm requires elapsed time > 0, got {t_elapsed}")));
    }
    if !(ratio > 0.0) {
        return Err(Error::Domain(format!("d_pm requires ratio > 0, got {ratio}")));
    }
    Ok(Kernels::new(model).d(sign, t_elapsed, ratio.ln()))
}

/// Precomputed constants of the representation kernels.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Kernels {
    pub theta: f64,
    pub drift_plus: f64,
    pub drift_minus: f64,
    pub r: f64,
    pub beta: f64,
    pub a0: f64,
    pub a1: f64,
    pub dl: f64,
}

impl Kernels {
    pub fn new(model: &Model) -> Self {
        let p = &model.p;
        let th = model.d.theta;
        Kernels {
            theta: th,
            drift_plus: p.beta - p.r + 0.5 * th * th,
            drift_minus: p.beta - p.r - 0.5 * th * th,
            r: p.r,
            beta: p.beta,
            a0: p.eps1 - p.eps0 - p.r * p.zeta0,
            a1: p.eps1 - p.eps0 + p.r * p.zeta1,
            dl: p.l1 - p.l0,
        }
    }

    #[inline]
    pub fn d(&self, sign: Sign, u: f64, log_ratio: f64) -> f64 {
        let drift = match sign {
            Sign::Plus => self.drift_plus,
            Sign::Minus => self.drift_minus,
        };
        (log_ratio + drift * u) / (self.theta * u.sqrt())
    }

    /// Job-0 switching integrand at elapsed time u for boundary level `bound`.
    #[inline]
    pub fn switch0(&self, u: f64, lambda: f64, bound: f64) -> f64 {
        if bound.is_infinite() {
            return 0.0;
        }
        let (np, nm) = if u <= 0.0 {
            let h = step_limit(lambda, bound);
            (h, h)
        } else {
            let lr = (lambda / bound).ln();
            (norm_cdf(self.d(Sign::Plus, u, lr)), norm_cdf(self.d(Sign::Minus, u, lr)))
        };
        self.a0 * lambda * (-self.r * u).exp() * np - self.dl * (-self.beta * u).exp() * nm
    }

    /// Job-1 switching integrand at elapsed time u for boundary level `bound`.
    #[inline]
    pub fn switch1(&self, u: f64, lambda: f64, bound: f64) -> f64 {
        if bound <= 0.0 {
            return 0.0;
        }
        let (np, nm) = if u <= 0.0 {
            let h = 1.0 - step_limit(lambda, bound);
            (h, h)
        } else {
            let lr = (lambda / bound).ln();
            (norm_cdf(-self.d(Sign::Plus, u, lr)), norm_cdf(-self.d(Sign::Minus, u, lr)))
        };
        -self.a1 * lambda * (-self.r * u).exp() * np + self.dl * (-self.beta * u).exp() * nm
    }
}

/// lim_{u→0⁺} N(d±(u, λ/Λ)): 1 above the boundary, 0 below, ½ on it.
#[inline]
fn step_limit(lambda: f64, bound: f64) -> f64 {
    if lambda > bound {
        1.0
    } else if lambda < bound {
        0.0
    } else {
        0.5
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IeSolverConfig {
    pub nt_ie: usize,
    /// Residual tolerance of the boundary equations, relative to the size of
    /// their no-switch terms (which shrink near the endpoints).
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    /// Search cap for Λ₀ on the approach to T − T1; roots beyond it are stored as absent.
    pub lambda_cap: f64,
    /// Distance of the first solved node from each singular endpoint (T − T1 for Λ₀, T for Λ₁).
    pub endpoint_offset: f64,
    /// Geometric nodes between `endpoint_offset` and one regular step below each endpoint.
    pub endpoint_nodes: usize,
}

impl Default for IeSolverConfig {
    fn default() -> Self {
        IeSolverConfig {
            nt_ie: 1500,
            newton_tol: 1e-11,
            max_newton_iters: 200,
            lambda_cap: 1e15,
            endpoint_offset: 1e-12,
            endpoint_nodes: 30,
        }
    }
}

impl IeSolverConfig {
    pub fn check(&self, model: &Model) -> Result<()> {
        let h = model.horizon() / self.nt_ie as f64;
        if self.nt_ie < 50 {
            return Err(Error::Input(format!("nt_ie must be at least 50, got {}", self.nt_ie)));
        }
        if self.lambda_cap < 1e6 * model.d.x2.exp() {
            return Err(Error::Input("lambda_cap must be at least 1e6 * e^X2".into()));
        }
        if !(self.endpoint_offset > 0.0 && self.endpoint_offset <= h) {
            return Err(Error::Input(format!("endpoint_offset must lie in (0, T/nt_ie = {h}]")));
        }
        if !(self.newton_tol > 0.0) || self.max_newton_iters == 0 {
            return Err(Error::Input("newton_tol and max_newton_iters must be positive".into()));
        }
        Ok(())
    }

    /// Time nodes: the regular grid k·T/nt_ie, the node T − T1, and geometric
    /// clusters approaching T − T1 and T from below.
    pub fn nodes(&self, model: &Model) -> Vec<f64> {
        let horizon = model.horizon();
        let anchor = model.last_up_switch();
        let h = horizon / self.nt_ie as f64;
        let mut nodes: Vec<f64> = (0..=self.nt_ie)
            .map(|k| k as f64 * h)
            .filter(|s| (s - anchor).abs() >= 0.5 * h)
            .collect();
        nodes.push(anchor);
        let m = self.endpoint_nodes;
        for end in [anchor, horizon] {
            for k in 0..m {
                let dist = self.endpoint_offset * (h / self.endpoint_offset).powf(k as f64 / m as f64);
                if dist < h {
                    nodes.push(end - dist);
                }
            }
        }
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * horizon);
        nodes
    }
}

/// Free boundaries from the integral equations, with solver statistics.
#[derive(Clone, Debug, Serialize)]
pub struct IeBoundaries {
    pub lambda0: BoundaryCurve,
    pub lambda1: BoundaryCurve,
    pub newton_iterations: usize,
    /// Worst scaled residual over all solved nodes.
    pub worst_residual: f64,
}

/// Integral representation evaluators bound to a pair of boundary curves.
#[derive(Clone, Copy)]
pub struct IntegralRep<'a> {
    pub model: &'a Model,
    pub lambda0: &'a BoundaryCurve,
    pub lambda1: &'a BoundaryCurve,
    k: Kernels,
}

impl<'a> IntegralRep<'a> {
    pub fn new(model: &'a Model, lambda0: &'a BoundaryCurve, lambda1: &'a BoundaryCurve) -> Result<Self> {
        let horizon = model.horizon();
        if !lambda0.covers(0.0, horizon) || !lambda1.covers(0.0, horizon) {
            return Err(Error::Input("boundary curves must cover [0, T]".into()));
        }
        Ok(IntegralRep {
            model,
            lambda0,
            lambda1,
            k: Kernels::new(model),
        })
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t <= self.model.horizon()) {
            return Err(Error::Input(format!("time {t} outside [0, T]")));
        }
        Ok(())
    }

    fn integrate(&self, curve: &BoundaryCurve, t: f64, end: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
        let eps = 1e-13 * end.max(1.0);
        let first = curve.times.partition_point(|&s| s <= t + eps);
        let last = curve.times.partition_point(|&s| s <= end + eps);
        if first >= last {
            return 0.0;
        }
        integrate_switch(&curve.times[first..last], &curve.values[first..last], t, curve.eval_in_range(t), f)
    }

    /// Switching part of Q₀ evaluated through the representation (no validity check).
    fn switch0(&self, t: f64, lambda: f64) -> f64 {
        let end = self.model.last_up_switch();
        self.integrate(self.lambda0, t, end, |u, b| self.k.switch0(u, lambda, b))
    }

    fn switch1(&self, t: f64, lambda: f64) -> f64 {
        self.integrate(self.lambda1, t, self.model.horizon(), |u, b| self.k.switch1(u, lambda, b))
    }

    /// Q₀(t,λ); above Λ₀(t) via Q₀ = Q₁ − ζ₀λ.
    pub fn q0(&self, t: f64, lambda: f64) -> Result<f64> {
        self.check_time(t)?;
        if lambda >= self.lambda0.value_at(t)? {
            return Ok(self.q1_valid(t, lambda) - self.model.p.zeta0 * lambda);
        }
        Ok(self.q0_valid(t, lambda))
    }

    /// Q₁(t,λ); below Λ₁(t) via Q₁ = Q₀ − ζ₁λ.
    pub fn q1(&self, t: f64, lambda: f64) -> Result<f64> {
        self.check_time(t)?;
        if lambda <= self.lambda1.value_at(t)? {
            return Ok(self.q0_valid(t, lambda) - self.model.p.zeta1 * lambda);
        }
        Ok(self.q1_valid(t, lambda))
    }

    pub fn q(&self, j: Job, t: f64, lambda: f64) -> Result<f64> {
        match j {
            Job::D0 => self.q0(t, lambda),
            Job::D1 => self.q1(t, lambda),
        }
    }

    fn q0_valid(&self, t: f64, lambda: f64) -> f64 {
        self.model.stay_value(Job::D0, t, lambda) + self.switch0(t, lambda)
    }

    fn q1_valid(&self, t: f64, lambda: f64) -> f64 {
        self.model.stay_value(Job::D1, t, lambda) + self.switch1(t, lambda)
    }
}

pub fn q0_ie(model: &Model, t: f64, lambda: f64, lambda0: &BoundaryCurve, lambda1: &BoundaryCurve) -> Result<f64> {
    IntegralRep::new(model, lambda0, lambda1)?.q0(t, lambda)
}

pub fn q1_ie(model: &Model, t: f64, lambda: f64, lambda0: &BoundaryCurve, lambda1: &BoundaryCurve) -> Result<f64> {
    IntegralRep::new(model, lambda0, lambda1)?.q1(t, lambda)
}

/// Four-point Gauss–Legendre nodes and weights on [0, 1].
pub(crate) const GL4: [(f64, f64); 4] = [
    (0.069_431_844_202_973_71, 0.173_927_422_568_726_93),
    (0.330_009_478_207_571_87, 0.326_072_577_431_273_07),
    (0.669_990_521_792_428_1, 0.326_072_577_431_273_07),
    (0.930_568_155_797_026_3, 0.173_927_422_568_726_93),
];

/// Boundary level between two nodes: linear in ln λ between positive values,
/// linear in λ next to a zero, absent next to an absent value.
#[inline]
pub(crate) fn interp_level(a: f64, b: f64, w: f64) -> f64 {
    if a.is_infinite() || b.is_infinite() {
        f64::INFINITY
    } else if a > 0.0 && b > 0.0 {
        (a.ln() + w * (b.ln() - a.ln())).exp()
    } else {
        a + w * (b - a)
    }
}

/// ∫_t^{times.last} f(s − t, Λ(s)) ds for Λ given at `t` (`start`) and at the later `times`.
///
/// The first interval, where the kernel behaves like √(s − t), is integrated by
/// Gauss–Legendre after s = t + v², with Λ interpolated between its end values;
/// the remaining intervals use the trapezoid rule on the nodes.
fn integrate_switch(times: &[f64], values: &[f64], t: f64, start: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
    let Some(&s1) = times.first() else {
        return 0.0;
    };
    let h = s1 - t;
    let vmax = h.sqrt();
    let mut acc = 0.0;
    for (x, w) in GL4 {
        let v = x * vmax;
        let u = v * v;
        acc += w * vmax * 2.0 * v * f(u, interp_level(start, values[0], u / h));
    }
    let mut prev = f(h, values[0]);
    for j in 1..times.len() {
        let fj = f(times[j] - t, values[j]);
        acc += 0.5 * (times[j] - times[j - 1]) * (prev + fj);
        prev = fj;
    }
    acc
}

struct Recursion<'a> {
    model: &'a Model,
    k: Kernels,
    nodes: Vec<f64>,
    /// Index of T − T1 in `nodes`.
    anchor: usize,
    l0: Vec<f64>,
    l1: Vec<f64>,
}

impl Recursion<'_> {
    fn switch0(&self, i: usize, lambda: f64, own: f64) -> f64 {
        if i >= self.anchor {
            return 0.0;
        }
        let r = i + 1..self.anchor + 1;
        integrate_switch(&self.nodes[r.clone()], &self.l0[r], self.nodes[i], own, |u, b| self.k.switch0(u, lambda, b))
    }

    fn switch1(&self, i: usize, lambda: f64, own: f64) -> f64 {
        let r = i + 1..self.nodes.len();
        integrate_switch(&self.nodes[r.clone()], &self.l1[r], self.nodes[i], own, |u, b| self.k.switch1(u, lambda, b))
    }

    /// (Q₁ − Q₀)(t_i, λ) with the given node-i boundary levels.
    fn difference(&self, i: usize, lambda: f64, own0: f64, own1: f64) -> f64 {
        let p = &self.model.p;
        let tau = self.model.horizon() - self.nodes[i];
        // G₁ − G₀ = (ε₁−ε₀)a_r λ − (L₁−L₀)a_β, written around ζ₀λ to avoid cancellation.
        let base = self.model.up_switch_gain_rate(tau) * lambda + p.zeta0 * lambda - self.k.dl * self.model.annuity_beta(tau);
        base + self.switch1(i, lambda, own1) - self.switch0(i, lambda, own0)
    }

    /// Λ₀ equation residual Q₁ − Q₀ − ζ₀Λ, with the ζ₀Λ term cancelled analytically.
    fn f0(&self, i: usize, lambda: f64) -> f64 {
        let tau = self.model.horizon() - self.nodes[i];
        let base = self.model.up_switch_gain_rate(tau) * lambda - self.k.dl * self.model.annuity_beta(tau);
        base + self.switch1(i, lambda, self.l1[i]) - self.switch0(i, lambda, lambda)
    }

    fn f1(&self, i: usize, lambda: f64) -> f64 {
        self.difference(i, lambda, self.l0[i], lambda) + self.model.p.zeta1 * lambda
    }
}

enum RootOutcome {
    Root { value: f64, iterations: usize, residual: f64, edge: bool },
    Capped,
}

/// Safeguarded Newton in y = ln λ on a sign-changing bracket [lo, hi]
/// (f(lo) < 0 < f(hi)), with a forward-difference slope and bisection fallback.
fn solve_bracketed(
    f: &dyn Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    guess: f64,
    scale: &dyn Fn(f64) -> f64,
    tol: f64,
    max_iter: usize,
) -> Option<(f64, usize, f64)> {
    let mut y = guess.clamp(lo, hi);
    let mut fy = f(y.exp());
    for it in 1..=max_iter {
        if fy.abs() <= tol * scale(y.exp()) {
            return Some((y.exp(), it, fy.abs() / scale(y.exp())));
        }
        if fy < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let hstep = 1e-7 * (1.0 + y.abs());
        let slope = (f((y + hstep).exp()) - fy) / hstep;
        let mut next = y - fy / slope;
        if !(next.is_finite() && next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - y).abs() <= 1e-15 * (1.0 + y.abs()) || hi - lo <= 1e-15 * (1.0 + y.abs()) {
            let v = f(next.exp());
            return Some((next.exp(), it, v.abs() / scale(next.exp())));
        }
        y = next;
        fy = f(y.exp());
    }
    None
}

/// Solves the coupled boundary equations backward from T.
pub fn solve_boundaries_ie(model: &Model, config: &IeSolverConfig) -> Result<IeBoundaries> {
    config.check(model)?;
    let nodes = config.nodes(model);
    let n = nodes.len();
    let anchor_t = model.last_up_switch();
    let anchor = nodes
        .iter()
        .position(|&s| s == anchor_t)
        .ok_or_else(|| Error::numerical("solve_boundaries_ie", "node grid lost T - T1", f64::NAN))?;
    let mut rec = Recursion {
        model,
        k: Kernels::new(model),
        nodes,
        anchor,
        l0: vec![f64::INFINITY; n],
        l1: vec![0.0; n],
    };
    let mut flags0 = vec![NodeFlag::Limit; n];
    let mut flags1 = vec![NodeFlag::Limit; n];
    let (e_x1, e_x2) = (model.d.x1.exp(), model.d.x2.exp());
    let zeta1 = model.p.zeta1;
    let mut iterations = 0;
    let mut worst = 0.0f64;
    let mut guess0 = 2.0 * e_x2;
    let mut guess1 = 0.5 * e_x1;

    for i in (0..n - 1).rev() {
        if i < anchor {
            match solve_lambda0(&rec, i, guess0, config, e_x2)? {
                RootOutcome::Root { value, iterations: it, residual, edge } => {
                    rec.l0[i] = value;
                    flags0[i] = if edge { NodeFlag::Edge } else { NodeFlag::Solved };
                    guess0 = value;
                    iterations += it;
                    worst = worst.max(residual);
                }
                RootOutcome::Capped => flags0[i] = NodeFlag::Capped,
            }
        }
        match solve_lambda1(&rec, i, guess1, config, zeta1, e_x1)? {
            RootOutcome::Root { value, iterations: it, residual, edge } => {
                rec.l1[i] = value;
                flags1[i] = if edge { NodeFlag::Edge } else { NodeFlag::Solved };
                guess1 = value;
                iterations += it;
                worst = worst.max(residual);
            }
            RootOutcome::Capped => unreachable!("the lower boundary search has no cap"),
        }
    }

    Ok(IeBoundaries {
        lambda0: BoundaryCurve::new(rec.nodes.clone(), rec.l0, flags0)?,
        lambda1: BoundaryCurve::new(rec.nodes, rec.l1, flags1)?,
        newton_iterations: iterations,
        worst_residual: worst,
    })
}

/// Growth factor of the bracket search from the previous node's root.
const SEARCH_STEP: f64 = 1.25;

fn solve_lambda0(rec: &Recursion, i: usize, guess: f64, cfg: &IeSolverConfig, floor: f64) -> Result<RootOutcome> {
    let f = |l: f64| rec.f0(i, l);
    let t = rec.nodes[i];
    let tau = rec.model.horizon() - t;
    let (gain, cost) = (rec.model.up_switch_gain_rate(tau).abs(), rec.k.dl * rec.model.annuity_beta(tau));
    let scale = |l: f64| cost + gain * l;
    let f_floor = f(floor);
    if f_floor >= 0.0 {
        return Ok(RootOutcome::Root {
            value: floor,
            iterations: 1,
            residual: f_floor.abs() / scale(floor),
            edge: true,
        });
    }
    // The residual vanishes identically above Λ₀ up to quadrature noise, so the
    // search walks up from the previous root in small steps to the first sign change.
    let (mut lo, mut hi) = (floor, guess.max(floor * 1.01));
    while f(hi) < 0.0 {
        lo = hi;
        if hi >= cfg.lambda_cap {
            return Ok(RootOutcome::Capped);
        }
        hi = (hi * SEARCH_STEP).min(cfg.lambda_cap);
    }
    let start = if guess > lo && guess < hi { guess } else { (lo * hi).sqrt() };
    match solve_bracketed(&f, lo.ln(), hi.ln(), start.ln(), &scale, cfg.newton_tol, cfg.max_newton_iters) {
        Some((value, it, residual)) => Ok(RootOutcome::Root { value, iterations: it, residual, edge: false }),
        None => Err(Error::numerical(
            "solve_boundaries_ie",
            format!("Lambda0 Newton did not converge at node t = {t}"),
            f64::NAN,
        )),
    }
}

fn solve_lambda1(rec: &Recursion, i: usize, guess: f64, cfg: &IeSolverConfig, zeta1: f64, ceil: f64) -> Result<RootOutcome> {
    let f = |l: f64| rec.f1(i, l);
    let t = rec.nodes[i];
    let tau = rec.model.horizon() - t;
    let p = &rec.model.p;
    let (gain, cost) = (zeta1 + (p.eps1 - p.eps0) * rec.model.annuity_r(tau), rec.k.dl * rec.model.annuity_beta(tau));
    let scale = |l: f64| cost + gain * l;
    let f_ceil = f(ceil);
    if f_ceil <= 0.0 {
        return Ok(RootOutcome::Root {
            value: ceil,
            iterations: 1,
            residual: f_ceil.abs() / scale(ceil),
            edge: true,
        });
    }
    // Mirror of the Λ₀ search: the residual vanishes below Λ₁.
    let (mut lo, mut hi) = (guess.min(ceil * 0.99), ceil);
    while f(lo) > 0.0 {
        hi = lo;
        lo /= SEARCH_STEP;
        if lo < 1e-300 {
            return Err(Error::numerical(
                "solve_boundaries_ie",
                format!("Lambda1 could not be bracketed in (0, e^X1] at node t = {t}"),
                f(lo),
            ));
        }
    }
    let start = if guess > lo && guess < hi { guess } else { (lo * hi).sqrt() };
    match solve_bracketed(&f, lo.ln(), hi.ln(), start.ln(), &scale, cfg.newton_tol, cfg.max_newton_iters) {
        Some((value, it, residual)) => Ok(RootOutcome::Root { value, iterations: it, residual, edge: false }),
        None => Err(Error::numerical(
            "solve_boundaries_ie",
            format!("Lambda1 Newton did not converge at node t = {t}"),
            f64::NAN,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_plus_reference() {
        let m = Model::reference();
        let d = d_pm(&m, Sign::Plus, 1.0, 1.0).unwrap();
        assert!((d - 0.183_333_333_333_333_35).abs() < 1e-15);
        assert!(d_pm(&m, Sign::Plus, 0.0, 1.0).is_err());
    }

    #[test]
    fn step_limits() {
        assert_eq!(step_limit(2.0, 1.0), 1.0);
        assert_eq!(step_limit(0.5, 1.0), 0.0);
        assert_eq!(step_limit(1.0, 1.0), 0.5);
    }

    #[test]
    fn node_grid_contains_anchors() {
        let m = Model::reference();
        let cfg = IeSolverConfig::default();
        let nodes = cfg.nodes(&m);
        assert!(nodes.contains(&m.last_up_switch()));
        assert_eq!(*nodes.last().unwrap(), 30.0);
        assert_eq!(nodes[0], 0.0);
        assert!(nodes.windows(2).all(|w| w[1] > w[0]));
        let below_anchor = nodes.iter().rev().find(|&&s| s < m.last_up_switch()).unwrap();
        assert!((m.last_up_switch() - below_anchor - cfg.endpoint_offset).abs() < 1e-14);
    }

    #[test]
    fn config_checks() {
        let m = Model::reference();
        let cfg = IeSolverConfig { nt_ie: 10, ..Default::default() };
        assert!(cfg.check(&m).is_err());
        let cfg = IeSolverConfig { endpoint_offset: 1.0, ..Default::default() };
        assert!(cfg.check(&m).is_err());
        let cfg = IeSolverConfig { lambda_cap: 10.0, ..Default::default() };
        assert!(cfg.check(&m).is_err());
    }
}
