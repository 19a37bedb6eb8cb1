//! Primal-facing objects built from the free boundaries.
//!
//! With Q̂ⱼ = Q_R + Qⱼ the total dual value, the optimal wealth and risky
//! position at dual level λ are 𝒲ⱼ = −∂λQ̂ⱼ and Πⱼ = (θ/σ)λ∂λλQ̂ⱼ.
//! [`StrategySurface`] evaluates both from the integral representations;
//! [`GridPolicy`] reads them off recovered PDE surfaces for bulk use.

use serde::Serialize;

use crate::curve::BoundaryCurve;
use crate::error::{Error, Result};
use crate::integral::{interp_level, IntegralRep, Kernels, GL4};
use crate::model::{Job, Model};
use crate::normal::{norm_cdf, norm_pdf};
use crate::obstacle::QSurfaces;

/// Largest v-panel width for the s = t + v² quadrature.
const MAX_DV: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    #[serde(rename = "WR0")]
    Wait0,
    #[serde(rename = "SR0")]
    Switch0,
    #[serde(rename = "WR1")]
    Wait1,
    #[serde(rename = "SR1")]
    Switch1,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::Wait0 => "WR0",
            Region::Switch0 => "SR0",
            Region::Wait1 => "WR1",
            Region::Switch1 => "SR1",
        }
    }

    fn of(j: Job, switch: bool) -> Region {
        match (j, switch) {
            (Job::D0, false) => Region::Wait0,
            (Job::D0, true) => Region::Switch0,
            (Job::D1, false) => Region::Wait1,
            (Job::D1, true) => Region::Switch1,
        }
    }
}

/// A wealth-coordinate boundary sampled at boundary-curve nodes.
#[derive(Clone, Debug, Serialize)]
pub struct WealthCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolicyDecision {
    /// Dual level λ* matching the wealth.
    pub lambda: f64,
    pub consumption: f64,
    /// Dollar amount held in the risky asset.
    pub risky: f64,
    pub switch_now: bool,
    /// Wealth after paying the switching cost, when switching.
    pub post_switch_wealth: Option<f64>,
}

/// ∂λ of the switching part and λ∂λλ of it.
#[derive(Clone, Copy, Debug, Default)]
struct SwitchDerivs {
    d1: f64,
    d2: f64,
}

/// Strategy surfaces from the integral representations of Q₀, Q₁.
#[derive(Clone, Debug)]
pub struct StrategySurface {
    model: Model,
    lambda0: BoundaryCurve,
    lambda1: BoundaryCurve,
    k: Kernels,
}

impl StrategySurface {
    pub fn new(model: &Model, lambda0: BoundaryCurve, lambda1: BoundaryCurve) -> Result<Self> {
        IntegralRep::new(model, &lambda0, &lambda1)?;
        Ok(StrategySurface {
            model: *model,
            lambda0,
            lambda1,
            k: Kernels::new(model),
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn lambda0(&self) -> &BoundaryCurve {
        &self.lambda0
    }

    pub fn lambda1(&self) -> &BoundaryCurve {
        &self.lambda1
    }

    fn check(&self, t: f64, lambda: f64) -> Result<()> {
        if !(t >= 0.0 && t <= self.model.horizon()) {
            return Err(Error::Input(format!("time {t} outside [0, T]")));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!("dual level must be positive and finite, got {lambda}")));
        }
        Ok(())
    }

    /// Q̂ⱼ(t,λ) = Q_R + Qⱼ.
    pub fn q_hat(&self, j: Job, t: f64, lambda: f64) -> Result<f64> {
        self.check(t, lambda)?;
        let rep = IntegralRep::new(&self.model, &self.lambda0, &self.lambda1)?;
        Ok(self.model.q_r(t, lambda) + rep.q(j, t, lambda)?)
    }

    /// Job whose representation is valid at (t, λ) for the surface of job j,
    /// with the contact shift: 𝒲₀ = 𝒲₁ + ζ₀ above Λ₀, 𝒲₁ = 𝒲₀ + ζ₁ below Λ₁.
    fn valid_side(&self, j: Job, t: f64, lambda: f64) -> (Job, f64) {
        match j {
            Job::D0 if lambda >= self.lambda0.eval_in_range(t) => (Job::D1, self.model.p.zeta0),
            Job::D1 if lambda <= self.lambda1.eval_in_range(t) => (Job::D0, self.model.p.zeta1),
            _ => (j, 0.0),
        }
    }

    /// 𝒲ⱼ(t,λ) = −∂λQ̂ⱼ.
    pub fn wealth(&self, j: Job, t: f64, lambda: f64) -> Result<f64> {
        self.check(t, lambda)?;
        let (side, shift) = self.valid_side(j, t, lambda);
        Ok(self.wealth_valid(side, t, lambda) + shift)
    }

    /// Πⱼ(t,λ) = (θ/σ)λ∂λλQ̂ⱼ, the dollar amount in the risky asset.
    pub fn investment(&self, j: Job, t: f64, lambda: f64) -> Result<f64> {
        self.check(t, lambda)?;
        let (side, _) = self.valid_side(j, t, lambda);
        Ok(self.investment_valid(side, t, lambda))
    }

    fn wealth_valid(&self, j: Job, t: f64, lambda: f64) -> f64 {
        let tau = self.model.horizon() - t;
        -self.model.q_r_dl(t, lambda) - self.model.p.eps(j) * self.model.annuity_r(tau) - self.switch_derivs(j, t, lambda).d1
    }

    fn investment_valid(&self, j: Job, t: f64, lambda: f64) -> f64 {
        let p = &self.model.p;
        (self.model.d.theta / p.sigma) * (self.model.q_r_lambda_dll(t, lambda) + self.switch_derivs(j, t, lambda).d2)
    }

    /// Derivatives of the switching integral of job j, evaluated from the
    /// waiting side of its boundary.
    fn wealth_and_investment_valid(&self, j: Job, t: f64, lambda: f64) -> (f64, f64) {
        let m = &self.model;
        let d = self.switch_derivs(j, t, lambda);
        let w = -m.q_r_dl(t, lambda) - m.p.eps(j) * m.annuity_r(m.horizon() - t) - d.d1;
        let pi = (m.d.theta / m.p.sigma) * (m.q_r_lambda_dll(t, lambda) + d.d2);
        (w, pi)
    }

    fn switch_derivs(&self, j: Job, t: f64, lambda: f64) -> SwitchDerivs {
        let k = &self.k;
        let (curve, end, a) = match j {
            Job::D0 => (&self.lambda0, self.model.last_up_switch(), k.a0),
            Job::D1 => (&self.lambda1, self.model.horizon(), k.a1),
        };
        if t >= end {
            return SwitchDerivs::default();
        }
        let th = k.theta;
        let kernel = |u: f64, v: f64, bound: f64| -> [f64; 2] {
            if bound.is_infinite() || bound <= 0.0 {
                return [0.0, 0.0];
            }
            let lr = (lambda / bound).ln();
            let dp = (lr + k.drift_plus * u) / (th * v);
            let dm = dp - th * v;
            let disc = (-k.r * u).exp();
            let dens = disc * norm_pdf(dp);
            let ratio = k.dl / bound;
            let level = match j {
                Job::D0 => a * disc * norm_cdf(dp),
                Job::D1 => -a * disc * norm_cdf(-dp),
            };
            [level + dens * (a - ratio) / (th * v), dens * (ratio * dp - a * dm) / (th * th * u)]
        };
        let start = curve.eval_in_range(t);
        let lr0 = (lambda / start).ln();
        let [d1, mut d2] = v_integral(curve, t, end, lr0.abs() / th, kernel);
        // On the boundary itself the kernel mass concentrating at u → 0 is lost;
        // add the waiting-side limit of it.
        if start.is_finite() && start > 0.0 && lr0.abs() <= 1e-13 {
            let ratio = k.dl / start;
            d2 += match j {
                Job::D0 => (a - ratio) / (th * th),
                Job::D1 => (ratio - a) / (th * th),
            };
        }
        SwitchDerivs { d1, d2 }
    }

    /// Lowest admissible wealth at t in job j; wealth must lie strictly above it.
    pub fn wealth_floor(&self, j: Job, t: f64) -> f64 {
        self.model.wealth_floor(t, j)
    }

    /// λ* with 𝒲ⱼ(t,λ*) = w, by a bracketed Newton search in ln λ.
    pub fn lambda_from_wealth(&self, j: Job, t: f64, w: f64) -> Result<f64> {
        if !(t >= 0.0 && t <= self.model.horizon()) {
            return Err(Error::Input(format!("time {t} outside [0, T]")));
        }
        let floor = self.wealth_floor(j, t);
        if !(w > floor) || !w.is_finite() {
            return Err(Error::Domain(format!(
                "wealth {w} is not above the admissible bound {floor} for job {} at t = {t}",
                j.index()
            )));
        }
        let tol = 1e-9 * (1.0 + w.abs());
        let f = |y: f64| self.wealth(j, t, y.exp()).map(|v| v - w);
        let (mut lo, mut hi) = (1e-8f64.ln(), 1e8f64.ln());
        let mut iterations = 0usize;
        let mut f_lo = f(lo)?;
        while f_lo < 0.0 {
            hi = lo;
            lo -= std::f64::consts::LN_10;
            f_lo = f(lo)?;
            iterations += 1;
            if iterations >= MAX_INVERSION_ITERS {
                return Err(Error::numerical("lambda_from_wealth", "could not bracket from below", f_lo));
            }
        }
        let mut f_hi = f(hi)?;
        while f_hi > 0.0 {
            lo = hi;
            hi += std::f64::consts::LN_10;
            f_hi = f(hi)?;
            iterations += 1;
            if iterations >= MAX_INVERSION_ITERS {
                return Err(Error::numerical("lambda_from_wealth", "could not bracket from above", f_hi));
            }
        }
        if f_lo.abs() <= tol {
            return Ok(lo.exp());
        }
        if f_hi.abs() <= tol {
            return Ok(hi.exp());
        }
        // Safeguarded Newton in ln λ; d𝒲/d ln λ = −(σ/θ)Π.
        let slope_scale = -self.model.p.sigma / self.model.d.theta;
        let mut x = 0.5 * (lo + hi);
        while iterations < MAX_INVERSION_ITERS {
            let lambda = x.exp();
            let (side, shift) = self.valid_side(j, t, lambda);
            let (wv, pi) = self.wealth_and_investment_valid(side, t, lambda);
            let fx = wv + shift - w;
            if fx.abs() <= tol || hi - lo <= 1e-15 * (1.0 + x.abs()) {
                return Ok(lambda);
            }
            if fx > 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let step = x - fx / (slope_scale * pi);
            x = if step > lo && step < hi && step.is_finite() { step } else { 0.5 * (lo + hi) };
            iterations += 1;
        }
        Err(Error::numerical(
            "lambda_from_wealth",
            format!("root search hit the iteration cap at t = {t}, w = {w}"),
            f(x)?.abs(),
        ))
    }

    /// w₀(t) = 𝒲₀(t,Λ₀(t)) for t < T−T1; `None` where Λ₀ is absent.
    pub fn w0_at(&self, t: f64) -> Result<Option<f64>> {
        if t >= self.model.last_up_switch() {
            return Ok(None);
        }
        let l0 = self.lambda0.value_at(t)?;
        if !l0.is_finite() {
            return Ok(None);
        }
        Ok(Some(self.wealth_valid(Job::D0, t, l0)))
    }

    /// w₁(t) = 𝒲₁(t,Λ₁(t)) for t < T; `None` where Λ₁ vanishes.
    pub fn w1_at(&self, t: f64) -> Result<Option<f64>> {
        let l1 = self.lambda1.value_at(t)?;
        if !(l1 > 0.0) || t >= self.model.horizon() {
            return Ok(None);
        }
        Ok(Some(self.wealth_valid(Job::D1, t, l1)))
    }

    /// w₀, w₁ at the boundary-curve nodes where they are defined.
    pub fn wealth_boundaries(&self) -> Result<(WealthCurve, WealthCurve)> {
        let mut w0 = WealthCurve { times: vec![], values: vec![] };
        let mut w1 = WealthCurve { times: vec![], values: vec![] };
        for &t in &self.lambda0.times {
            if let Some(v) = self.w0_at(t)? {
                w0.times.push(t);
                w0.values.push(v);
            }
        }
        for &t in &self.lambda1.times {
            if let Some(v) = self.w1_at(t)? {
                w1.times.push(t);
                w1.values.push(v);
            }
        }
        Ok((w0, w1))
    }

    pub fn region_dual(&self, j: Job, t: f64, lambda: f64) -> Result<Region> {
        self.check(t, lambda)?;
        let switch = match j {
            Job::D0 => lambda >= self.lambda0.value_at(t)?,
            Job::D1 => lambda <= self.lambda1.value_at(t)?,
        };
        Ok(Region::of(j, switch))
    }

    pub fn region_wealth(&self, j: Job, t: f64, w: f64) -> Result<Region> {
        let switch = match j {
            Job::D0 => self.w0_at(t)?.is_some_and(|b| w <= b),
            Job::D1 => self.w1_at(t)?.is_some_and(|b| w >= b),
        };
        Ok(Region::of(j, switch))
    }

    /// Optimal consumption, risky position and switching decision at (t, w) in job j.
    pub fn feedback_policy(&self, j: Job, t: f64, w: f64) -> Result<PolicyDecision> {
        let lambda = self.lambda_from_wealth(j, t, w)?;
        let switch_now = self.region_wealth(j, t, w)? != Region::of(j, false);
        Ok(PolicyDecision {
            lambda,
            consumption: self.model.inverse_marginal_1(lambda)?,
            risky: self.investment(j, t, lambda)?,
            switch_now,
            post_switch_wealth: switch_now.then(|| w - self.model.p.zeta(j)),
        })
    }
}

const MAX_INVERSION_ITERS: usize = 200;

/// ∫_t^end f(u, √u, Λ(s)) ds after s = t + v², on panels aligned with the curve
/// nodes, at most [`MAX_DV`] wide in v, and refined geometrically around
/// `v_feature` where the kernels concentrate when λ is close to Λ(t).
fn v_integral(curve: &BoundaryCurve, t: f64, end: f64, v_feature: f64, f: impl Fn(f64, f64, f64) -> [f64; 2]) -> [f64; 2] {
    let eps = 1e-13 * end.max(1.0);
    let first = curve.times.partition_point(|&s| s <= t + eps);
    let last = curve.times.partition_point(|&s| s <= end + eps);
    let mut acc = [0.0, 0.0];
    let (mut s_prev, mut l_prev) = (t, curve.eval_in_range(t));
    let panel = |va: f64, vb: f64, s_a: f64, s_b: f64, la: f64, lb: f64, acc: &mut [f64; 2]| {
        let width = vb - va;
        for (x, w) in GL4 {
            let v = va + x * width;
            let u = v * v;
            let level = interp_level(la, lb, ((t + u - s_a) / (s_b - s_a)).clamp(0.0, 1.0));
            let val = f(u, v, level);
            acc[0] += w * width * 2.0 * v * val[0];
            acc[1] += w * width * 2.0 * v * val[1];
        }
    };
    for idx in first..last {
        let (s, l) = (curve.times[idx], curve.values[idx]);
        let (va, vb) = ((s_prev - t).sqrt(), (s - t).sqrt());
        let mut cuts = vec![va];
        if idx == first && v_feature > 0.0 {
            for m in [1.0 / 64.0, 1.0 / 16.0, 0.25, 1.0, 4.0, 16.0] {
                let c = v_feature * m;
                if c > va && c < vb {
                    cuts.push(c);
                }
            }
        }
        cuts.push(vb);
        for w in cuts.windows(2) {
            let n = ((w[1] - w[0]) / MAX_DV).ceil().max(1.0) as usize;
            let h = (w[1] - w[0]) / n as f64;
            for m in 0..n {
                panel(w[0] + m as f64 * h, w[0] + (m + 1) as f64 * h, s_prev, s, l_prev, l, &mut acc);
            }
        }
        s_prev = s;
        l_prev = l;
    }
    acc
}

/// Wealth and risky position read off recovered PDE surfaces at the grid nodes,
/// with the inversion λ ↦ 𝒲 done by binary search along a time slice.
#[derive(Clone, Copy)]
pub struct GridPolicy<'a> {
    model: &'a Model,
    surf: &'a QSurfaces,
}

impl<'a> GridPolicy<'a> {
    pub fn new(model: &'a Model, surf: &'a QSurfaces) -> Result<Self> {
        surf.grid.check_for(model)?;
        Ok(GridPolicy { model, surf })
    }

    fn slice(&self, t: f64) -> Result<(usize, f64)> {
        let g = &self.surf.grid;
        let tau = g.horizon - t;
        if !(-1e-9..=g.horizon + 1e-9).contains(&tau) {
            return Err(Error::Input(format!("time {t} outside [0, T]")));
        }
        let kf = (tau / g.dt()).clamp(0.0, g.nt as f64);
        let k = (kf.floor() as usize).min(g.nt - 1);
        let w = kf - k as f64;
        // Snap to a slice within rounding.
        if w < 1e-9 {
            return Ok((k, 0.0));
        }
        if w > 1.0 - 1e-9 {
            return Ok((k + 1, 0.0));
        }
        Ok((k, w))
    }

    fn t_of(&self, k: usize) -> f64 {
        self.surf.grid.horizon - self.surf.grid.tau(k)
    }

    fn wealth_node(&self, j: Job, k: usize, i: usize) -> f64 {
        let g = &self.surf.grid;
        let s = &self.surf.q[j.index()][k];
        let x = g.x(i);
        let dq = (s[i + 1] - s[i - 1]) / (2.0 * g.dx());
        -self.model.q_r_dl(self.t_of(k), x.exp()) - (-x).exp() * dq
    }

    fn risky_node(&self, j: Job, k: usize, i: usize) -> f64 {
        let g = &self.surf.grid;
        let s = &self.surf.q[j.index()][k];
        let x = g.x(i);
        let dx = g.dx();
        let d1 = (s[i + 1] - s[i - 1]) / (2.0 * dx);
        let d2 = (s[i + 1] - 2.0 * s[i] + s[i - 1]) / (dx * dx);
        let p = &self.model.p;
        (self.model.d.theta / p.sigma) * (self.model.q_r_lambda_dll(self.t_of(k), x.exp()) + (-x).exp() * (d2 - d1))
    }

    /// ln λ on slice k where the node wealth crosses w.
    fn invert_slice(&self, j: Job, k: usize, w: f64) -> Result<f64> {
        let g = &self.surf.grid;
        let (mut lo, mut hi) = (1, g.nx - 2);
        let (w_lo, w_hi) = (self.wealth_node(j, k, lo), self.wealth_node(j, k, hi));
        if !(w <= w_lo && w >= w_hi) {
            return Err(Error::Domain(format!(
                "wealth {w} outside the grid range [{w_hi}, {w_lo}] at t = {}",
                self.t_of(k)
            )));
        }
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.wealth_node(j, k, mid) >= w {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (a, b) = (self.wealth_node(j, k, lo), self.wealth_node(j, k, hi));
        let frac = if a > b { ((a - w) / (a - b)).clamp(0.0, 1.0) } else { 0.5 };
        Ok(g.x(lo) + frac * g.dx())
    }

    /// λ with 𝒲ⱼ(t,λ) = w; ln λ interpolated linearly between time slices.
    pub fn lambda_from_wealth(&self, j: Job, t: f64, w: f64) -> Result<f64> {
        let (k, wk) = self.slice(t)?;
        let y0 = self.invert_slice(j, k, w)?;
        if wk == 0.0 {
            return Ok(y0.exp());
        }
        let y1 = self.invert_slice(j, k + 1, w)?;
        Ok((y0 + wk * (y1 - y0)).exp())
    }

    fn bilinear(&self, t: f64, lambda: f64, f: impl Fn(usize, usize) -> f64) -> Result<f64> {
        let g = &self.surf.grid;
        let (k, wk) = self.slice(t)?;
        let x = lambda.ln();
        if !(x >= g.x(1) && x <= g.x(g.nx - 2)) {
            return Err(Error::Domain(format!("dual level {lambda} outside the grid")));
        }
        let xf = (x - g.x(0)) / g.dx();
        let i = (xf.floor() as usize).clamp(1, g.nx - 3);
        let wi = xf - i as f64;
        let row = |k: usize| f(k, i) * (1.0 - wi) + f(k, i + 1) * wi;
        Ok(if wk == 0.0 { row(k) } else { row(k) * (1.0 - wk) + row(k + 1) * wk })
    }

    pub fn wealth(&self, j: Job, t: f64, lambda: f64) -> Result<f64> {
        self.bilinear(t, lambda, |k, i| self.wealth_node(j, k, i))
    }

    pub fn investment(&self, j: Job, t: f64, lambda: f64) -> Result<f64> {
        self.bilinear(t, lambda, |k, i| self.risky_node(j, k, i))
    }

    /// Q̂ⱼ(t,λ) from the surface.
    pub fn q_hat(&self, j: Job, t: f64, lambda: f64) -> Result<f64> {
        Ok(self.model.q_r(t, lambda) + self.surf.value(j, t, lambda)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::NodeFlag;

    /// Boundaries so far out that no switching term contributes.
    fn far_surface(m: &Model) -> StrategySurface {
        let times = vec![0.0, m.horizon()];
        let l0 = BoundaryCurve::new(times.clone(), vec![f64::INFINITY; 2], vec![NodeFlag::Limit; 2]).unwrap();
        let l1 = BoundaryCurve::new(times, vec![0.0; 2], vec![NodeFlag::Limit; 2]).unwrap();
        StrategySurface::new(m, l0, l1).unwrap()
    }

    #[test]
    fn merton_baseline_without_switching() {
        let m = Model::reference();
        let s = far_surface(&m);
        for &(t, lam) in &[(0.0f64, 1.0f64), (12.0, 0.3), (29.0, 4.0)] {
            let a = m.merton_coef(t);
            let pi = (m.d.theta / m.p.sigma) * a * lam.powf(-1.0 / m.p.gamma) / m.p.gamma;
            assert!((s.investment(Job::D1, t, lam).unwrap() - pi).abs() < 1e-13 * pi);
            let w = a * lam.powf(-1.0 / m.p.gamma) - m.p.eps1 * m.annuity_r(m.horizon() - t);
            assert!((s.wealth(Job::D1, t, lam).unwrap() - w).abs() < 1e-12 * (1.0 + w.abs()));
        }
    }

    #[test]
    fn regions_and_policy_basics() {
        let m = Model::reference();
        let s = far_surface(&m);
        assert_eq!(s.region_dual(Job::D0, 1.0, 100.0).unwrap(), Region::Wait0);
        assert_eq!(s.region_dual(Job::D1, 1.0, 1e-6).unwrap(), Region::Wait1);
        let w = s.wealth(Job::D1, 3.0, 1.0).unwrap();
        let d = s.feedback_policy(Job::D1, 3.0, w).unwrap();
        assert!((d.lambda - 1.0).abs() < 1e-8);
        assert!((d.consumption - 1.0).abs() < 1e-8);
        assert!(!d.switch_now && d.post_switch_wealth.is_none());
    }

    #[test]
    fn inversion_rejects_floor() {
        let m = Model::reference();
        let s = far_surface(&m);
        let floor = s.wealth_floor(Job::D1, 0.0);
        assert!((floor + 25.918_177_931_828_21).abs() < 1e-10);
        match s.lambda_from_wealth(Job::D1, 0.0, floor) {
            Err(Error::Domain(msg)) => assert!(msg.contains("-25.918")),
            other => panic!("expected a domain error, got {other:?}"),
        }
    }

    #[test]
    fn v_integral_of_inverse_sqrt() {
        // ∫_0^4 ds/√s = 4 over a curve with nodes at 0, 1, 4.
        let c = BoundaryCurve::new(vec![0.0, 1.0, 4.0], vec![1.0; 3], vec![NodeFlag::Solved; 3]).unwrap();
        let [a, b] = v_integral(&c, 0.0, 4.0, 0.0, |_, v, _| [1.0 / v, v * v]);
        assert!((a - 4.0).abs() < 1e-13);
        assert!((b - 8.0).abs() < 1e-12);
    }
}
