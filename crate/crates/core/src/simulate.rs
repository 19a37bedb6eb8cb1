//! Monte Carlo verification of the switching strategy.
//!
//! The dual process 𝒴ₜ = λe^{βt}ℋₜ is stepped exactly in law on a uniform time
//! grid. Path k draws its normals from a ChaCha8 stream selected by k, so every
//! path is reproducible on its own and results do not depend on the thread
//! count. Paths are regenerated where needed instead of being stored.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::BoundaryCurve;
use crate::error::{Error, Result};
use crate::model::{Job, Model};
use crate::strategy::GridPolicy;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_paths: usize,
    pub n_steps: usize,
    pub seed: u64,
    pub lambda0: f64,
    pub job0: Job,
    /// Pairs path 2m+1 with path 2m by negating its normals.
    pub antithetic: bool,
    /// Start time of the simulation; the grid spans [t_start, T].
    #[serde(default)]
    pub t_start: f64,
}

impl SimConfig {
    /// Defaults with λ0 = √(e^{X1}e^{X2}), the geometric mid-point of the thresholds.
    pub fn new(model: &Model, n_paths: usize, n_steps: usize, seed: u64) -> Self {
        SimConfig {
            n_paths,
            n_steps,
            seed,
            lambda0: (0.5 * (model.d.x1 + model.d.x2)).exp(),
            job0: Job::D0,
            antithetic: false,
            t_start: 0.0,
        }
    }

    pub fn check(&self, model: &Model) -> Result<()> {
        if self.n_paths < 1 {
            return Err(Error::Input("n_paths must be at least 1".into()));
        }
        if self.n_steps < 10 {
            return Err(Error::Input(format!("n_steps must be at least 10, got {}", self.n_steps)));
        }
        if self.antithetic && !self.n_paths.is_multiple_of(2) {
            return Err(Error::Input("antithetic sampling needs an even n_paths".into()));
        }
        if !(self.lambda0 > 0.0 && self.lambda0.is_finite()) {
            return Err(Error::Input(format!("lambda0 must be positive, got {}", self.lambda0)));
        }
        if !(self.t_start >= 0.0 && self.t_start < model.horizon()) {
            return Err(Error::Input(format!("t_start must lie in [0, T), got {}", self.t_start)));
        }
        Ok(())
    }

    pub fn dt(&self, model: &Model) -> f64 {
        (model.horizon() - self.t_start) / self.n_steps as f64
    }

    pub fn time(&self, model: &Model, i: usize) -> f64 {
        self.t_start + i as f64 * self.dt(model)
    }
}

/// Seeded source of dual paths.
#[derive(Clone, Copy, Debug)]
pub struct DualPaths {
    pub config: SimConfig,
    drift: f64,
    vol: f64,
}

/// Builds the path source; paths are generated on demand with [`DualPaths::normals`]
/// and [`DualPaths::path`].
pub fn simulate_dual(config: &SimConfig, model: &Model) -> Result<DualPaths> {
    config.check(model)?;
    let dt = config.dt(model);
    let th = model.d.theta;
    Ok(DualPaths {
        config: *config,
        drift: (model.p.beta - model.p.r - 0.5 * th * th) * dt,
        vol: th * dt.sqrt(),
    })
}

impl DualPaths {
    /// Standard normals driving path k (one per step).
    pub fn normals(&self, k: usize, out: &mut Vec<f64>) {
        let c = &self.config;
        let (stream, sign) = if c.antithetic { (k / 2, if k.is_multiple_of(2) { 1.0 } else { -1.0 }) } else { (k, 1.0) };
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        rng.set_stream(stream as u64);
        out.clear();
        out.extend((0..c.n_steps).map(|_| sign * rng.sample::<f64, _>(StandardNormal)));
    }

    /// 𝒴 at the step times for path k started at λ, driven by `normals`.
    pub fn path_from(&self, lambda: f64, normals: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.push(lambda);
        let mut ln_y = lambda.ln();
        for &z in normals {
            ln_y += self.drift - self.vol * z;
            out.push(ln_y.exp());
        }
    }

    /// 𝒴 at the step times for path k started at the configured λ0.
    pub fn path(&self, k: usize, out: &mut Vec<f64>) {
        let mut z = Vec::with_capacity(self.config.n_steps);
        self.normals(k, &mut z);
        self.path_from(self.config.lambda0, &z, out);
    }
}

/// A switch executed at step `step`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SwitchEvent {
    pub step: usize,
    pub time: f64,
    pub from: Job,
}

/// One executed path: its switches and path-wise estimator values.
#[derive(Clone, Debug, Serialize)]
pub struct ExecutedPath {
    pub switches: Vec<SwitchEvent>,
    /// Discounted running rewards minus discounted switching costs.
    pub switching_value: f64,
    /// `switching_value` plus the conjugate-utility terms.
    pub dual_value: f64,
    /// Left side of the static budget identity.
    pub budget: f64,
    /// Discounted switching costs, e^{−β(τ−t₀)}ζ𝒴_τ.
    pub cost_value: f64,
    /// e^{−β(T−t₀)}𝒴_T/λ0 = ℋ_T/ℋ_{t₀}.
    pub deflator_t: f64,
    pub ln_growth: f64,
    /// Steps where the new job's own switching condition also held right after a switch.
    pub double_cross_steps: usize,
}

/// Executes the region rule: 0→1 when 𝒴 ≥ Λ₀(t), 1→0 when 𝒴 ≤ Λ₁(t), checked at
/// step times with one switch per step.
pub fn run_switching(
    paths: &DualPaths,
    model: &Model,
    lambda0: &BoundaryCurve,
    lambda1: &BoundaryCurve,
) -> Result<Vec<ExecutedPath>> {
    let c = paths.config;
    let n = c.n_steps;
    let times: Vec<f64> = (0..=n).map(|i| c.time(model, i)).collect();
    let b0 = times.iter().map(|&t| lambda0.value_at(t)).collect::<Result<Vec<_>>>()?;
    let b1 = times.iter().map(|&t| lambda1.value_at(t)).collect::<Result<Vec<_>>>()?;
    let dt = c.dt(model);
    let p = &model.p;
    let disc: Vec<f64> = times.iter().map(|&t| (-p.beta * (t - c.t_start)).exp()).collect();
    let (bequest, inv_g) = (model.d.bequest_coef, 1.0 / p.gamma);

    let executed = (0..c.n_paths)
        .into_par_iter()
        .map_init(
            || (Vec::with_capacity(n), Vec::with_capacity(n + 1)),
            |(z, y), k| {
                paths.normals(k, z);
                paths.path_from(c.lambda0, z, y);
                let mut job = c.job0;
                let mut out = ExecutedPath {
                    switches: Vec::new(),
                    switching_value: 0.0,
                    dual_value: 0.0,
                    budget: 0.0,
                    cost_value: 0.0,
                    deflator_t: 0.0,
                    ln_growth: (y[n] / c.lambda0).ln(),
                    double_cross_steps: 0,
                };
                let mut running = 0.0;
                let mut conj = 0.0;
                let mut spend = 0.0;
                let mut cost_wealth = 0.0;
                let in_switch = |job: Job, i: usize, yi: f64| match job {
                    Job::D0 => yi >= b0[i],
                    Job::D1 => yi <= b1[i],
                };
                for i in 0..=n {
                    let yi = y[i];
                    if in_switch(job, i, yi) {
                        let zeta = p.zeta(job);
                        out.cost_value += disc[i] * zeta * yi;
                        cost_wealth += disc[i] * yi / c.lambda0 * zeta;
                        out.switches.push(SwitchEvent {
                            step: i,
                            time: times[i],
                            from: job,
                        });
                        job = job.other();
                        if in_switch(job, i, yi) {
                            out.double_cross_steps += 1;
                        }
                    }
                    if i == n {
                        break;
                    }
                    let h = disc[i] * yi / c.lambda0;
                    let cons = yi.powf(-inv_g);
                    running += disc[i] * (p.eps(job) * yi - p.labor(job));
                    conj += disc[i] * model.conj_u1_unchecked(yi);
                    spend += h * (cons - p.eps(job));
                }
                let yt = y[n];
                out.deflator_t = disc[n] * yt / c.lambda0;
                out.switching_value = running * dt - out.cost_value;
                out.dual_value = out.switching_value + conj * dt + disc[n] * bequest * model.conj_u1_unchecked(yt);
                out.budget = spend * dt + cost_wealth + out.deflator_t * bequest * yt.powf(-inv_g);
                out
            },
        )
        .collect();
    Ok(executed)
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    /// Mean and standard error of `xs`; antithetic pairs are averaged first.
    pub fn from_samples(xs: &[f64], paired: bool) -> Estimate {
        let pairs: Vec<f64>;
        let s: &[f64] = if paired {
            pairs = xs.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect();
            &pairs
        } else {
            xs
        };
        let n = s.len() as f64;
        let mean = s.iter().sum::<f64>() / n;
        let var = if s.len() > 1 {
            s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Estimate { mean, se: (var / n).sqrt() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SimReport {
    pub config: SimConfig,
    /// Pure switching value J_S.
    pub switching_value: Estimate,
    /// Full dual value J.
    pub dual_value: Estimate,
    /// Static budget left side; equals the initial wealth at the optimum.
    pub budget: Estimate,
    pub switch_cost_value: Estimate,
    pub mean_switches: f64,
    pub max_switches: usize,
    pub zero_switch_paths: usize,
    /// Paths switching at the first step.
    pub immediate_switch_paths: usize,
    /// 0→1 switches at times ≥ T − T1 (should not occur).
    pub late_up_switches: usize,
    /// Consecutive switches in the same direction (should not occur).
    pub alternation_violations: usize,
    pub double_cross_steps: usize,
    /// E[ℋ_T/ℋ_{t₀}]; its exact value is e^{−r(T−t₀)}.
    pub deflator: Estimate,
    /// E[ln(𝒴_T/λ0)]; its exact value is (β−r−θ²/2)(T−t₀).
    pub log_growth: Estimate,
}

pub fn estimate_values(executed: &[ExecutedPath], config: &SimConfig, model: &Model) -> SimReport {
    let pick = |f: &dyn Fn(&ExecutedPath) -> f64| -> Estimate {
        let xs: Vec<f64> = executed.iter().map(f).collect();
        Estimate::from_samples(&xs, config.antithetic)
    };
    let anchor = model.last_up_switch();
    let mut late = 0;
    let mut alternation = 0;
    for e in executed {
        let mut expect = config.job0;
        for s in &e.switches {
            if s.from != expect {
                alternation += 1;
            }
            if s.from == Job::D0 && s.time >= anchor {
                late += 1;
            }
            expect = s.from.other();
        }
    }
    let counts = executed.iter().map(|e| e.switches.len());
    SimReport {
        config: *config,
        switching_value: pick(&|e| e.switching_value),
        dual_value: pick(&|e| e.dual_value),
        budget: pick(&|e| e.budget),
        switch_cost_value: pick(&|e| e.cost_value),
        mean_switches: counts.clone().sum::<usize>() as f64 / executed.len() as f64,
        max_switches: counts.max().unwrap_or(0),
        zero_switch_paths: executed.iter().filter(|e| e.switches.is_empty()).count(),
        immediate_switch_paths: executed.iter().filter(|e| e.switches.first().is_some_and(|s| s.step == 0)).count(),
        late_up_switches: late,
        alternation_violations: alternation,
        double_cross_steps: executed.iter().map(|e| e.double_cross_steps).sum(),
        deflator: pick(&|e| e.deflator_t),
        log_growth: pick(&|e| e.ln_growth),
    }
}

/// Primal check of the duality relation at initial wealth w in job j.
#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub wealth: f64,
    pub job: Job,
    pub t_start: f64,
    pub lambda_star: f64,
    /// J(j,λ*) + λ*w from the solver.
    pub dual_value: f64,
    /// Realized utility of the feedback policy.
    pub primal_value: Estimate,
    /// primal − dual.
    pub gap: f64,
    pub mean_switches: f64,
    /// Mean over paths of the largest |W − 𝒲(t,𝒴*)|/(1+|W|) at 10 sampled times.
    pub wealth_identity_mean: f64,
    /// Paths whose simulated terminal wealth was not positive.
    pub nonpositive_terminal: usize,
    /// Path steps where wealth left the policy grid; the dual level of the
    /// optimal path was used instead.
    pub off_grid_steps: usize,
}

/// Simulates the feedback policy from wealth w in job j with an Euler step of
///
/// ```text
/// dW = (rW + π(μ−r) − c + ε_j)dt + πσ dB,   W ↦ W − ζ_j at a switch,
/// ```
///
/// where λ̂ solves 𝒲_j(t,λ̂) = W, c = λ̂^{−1/γ}, π = Π_j(t,λ̂), and switching
/// happens when λ̂ enters the switching region (equivalently W crosses w_j(t)).
/// The same normals drive the optimal dual path 𝒴* started at λ*.
pub fn verify_duality(
    model: &Model,
    policy: &GridPolicy,
    lambda0: &BoundaryCurve,
    lambda1: &BoundaryCurve,
    config: &SimConfig,
    wealth: f64,
    job: Job,
) -> Result<DualityReport> {
    let c = *config;
    let floor = model.wealth_floor(c.t_start, job);
    if !(wealth > floor) {
        return Err(Error::Domain(format!(
            "wealth {wealth} is not above the admissible bound {floor}"
        )));
    }
    let lambda_star = policy.lambda_from_wealth(job, c.t_start, wealth)?;
    let dual_value = policy.q_hat(job, c.t_start, lambda_star)? + lambda_star * wealth;
    let paths = simulate_dual(&SimConfig { lambda0: lambda_star, ..c }, model)?;

    let n = c.n_steps;
    let dt = c.dt(model);
    let sq = dt.sqrt();
    let p = &model.p;
    let times: Vec<f64> = (0..=n).map(|i| c.time(model, i)).collect();
    let b0 = times.iter().map(|&t| lambda0.value_at(t)).collect::<Result<Vec<_>>>()?;
    let b1 = times.iter().map(|&t| lambda1.value_at(t)).collect::<Result<Vec<_>>>()?;
    let disc: Vec<f64> = times.iter().map(|&t| (-p.beta * (t - c.t_start)).exp()).collect();
    let samples: Vec<usize> = (1..=10).map(|m| m * n / 11).collect();

    struct PathOut {
        utility: f64,
        switches: usize,
        identity: f64,
        nonpositive: bool,
        off_grid: usize,
    }

    let outs: Vec<Result<PathOut>> = (0..c.n_paths)
        .into_par_iter()
        .map_init(
            || (Vec::with_capacity(n), Vec::with_capacity(n + 1)),
            |(z, y), k| {
                paths.normals(k, z);
                paths.path_from(lambda_star, z, y);
                let (mut w, mut j) = (wealth, job);
                let mut out = PathOut {
                    utility: 0.0,
                    switches: 0,
                    identity: 0.0,
                    nonpositive: false,
                    off_grid: 0,
                };
                let mut running = 0.0;
                for i in 0..n {
                    let t = times[i];
                    let lam = match policy.lambda_from_wealth(j, t, w) {
                        Ok(l) => l,
                        Err(_) => {
                            out.off_grid += 1;
                            y[i]
                        }
                    };
                    let switch = match j {
                        Job::D0 => lam >= b0[i],
                        Job::D1 => lam <= b1[i],
                    };
                    if switch {
                        w -= p.zeta(j);
                        j = j.other();
                        out.switches += 1;
                    }
                    if samples.contains(&i) {
                        let target = policy.wealth(j, t, y[i])?;
                        out.identity = out.identity.max((w - target).abs() / (1.0 + w.abs()));
                    }
                    let cons = lam.powf(-1.0 / p.gamma);
                    let pi = policy.investment(j, t, lam).unwrap_or(0.0);
                    running += disc[i] * (model.utility(cons)? - p.labor(j));
                    w += (p.r * w + pi * (p.mu - p.r) - cons + p.eps(j)) * dt + pi * p.sigma * sq * z[i];
                }
                out.utility = running * dt;
                if w > 0.0 {
                    out.utility += disc[n] * model.terminal_utility(w)?;
                } else {
                    out.nonpositive = true;
                }
                Ok(out)
            },
        )
        .collect();
    let outs = outs.into_iter().collect::<Result<Vec<_>>>()?;
    let nonpositive = outs.iter().filter(|o| o.nonpositive).count();
    if nonpositive == outs.len() {
        return Err(Error::numerical("verify_duality", "no path ended with positive wealth", f64::NAN));
    }
    // Paths with non-positive terminal wealth have utility −∞; they are reported
    // and left out of the estimate.
    let utilities: Vec<f64> = outs.iter().filter(|o| !o.nonpositive).map(|o| o.utility).collect();
    let paired = c.antithetic && nonpositive == 0;
    let primal_value = Estimate::from_samples(&utilities, paired);
    Ok(DualityReport {
        wealth,
        job,
        t_start: c.t_start,
        lambda_star,
        dual_value,
        primal_value,
        gap: primal_value.mean - dual_value,
        mean_switches: outs.iter().map(|o| o.switches as f64).sum::<f64>() / outs.len() as f64,
        wealth_identity_mean: outs.iter().map(|o| o.identity).sum::<f64>() / outs.len() as f64,
        nonpositive_terminal: nonpositive,
        off_grid_steps: outs.iter().map(|o| o.off_grid).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_scaling_is_exact() {
        let m = Model::reference();
        let mut cfg = SimConfig::new(&m, 4, 50, 7);
        cfg.lambda0 = 1.0;
        let a = simulate_dual(&cfg, &m).unwrap();
        cfg.lambda0 = 2.0;
        let b = simulate_dual(&cfg, &m).unwrap();
        let (mut pa, mut pb) = (vec![], vec![]);
        for k in 0..4 {
            a.path(k, &mut pa);
            b.path(k, &mut pb);
            for (x, y) in pa.iter().zip(&pb) {
                assert!((2.0 * x - y).abs() <= 4e-15 * y);
            }
        }
    }

    #[test]
    fn log_increment_variance_matches_generator() {
        let m = Model::reference();
        let cfg = SimConfig::new(&m, 1, 30, 1);
        let d = simulate_dual(&cfg, &m).unwrap();
        let dt = cfg.dt(&m);
        assert!((d.vol * d.vol - m.d.theta * m.d.theta * dt).abs() < 1e-17);
    }

    #[test]
    fn antithetic_pairs_negate() {
        let m = Model::reference();
        let mut cfg = SimConfig::new(&m, 2, 20, 3);
        cfg.antithetic = true;
        let d = simulate_dual(&cfg, &m).unwrap();
        let (mut a, mut b) = (vec![], vec![]);
        d.normals(0, &mut a);
        d.normals(1, &mut b);
        assert!(a.iter().zip(&b).all(|(x, y)| *x == -*y));
    }

    #[test]
    fn config_validation() {
        let m = Model::reference();
        let mut cfg = SimConfig::new(&m, 3, 9, 0);
        assert!(cfg.check(&m).is_err());
        cfg.n_steps = 10;
        cfg.antithetic = true;
        assert!(cfg.check(&m).is_err());
        cfg.antithetic = false;
        assert!(cfg.check(&m).is_ok());
        assert!((cfg.lambda0 - (0.704_225_352_112_676 * 0.746_268_656_716_418f64).sqrt()).abs() < 1e-12);
    }

    fn flat(model: &Model, v0: f64, v1: f64) -> (BoundaryCurve, BoundaryCurve) {
        use crate::curve::NodeFlag;
        let t = model.horizon();
        let cut = model.last_up_switch();
        let times = vec![0.0, cut, cut + 1e-9, t];
        let l0 = BoundaryCurve::new(times.clone(), vec![v0, v0, f64::INFINITY, f64::INFINITY], vec![NodeFlag::Solved; 4]);
        let l1 = BoundaryCurve::new(times, vec![v1; 4], vec![NodeFlag::Solved; 4]);
        (l0.unwrap(), l1.unwrap())
    }

    fn run(model: &Model, cfg: &SimConfig, v0: f64, v1: f64) -> SimReport {
        let (l0, l1) = flat(model, v0, v1);
        let paths = simulate_dual(cfg, model).unwrap();
        let ex = run_switching(&paths, model, &l0, &l1).unwrap();
        estimate_values(&ex, cfg, model)
    }

    #[test]
    fn log_growth_and_martingale() {
        let m = Model::reference();
        let cfg = SimConfig::new(&m, 4000, 300, 11);
        let r = run(&m, &cfg, f64::INFINITY, 0.0);
        let drift = (m.p.beta - m.p.r - 0.5 * m.d.theta.powi(2)) * m.horizon();
        assert!((drift + 1.05).abs() < 1e-12);
        assert!((r.log_growth.mean - drift).abs() <= 3.0 * r.log_growth.se);
        let exact = (-m.p.r * m.horizon()).exp();
        assert!((r.deflator.mean - exact).abs() <= 3.0 * r.deflator.se);
    }

    #[test]
    fn never_switching_gives_the_annuity() {
        let m = Model::reference();
        let mut cfg = SimConfig::new(&m, 4000, 600, 5);
        cfg.antithetic = true;
        let r = run(&m, &cfg, f64::INFINITY, 0.0);
        assert_eq!(r.zero_switch_paths, 4000);
        let exact = m.stay_value(Job::D0, 0.0, cfg.lambda0);
        let bias = 0.01 * exact.abs();
        assert!((r.switching_value.mean - exact).abs() <= 3.0 * r.switching_value.se + bias);
    }

    #[test]
    fn starting_above_the_boundary_switches_at_once() {
        let m = Model::reference();
        let mut cfg = SimConfig::new(&m, 200, 100, 2);
        cfg.lambda0 = 1.5;
        let r = run(&m, &cfg, 1.2, 0.3);
        assert_eq!(r.immediate_switch_paths, 200);
        assert!(r.mean_switches >= 1.0);
    }

    #[test]
    fn switches_alternate_and_stop_before_retirement_window() {
        let m = Model::reference();
        let cfg = SimConfig::new(&m, 1000, 600, 9);
        let r = run(&m, &cfg, 0.9, 0.6);
        assert!(r.mean_switches > 1.0);
        assert_eq!(r.late_up_switches, 0);
        assert_eq!(r.alternation_violations, 0);
    }

    #[test]
    fn standard_error_halves_with_four_times_the_paths() {
        let m = Model::reference();
        let a = run(&m, &SimConfig::new(&m, 1000, 200, 3), 0.9, 0.6);
        let b = run(&m, &SimConfig::new(&m, 4000, 200, 3), 0.9, 0.6);
        let ratio = a.switching_value.se / b.switching_value.se;
        assert!((ratio / 2.0 - 1.0).abs() <= 0.2, "ratio {ratio}");
    }

    #[test]
    fn runs_are_deterministic() {
        let m = Model::reference();
        let cfg = SimConfig::new(&m, 300, 200, 13);
        let a = serde_json::to_string(&run(&m, &cfg, 0.9, 0.6)).unwrap();
        let b = serde_json::to_string(&run(&m, &cfg, 0.9, 0.6)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn estimate_of_constant_has_zero_se() {
        let e = Estimate::from_samples(&[2.0, 2.0, 2.0, 2.0], true);
        assert_eq!(e, Estimate { mean: 2.0, se: 0.0 });
    }
}
