//! Model primitives: parameters, validation of the standing assumptions,
//! CRRA utility machinery and the unconstrained dual value `Q_R`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub beta: f64,
    pub r: f64,
    pub mu: f64,
    pub sigma: f64,
    pub eps0: f64,
    pub eps1: f64,
    #[serde(rename = "L0")]
    pub l0: f64,
    #[serde(rename = "L1")]
    pub l1: f64,
    pub zeta0: f64,
    pub zeta1: f64,
    /// Mandatory retirement date.
    #[serde(rename = "T")]
    pub t_retire: f64,
    pub gamma: f64,
    /// Expected death time, strictly after retirement.
    #[serde(rename = "T_death")]
    pub t_death: f64,
}

/// On-disk form of [`ModelParams`]; `T_death` may be omitted and then defaults to `T + 20`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    beta: f64,
    r: f64,
    mu: f64,
    sigma: f64,
    eps0: f64,
    eps1: f64,
    #[serde(rename = "L0")]
    l0: f64,
    #[serde(rename = "L1")]
    l1: f64,
    zeta0: f64,
    zeta1: f64,
    #[serde(rename = "T")]
    t_retire: f64,
    gamma: f64,
    #[serde(rename = "T_death")]
    t_death: Option<f64>,
}

pub const DEFAULT_DEATH_GAP: f64 = 20.0;

impl ModelParams {
    /// Reference parameter set used throughout the tests and the CLI defaults.
    pub fn reference() -> Self {
        ModelParams {
            beta: 0.02,
            r: 0.01,
            mu: 0.07,
            sigma: 0.2,
            eps0: 0.3,
            eps1: 1.0,
            l0: 0.5,
            l1: 1.0,
            zeta0: 3.0,
            zeta1: 1.0,
            t_retire: 30.0,
            gamma: 3.0,
            t_death: 50.0,
        }
    }

    /// Parses a JSON object with the field names `beta, r, mu, sigma, eps0, eps1,
    /// L0, L1, zeta0, zeta1, T, gamma, T_death`.
    pub fn from_json(text: &str) -> Result<Self> {
        let f: ParamsFile =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("config: {e}")))?;
        Ok(ModelParams {
            beta: f.beta,
            r: f.r,
            mu: f.mu,
            sigma: f.sigma,
            eps0: f.eps0,
            eps1: f.eps1,
            l0: f.l0,
            l1: f.l1,
            zeta0: f.zeta0,
            zeta1: f.zeta1,
            t_retire: f.t_retire,
            gamma: f.gamma,
            t_death: f.t_death.unwrap_or(f.t_retire + DEFAULT_DEATH_GAP),
        })
    }

    pub fn eps(&self, j: Job) -> f64 {
        match j {
            Job::D0 => self.eps0,
            Job::D1 => self.eps1,
        }
    }

    pub fn labor(&self, j: Job) -> f64 {
        match j {
            Job::D0 => self.l0,
            Job::D1 => self.l1,
        }
    }

    /// Cost paid when leaving job `j` (ζ₀ for 0→1, ζ₁ for 1→0).
    pub fn zeta(&self, j: Job) -> f64 {
        match j {
            Job::D0 => self.zeta0,
            Job::D1 => self.zeta1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Job {
    /// Low-income, low-disutility job.
    D0,
    /// High-income, high-disutility job.
    D1,
}

impl Job {
    pub fn index(self) -> usize {
        match self {
            Job::D0 => 0,
            Job::D1 => 1,
        }
    }

    pub fn from_index(i: usize) -> Result<Job> {
        match i {
            0 => Ok(Job::D0),
            1 => Ok(Job::D1),
            _ => Err(Error::Input(format!("job index must be 0 or 1, got {i}"))),
        }
    }

    pub fn other(self) -> Job {
        match self {
            Job::D0 => Job::D1,
            Job::D1 => Job::D0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    /// Sharpe ratio (μ−r)/σ.
    pub theta: f64,
    /// Residual horizon below which a 0→1 switch never recoups ζ₀.
    pub t1: f64,
    pub x1: f64,
    pub x2: f64,
    /// Merton coefficient.
    pub k: f64,
    /// A = (1−e^{−K(T_D−T)})/K, the bequest scale.
    pub bequest_coef: f64,
}

/// Checks the standing assumptions and returns the derived constants.
pub fn validate(p: &ModelParams) -> Result<DerivedConstants> {
    let fields = [
        ("beta", p.beta),
        ("r", p.r),
        ("mu", p.mu),
        ("sigma", p.sigma),
        ("eps0", p.eps0),
        ("eps1", p.eps1),
        ("L0", p.l0),
        ("L1", p.l1),
        ("zeta0", p.zeta0),
        ("zeta1", p.zeta1),
        ("T", p.t_retire),
        ("gamma", p.gamma),
        ("T_death", p.t_death),
    ];
    for (name, v) in fields {
        if !v.is_finite() {
            return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
        }
    }
    let fail = |msg: String| Err(Error::InvalidParams(msg));
    if !(p.l0 > 0.0 && p.l0 < p.l1) {
        return fail(format!("0 < L0 < L1 violated (L0={}, L1={})", p.l0, p.l1));
    }
    if !(p.eps0 >= 0.0 && p.eps0 < p.eps1) {
        return fail(format!("0 <= eps0 < eps1 violated (eps0={}, eps1={})", p.eps0, p.eps1));
    }
    if !(p.sigma > 0.0) {
        return fail(format!("sigma > 0 violated (sigma={})", p.sigma));
    }
    if !(p.r > 0.0) {
        return fail(format!("r > 0 violated (r={})", p.r));
    }
    if !(p.gamma > 0.0) || p.gamma == 1.0 {
        return fail(format!("gamma > 0 and gamma != 1 violated (gamma={})", p.gamma));
    }
    if !(p.t_retire > 0.0) {
        return fail(format!("T > 0 violated (T={})", p.t_retire));
    }
    if !(p.t_death > p.t_retire) {
        return fail(format!("T_death > T violated (T_death={}, T={})", p.t_death, p.t_retire));
    }
    let de = p.eps1 - p.eps0;
    let zeta0_max = -(-p.r * p.t_retire).exp_m1() * de / p.r;
    if !(p.zeta0 > 0.0 && p.zeta0 < zeta0_max) {
        return fail(format!(
            "0 < zeta0 < (1-e^(-rT))(eps1-eps0)/r = {zeta0_max} violated (zeta0={})",
            p.zeta0
        ));
    }
    if !(p.zeta1 > 0.0) {
        return fail(format!("zeta1 > 0 violated (zeta1={})", p.zeta1));
    }
    let a0 = de - p.r * p.zeta0;
    if !(a0 > 0.0) {
        return fail(format!("eps1 - eps0 - r*zeta0 > 0 violated (value {a0})"));
    }

    let theta = (p.mu - p.r) / p.sigma;
    let t1 = -(-p.r * p.zeta0 / de).ln_1p() / p.r;
    if !(t1 < p.t_retire) {
        return fail(format!("T1 < T violated (T1={t1}, T={})", p.t_retire));
    }
    let dl = p.l1 - p.l0;
    let x1 = (dl / (de + p.r * p.zeta1)).ln();
    let x2 = (dl / a0).ln();
    let g = p.gamma;
    let k = p.r + (p.beta - p.r) / g + ((g - 1.0) / (g * g)) * (theta * theta / 2.0);
    let bequest_coef = merton_factor(k, p.t_death - p.t_retire);
    if !(bequest_coef > 0.0) {
        return fail(format!("bequest coefficient must be positive (K={k})"));
    }
    debug_assert!(x1 < x2 && t1 > 0.0);
    Ok(DerivedConstants {
        theta,
        t1,
        x1,
        x2,
        k,
        bequest_coef,
    })
}

/// (1−e^{−K h})/K, with the K→0 limit h.
fn merton_factor(k: f64, h: f64) -> f64 {
    if k.abs() < 1e-14 {
        h
    } else {
        -(-k * h).exp_m1() / k
    }
}

/// Validated parameters bundled with their derived constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub p: ModelParams,
    pub d: DerivedConstants,
}

impl Model {
    pub fn new(p: ModelParams) -> Result<Self> {
        let d = validate(&p)?;
        Ok(Model { p, d })
    }

    pub fn reference() -> Self {
        Model::new(ModelParams::reference()).expect("reference parameters are valid")
    }

    pub fn horizon(&self) -> f64 {
        self.p.t_retire
    }

    /// Last date at which a 0→1 switch can still pay off, T − T1.
    pub fn last_up_switch(&self) -> f64 {
        self.p.t_retire - self.d.t1
    }

    /// (1−e^{−rτ})/r.
    pub fn annuity_r(&self, tau: f64) -> f64 {
        -(-self.p.r * tau).exp_m1() / self.p.r
    }

    /// (1−e^{−βτ})/β, with the β→0 limit τ.
    pub fn annuity_beta(&self, tau: f64) -> f64 {
        if self.p.beta.abs() < 1e-14 {
            tau
        } else {
            -(-self.p.beta * tau).exp_m1() / self.p.beta
        }
    }

    /// (ε₁−ε₀)(1−e^{−rτ})/r − ζ₀, evaluated without cancellation near τ = T1.
    pub fn up_switch_gain_rate(&self, tau: f64) -> f64 {
        let p = &self.p;
        let de = p.eps1 - p.eps0;
        -(de / p.r) * (-p.r * self.d.t1).exp() * (-p.r * (tau - self.d.t1)).exp_m1()
    }

    /// A(t) = (1−e^{−K(T_D−t)})/K.
    pub fn merton_coef(&self, t: f64) -> f64 {
        merton_factor(self.d.k, self.p.t_death - t)
    }

    fn check_positive(what: &str, x: f64) -> Result<()> {
        if x > 0.0 && x.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{what} requires a positive argument, got {x}")))
        }
    }

    /// U₁(c) = c^{1−γ}/(1−γ).
    pub fn utility(&self, c: f64) -> Result<f64> {
        Self::check_positive("utility", c)?;
        let g = self.p.gamma;
        Ok(c.powf(1.0 - g) / (1.0 - g))
    }

    /// Ũ₁(λ) = γ/(1−γ)·λ^{−(1−γ)/γ}.
    pub fn conjugate_u1(&self, lambda: f64) -> Result<f64> {
        Self::check_positive("conjugate_u1", lambda)?;
        Ok(self.conj_u1_unchecked(lambda))
    }

    pub(crate) fn conj_u1_unchecked(&self, lambda: f64) -> f64 {
        let g = self.p.gamma;
        g / (1.0 - g) * lambda.powf(-(1.0 - g) / g)
    }

    /// ℐ₁(y) = y^{−1/γ}.
    pub fn inverse_marginal_1(&self, y: f64) -> Result<f64> {
        Self::check_positive("inverse_marginal_1", y)?;
        Ok(y.powf(-1.0 / self.p.gamma))
    }

    /// ℐ₂(T,y) = A·y^{−1/γ}.
    pub fn inverse_marginal_2(&self, y: f64) -> Result<f64> {
        Self::check_positive("inverse_marginal_2", y)?;
        Ok(self.d.bequest_coef * y.powf(-1.0 / self.p.gamma))
    }

    /// Ũ₂(T,λ) = A·γ/(1−γ)·λ^{−(1−γ)/γ}.
    pub fn conjugate_u2(&self, lambda: f64) -> Result<f64> {
        Self::check_positive("conjugate_u2", lambda)?;
        Ok(self.d.bequest_coef * self.conj_u1_unchecked(lambda))
    }

    /// U₂(T,w) = A^γ·w^{1−γ}/(1−γ), the terminal utility whose conjugate is Ũ₂.
    pub fn terminal_utility(&self, w: f64) -> Result<f64> {
        Self::check_positive("terminal_utility", w)?;
        let g = self.p.gamma;
        Ok(self.d.bequest_coef.powf(g) * w.powf(1.0 - g) / (1.0 - g))
    }

    /// Closed-form unconstrained dual value Q_R(t,λ) = A(t)·γ/(1−γ)·λ^{−(1−γ)/γ}.
    pub fn q_r(&self, t: f64, lambda: f64) -> f64 {
        self.merton_coef(t) * self.conj_u1_unchecked(lambda)
    }

    /// ∂λ Q_R = −A(t)·λ^{−1/γ}.
    pub fn q_r_dl(&self, t: f64, lambda: f64) -> f64 {
        -self.merton_coef(t) * lambda.powf(-1.0 / self.p.gamma)
    }

    /// λ·∂λλ Q_R = A(t)/γ·λ^{−1/γ}.
    pub fn q_r_lambda_dll(&self, t: f64, lambda: f64) -> f64 {
        self.merton_coef(t) / self.p.gamma * lambda.powf(-1.0 / self.p.gamma)
    }

    /// Upper Dirichlet datum φ₊(τ).
    pub fn varphi_plus(&self, tau: f64) -> f64 {
        let p = &self.p;
        if tau <= self.d.t1 {
            ((p.eps1 - p.eps0) / p.r) * -(-p.r * tau).exp_m1()
        } else {
            p.zeta0
        }
    }

    /// Lower Dirichlet datum φ₋,ₙ(τ).
    pub fn varphi_minus_n(&self, tau: f64, n: f64) -> f64 {
        let p = &self.p;
        let kink = p.zeta1 * (-n).exp() / p.l1;
        if tau <= kink {
            -p.l1 * n.exp() * tau
        } else {
            -p.zeta1
        }
    }

    /// Job-0 value on [T−T1, T], where switching is never optimal:
    /// ε₀λ(1−e^{−rτ})/r − L₀(1−e^{−βτ})/β with τ = T − t.
    pub fn q0_no_switch(&self, t: f64, lambda: f64) -> f64 {
        let tau = self.horizon() - t;
        self.annuity_r(tau) * self.p.eps0 * lambda - self.annuity_beta(tau) * self.p.l0
    }

    /// Value of staying in job `j` until T without ever switching.
    pub fn stay_value(&self, j: Job, t: f64, lambda: f64) -> f64 {
        let tau = self.horizon() - t;
        self.annuity_r(tau) * self.p.eps(j) * lambda - self.annuity_beta(tau) * self.p.labor(j)
    }

    /// Lower bound of admissible wealth at time t in job j.
    pub fn wealth_floor(&self, t: f64, j: Job) -> f64 {
        let tau = self.horizon() - t;
        match j {
            Job::D0 if t < self.last_up_switch() => {
                -self.annuity_r(tau) * self.p.eps1 + self.p.zeta0
            }
            Job::D0 => -self.annuity_r(tau) * self.p.eps0,
            Job::D1 => -self.annuity_r(tau) * self.p.eps1,
        }
    }
}

/// Five-point Gauss–Legendre nodes and weights on [−1, 1].
const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Truncation of the lognormal kernel, in standard deviations.
const KERNEL_SD: f64 = 8.0;

/// E[f(y·exp(m + s·Z))] with Z standard normal, by trapezoid on z ∈ [−8, 8] with doubling.
fn lognormal_expectation(f: &dyn Fn(f64) -> f64, y: f64, m: f64, s: f64, tol: f64) -> Result<f64> {
    if s == 0.0 {
        return Ok(f(y * m.exp()));
    }
    let pdf = |z: f64| (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let g = |z: f64| f(y * (m + s * z).exp()) * pdf(z);
    let (a, b) = (-KERNEL_SD, KERNEL_SD);
    let mut n = 64usize;
    let mut h = (b - a) / n as f64;
    let mut sum = 0.5 * (g(a) + g(b)) + (1..n).map(|i| g(a + i as f64 * h)).sum::<f64>();
    let mut prev = sum * h;
    for _ in 0..12 {
        // Midpoints of the current panels.
        sum += (0..n).map(|i| g(a + (i as f64 + 0.5) * h)).sum::<f64>();
        n *= 2;
        h /= 2.0;
        let cur = sum * h;
        if (cur - prev).abs() <= tol * (cur.abs() + 1e-300) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::numerical(
        "q_r_quadrature",
        "inner lognormal integral did not converge",
        (sum * h - prev).abs(),
    ))
}

/// Evaluates Q_R(t,λ) = E[∫_t^T e^{−β(s−t)} Ũ₁(s, Y_s) ds + e^{−β(T−t)} Ũ₂(Y_T)]
/// for arbitrary conjugate utilities, with Y a geometric Brownian motion started at λ.
///
/// `u1_conj` takes `(s, y)`; `u2_conj` takes `y`. `tol` is a relative tolerance.
pub fn q_r_quadrature(
    model: &Model,
    t: f64,
    lambda: f64,
    u1_conj: &dyn Fn(f64, f64) -> f64,
    u2_conj: &dyn Fn(f64) -> f64,
    tol: f64,
) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("q_r_quadrature requires lambda > 0, got {lambda}")));
    }
    let p = &model.p;
    let theta = model.d.theta;
    let drift = p.beta - p.r - 0.5 * theta * theta;
    let horizon = model.horizon() - t;
    let inner_tol = tol * 1e-2;

    let terminal = {
        let f = |y: f64| u2_conj(y);
        (-p.beta * horizon).exp()
            * lognormal_expectation(&f, lambda, drift * horizon, theta * horizon.sqrt(), inner_tol)?
    };
    if horizon <= 0.0 {
        return Ok(terminal);
    }

    let running = |s: f64| -> Result<f64> {
        let f = |y: f64| u1_conj(t + s, y);
        let e = lognormal_expectation(&f, lambda, drift * s, theta * s.sqrt(), inner_tol)?;
        Ok((-p.beta * s).exp() * e)
    };
    let composite = |panels: usize| -> Result<f64> {
        let h = horizon / panels as f64;
        let mut acc = 0.0;
        for k in 0..panels {
            let c = (k as f64 + 0.5) * h;
            for (x, w) in GL5 {
                acc += w * 0.5 * h * running(c + 0.5 * h * x)?;
            }
        }
        Ok(acc)
    };
    let mut panels = 4;
    let mut prev = composite(panels)?;
    for _ in 0..10 {
        panels *= 2;
        let cur = composite(panels)?;
        if (cur - prev).abs() <= tol * 0.1 * (cur.abs() + terminal.abs() + 1e-300) {
            return Ok(cur + terminal);
        }
        prev = cur;
    }
    Err(Error::numerical(
        "q_r_quadrature",
        "outer time integral did not converge",
        (composite(panels)? - prev).abs(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_constants() {
        let m = Model::reference();
        assert!((m.d.theta - 0.3).abs() < 1e-15);
        assert!((m.d.t1 - 4.380_262_265_839_288_5).abs() < 1e-12);
        assert!((m.d.x1 - -0.350_656_871_613_169_3).abs() < 1e-13);
        assert!((m.d.x2 - -0.292_669_613_962_819_93).abs() < 1e-13);
        assert!((m.d.k - 0.023_333_333_333_333_33).abs() < 1e-15);
    }

    #[test]
    fn t1_identity() {
        let m = Model::reference();
        let lhs = (m.p.eps1 - m.p.eps0) * m.annuity_r(m.d.t1);
        assert!((lhs - m.p.zeta0).abs() <= 1e-12 * m.p.zeta0);
        assert!(m.up_switch_gain_rate(m.d.t1).abs() < 1e-15);
    }

    #[test]
    fn rejects_zeta0_at_bound() {
        let mut p = ModelParams::reference();
        p.zeta0 = -(-p.r * p.t_retire).exp_m1() * (p.eps1 - p.eps0) / p.r;
        let err = validate(&p).unwrap_err().to_string();
        assert!(err.contains("zeta0"), "{err}");
    }

    #[test]
    fn rejects_zero_zeta1() {
        let mut p = ModelParams::reference();
        p.zeta1 = 0.0;
        assert!(validate(&p).unwrap_err().to_string().contains("zeta1 > 0"));
    }

    #[test]
    fn rejects_log_utility_and_bad_ordering() {
        let mut p = ModelParams::reference();
        p.gamma = 1.0;
        assert!(validate(&p).is_err());
        let mut p = ModelParams::reference();
        p.l0 = 1.5;
        assert!(validate(&p).unwrap_err().to_string().contains("L0 < L1"));
        let mut p = ModelParams::reference();
        p.t_death = 30.0;
        assert!(validate(&p).is_err());
        let mut p = ModelParams::reference();
        p.sigma = f64::NAN;
        assert!(validate(&p).unwrap_err().to_string().contains("sigma"));
    }

    #[test]
    fn crra_values() {
        let m = Model::reference();
        assert_eq!(m.inverse_marginal_1(1.0).unwrap(), 1.0);
        assert!((m.conjugate_u1(1.0).unwrap() + 1.5).abs() < 1e-15);
        for y in [0.5, 1.0, 2.0] {
            let c = m.inverse_marginal_1(y).unwrap();
            let lhs = m.utility(c).unwrap() - y * c;
            assert!((lhs - m.conjugate_u1(y).unwrap()).abs() < 1e-13);
        }
        assert!(m.utility(0.0).is_err());
        assert!(m.conjugate_u1(-1.0).is_err());
    }

    #[test]
    fn terminal_pair_is_conjugate() {
        let m = Model::reference();
        for y in [0.1, 1.0, 7.0] {
            let w = m.inverse_marginal_2(y).unwrap();
            let lhs = m.terminal_utility(w).unwrap() - y * w;
            assert!((lhs - m.conjugate_u2(y).unwrap()).abs() < 1e-12 * lhs.abs());
        }
    }

    #[test]
    fn q_r_reference_value() {
        let m = Model::reference();
        assert!((m.q_r(0.0, 1.0) - -44.266_935_605_490_154).abs() < 1e-10);
        assert_eq!(m.merton_coef(m.p.t_death), 0.0);
    }

    #[test]
    fn boundary_data() {
        let m = Model::reference();
        assert!((m.varphi_plus(2.0) - 1.386_092_868_527_132_3).abs() < 1e-12);
        assert!((m.varphi_plus(m.d.t1) - 3.0).abs() < 1e-12);
        assert_eq!(m.varphi_plus(10.0), 3.0);
        assert_eq!(m.varphi_minus_n(1.0, 5.0), -1.0);
        let kink = (-5.0f64).exp();
        assert!((m.varphi_minus_n(kink, 5.0) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn q0_closed_form_anchor() {
        let m = Model::reference();
        let v = m.q0_no_switch(m.last_up_switch(), 1.0);
        assert!((v - -0.811_224_489_795_917_3).abs() < 1e-12);
    }

    #[test]
    fn wealth_floors() {
        let m = Model::reference();
        assert!((m.wealth_floor(0.0, Job::D1) - -25.918_177_931_828_21).abs() < 1e-10);
        assert!((m.wealth_floor(0.0, Job::D0) - -22.918_177_931_828_21).abs() < 1e-10);
        assert!((m.wealth_floor(m.last_up_switch(), Job::D0) - -1.285_714_285_714_284_5).abs() < 1e-10);
    }

    #[test]
    fn params_json_roundtrip_and_default_death() {
        let p = ModelParams::reference();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(ModelParams::from_json(&text).unwrap(), p);
        let no_death = r#"{"beta":0.02,"r":0.01,"mu":0.07,"sigma":0.2,"eps0":0.3,"eps1":1,
            "L0":0.5,"L1":1,"zeta0":3,"zeta1":1,"T":30,"gamma":3}"#;
        assert_eq!(ModelParams::from_json(no_death).unwrap().t_death, 50.0);
        let missing = r#"{"beta":0.02,"r":0.01,"mu":0.07,"eps0":0.3,"eps1":1,
            "L0":0.5,"L1":1,"zeta0":3,"zeta1":1,"T":30,"gamma":3}"#;
        let err = ModelParams::from_json(missing).unwrap_err().to_string();
        assert!(err.contains("sigma"), "{err}");
    }
}
