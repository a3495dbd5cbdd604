//! Explicit constants and lower bounds for the radius of analyticity, the
//! persistence check `‖u_N(t)‖_{G_{τ(t)}(W)} ≤ C₀`, and an empirical
//! decay-rate estimator.
//!
//! Truncated series are entire functions, so [`estimate_radius`] measures the
//! exponential decay rate of the resolved coefficients, not a literal
//! divergence radius. Modes at or below the noise floor are excluded, and only
//! the first contiguous run of resolved modes is fitted.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::hankel::trace_norm;
use crate::hardy::{GevreyOrder, HardySeries};
use crate::numeric::linear_fit;

const SQRT5: f64 = 2.236_067_977_499_79;

/// Relative tolerance of the persistence and growth inequalities.
pub const PERSISTENCE_TOL: f64 = 1e-9;

/// Values of `τ` below this are reported as 0 and flagged.
pub const TAU_UNDERFLOW: f64 = 1e-300;

/// `C₁ = 2·Tr|H_{u₀}| + 1`, an all-time bound for `‖u(t)‖_W + 1`.
pub fn constant_c1(u0: &HardySeries) -> Result<f64> {
    Ok(2.0 * trace_norm(u0)? + 1.0)
}

/// `z* = (1+√5)/2·e·C₁`, the zero of the Riccati envelope.
pub fn z_star(c1: f64) -> f64 {
    (1.0 + SQRT5) / 2.0 * E * c1
}

/// `max(z₀, z*)`, the bound on the shifted Gevrey norm along the flow.
pub fn z_bound(z0: f64, c1: f64) -> f64 {
    z0.max(z_star(c1))
}

/// `C₀ = max{‖u₀‖_{G_σ(W)}, z*}` from the Gevrey norm of the datum.
pub fn c0_from_norm(gevrey_norm: f64, c1: f64) -> f64 {
    z_bound(gevrey_norm, c1)
}

pub fn constant_c0(u0: &HardySeries, sigma: f64, c1: f64) -> Result<f64> {
    Ok(c0_from_norm(initial_gevrey_norm(u0, sigma)?, c1))
}

fn initial_gevrey_norm(u0: &HardySeries, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::validation("sigma", "must be positive and finite"));
    }
    u0.gevrey_wiener_norm(GevreyOrder::analytic(sigma)?)
}

/// Piecewise form of `λ`: `2(1+√5)eC₁²` for small data, `4C₁‖u₀‖_{G_σ(W)}` otherwise.
/// Evaluated so that it equals `4·C₀·C₁` bit for bit.
pub fn lambda_from_norm(gevrey_norm: f64, c1: f64) -> f64 {
    if gevrey_norm <= z_star(c1) {
        2.0 * (1.0 + SQRT5) * E * c1 * c1
    } else {
        4.0 * c1 * gevrey_norm
    }
}

pub fn lambda_piecewise(u0: &HardySeries, sigma: f64, c1: f64) -> Result<f64> {
    Ok(lambda_from_norm(initial_gevrey_norm(u0, sigma)?, c1))
}

/// `λ̃(t) = 2C₁[2‖u₀‖_{G_σ(W)}/(C₁|t|) + 5e²C₁²]^{1/2} + 2eC₁²` for `|t| > 0`.
pub fn lambda_tilde(t: f64, gevrey_norm: f64, c1: f64) -> Result<f64> {
    if !(t.abs() > 0.0) {
        return Err(Error::validation("t", "the refined rate is defined only for |t| > 0"));
    }
    let inner = 2.0 * gevrey_norm / (c1 * t.abs()) + 5.0 * E * E * c1 * c1;
    Ok(2.0 * c1 * inner.sqrt() + 2.0 * E * c1 * c1)
}

/// `lim_{|t|→∞} λ̃(t) = 2(1+√5)eC₁²`.
pub fn lambda_tilde_asymptote(c1: f64) -> f64 {
    2.0 * (1.0 + SQRT5) * E * c1 * c1
}

/// `τ̃(t) = σe^{−λ̃(t)|t|}`.
pub fn tau_tilde(t: f64, gevrey_norm: f64, sigma: f64, c1: f64) -> Result<f64> {
    Ok(sigma * (-lambda_tilde(t, gevrey_norm, c1)? * t.abs()).exp())
}

/// Constants of the lower bound `τ(t) = σe^{−λ|t|}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusBoundParams {
    pub sigma: f64,
    pub c1: f64,
    pub c0: f64,
    pub lambda: f64,
    /// `‖u₀‖_{G_σ(W)}`.
    pub initial_gevrey_norm: f64,
}

impl RadiusBoundParams {
    /// Computes `C₁`, `C₀` and `λ = 4C₀C₁` from the initial datum.
    pub fn from_initial(u0: &HardySeries, sigma: f64) -> Result<Self> {
        let g = initial_gevrey_norm(u0, sigma)?;
        let c1 = constant_c1(u0)?;
        let c0 = c0_from_norm(g, c1);
        Ok(Self {
            sigma,
            c1,
            c0,
            lambda: 4.0 * c0 * c1,
            initial_gevrey_norm: g,
        })
    }

    /// `τ(t) = σe^{−λ|t|}`; may underflow to 0.
    pub fn tau(&self, t: f64) -> f64 {
        tau(t, self)
    }

    /// `τ̃(t)`, continued by its limit `σ` at `t = 0`.
    pub fn tau_tilde(&self, t: f64) -> f64 {
        if t == 0.0 {
            return self.sigma;
        }
        tau_tilde(t, self.initial_gevrey_norm, self.sigma, self.c1).expect("t is non-zero")
    }
}

pub fn tau(t: f64, params: &RadiusBoundParams) -> f64 {
    params.sigma * (-params.lambda * t.abs()).exp()
}

/// Settings of the decay-rate estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimator {
    pub floor: f64,
    pub min_window: usize,
}

impl Default for RadiusEstimator {
    fn default() -> Self {
        Self {
            floor: 1e-13,
            min_window: 4,
        }
    }
}

impl RadiusEstimator {
    pub fn validate(&self) -> Result<()> {
        if !(self.floor > 0.0) || !self.floor.is_finite() {
            return Err(Error::validation("analysis.floor", "must be positive and finite"));
        }
        if self.min_window < 4 {
            return Err(Error::validation("analysis.min_window", "must be at least 4"));
        }
        Ok(())
    }

    pub fn estimate(&self, u: &HardySeries) -> Option<f64> {
        estimate_radius(u, self.floor, self.min_window)
    }
}

/// `−slope` of the least-squares fit of `log|û(k)|` against `k` over the
/// first contiguous run of modes `k ≥ 1` with `|û(k)| > floor`. `None` when
/// the run has fewer than `min_window` modes.
pub fn estimate_radius(u: &HardySeries, floor: f64, min_window: usize) -> Option<f64> {
    let coeffs = u.coeffs();
    let start = (1..coeffs.len()).find(|&k| coeffs[k].norm() > floor)?;
    let end = (start..coeffs.len())
        .find(|&k| coeffs[k].norm() <= floor)
        .unwrap_or(coeffs.len());
    if end - start < min_window.max(2) {
        return None;
    }
    let xs: Vec<f64> = (start..end).map(|k| k as f64).collect();
    let ys: Vec<f64> = (start..end).map(|k| coeffs[k].norm().ln()).collect();
    linear_fit(&xs, &ys).map(|(slope, _)| -slope)
}

/// Measured radius and both lower bounds along a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusTrace {
    pub params: RadiusBoundParams,
    pub times: Vec<f64>,
    /// `None` where the estimator's window is too small.
    pub fitted_radius: Vec<Option<f64>>,
    pub tau: Vec<f64>,
    pub tau_tilde: Vec<f64>,
    pub gevrey_norm_at_tau: Vec<f64>,
    /// `max_t ‖u_N(t)‖_{G_{τ(t)}(W)} / C₀`.
    pub max_ratio: f64,
    /// True iff every sample satisfies `‖u_N(t)‖_{G_{τ(t)}(W)} ≤ C₀(1+1e−9)`.
    pub pass: bool,
    /// Sample indices where `τ(t)` underflowed and was set to 0.
    pub tau_underflow: Vec<usize>,
    /// Sample indices where `‖u_N(t)‖_W > C₁`.
    pub wiener_exceeds_c1: Vec<usize>,
}

impl RadiusTrace {
    /// CSV `t,rho_hat,tau,tau_tilde,gevrey_at_tau,C0`.
    pub fn to_csv(&self) -> String {
        use crate::export::fmt_f64;
        let mut out = String::from("t,rho_hat,tau,tau_tilde,gevrey_at_tau,C0\n");
        for i in 0..self.times.len() {
            let rho = self.fitted_radius[i].map_or_else(|| "undetermined".to_string(), fmt_f64);
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_f64(self.times[i]),
                rho,
                fmt_f64(self.tau[i]),
                fmt_f64(self.tau_tilde[i]),
                fmt_f64(self.gevrey_norm_at_tau[i]),
                fmt_f64(self.params.c0)
            ));
        }
        out
    }
}

/// Evaluates `‖u_N(t)‖_{G_{τ(t)}(W)}` at every sample against `C₀`, with the
/// constants computed from the first sample.
pub fn persistence_check(traj: &Trajectory, sigma: f64) -> Result<RadiusTrace> {
    persistence_check_with(traj, sigma, &RadiusEstimator::default())
}

pub fn persistence_check_with(
    traj: &Trajectory,
    sigma: f64,
    estimator: &RadiusEstimator,
) -> Result<RadiusTrace> {
    estimator.validate()?;
    let u0 = traj
        .initial()
        .ok_or_else(|| Error::Precondition("persistence check needs a non-empty trajectory".into()))?;
    let params = RadiusBoundParams::from_initial(u0, sigma)?;

    let n = traj.len();
    let mut trace = RadiusTrace {
        params,
        times: traj.times.clone(),
        fitted_radius: Vec::with_capacity(n),
        tau: Vec::with_capacity(n),
        tau_tilde: Vec::with_capacity(n),
        gevrey_norm_at_tau: Vec::with_capacity(n),
        max_ratio: 0.0,
        pass: true,
        tau_underflow: Vec::new(),
        wiener_exceeds_c1: Vec::new(),
    };
    for (i, (&t, u)) in traj.times.iter().zip(&traj.states).enumerate() {
        let mut tau_t = params.tau(t);
        if tau_t < TAU_UNDERFLOW {
            tau_t = 0.0;
            trace.tau_underflow.push(i);
        }
        let g = u.gevrey_wiener_norm(GevreyOrder::analytic(tau_t)?)?;
        let ratio = g / params.c0;
        trace.max_ratio = trace.max_ratio.max(ratio);
        if g > params.c0 * (1.0 + PERSISTENCE_TOL) {
            trace.pass = false;
        }
        if u.wiener_norm() > params.c1 {
            trace.wiener_exceeds_c1.push(i);
        }
        trace.fitted_radius.push(estimator.estimate(u));
        trace.tau.push(tau_t);
        trace.tau_tilde.push(params.tau_tilde(t));
        trace.gevrey_norm_at_tau.push(g);
    }
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsGrowthReport {
    pub s: f64,
    pub pass: bool,
    /// Smallest `(RHS − LHS)/RHS` over checked samples (0 if all sides vanish).
    pub min_slack: f64,
    pub samples_checked: usize,
    /// Samples skipped because `τ(t)` underflowed.
    pub skipped: Vec<usize>,
}

/// Pointwise check of `‖u‖²_{Hˢ} ≤ ‖u‖_W[e^{−2s}(2s/τ)^{2s}‖u‖_{G_τ(W)} + ‖u‖_W]` at `τ = τ(t)`.
pub fn hs_growth_check(traj: &Trajectory, s: f64, params: &RadiusBoundParams) -> Result<HsGrowthReport> {
    if !(s > 0.5) || !s.is_finite() {
        return Err(Error::validation("s", format!("growth exponent must exceed 1/2, got {s}")));
    }
    let mut report = HsGrowthReport {
        s,
        pass: true,
        min_slack: f64::INFINITY,
        samples_checked: 0,
        skipped: Vec::new(),
    };
    let factor = |tau: f64| (-2.0 * s).exp() * (2.0 * s / tau).powf(2.0 * s);
    for (i, (&t, u)) in traj.times.iter().zip(&traj.states).enumerate() {
        let tau_t = params.tau(t);
        if tau_t < TAU_UNDERFLOW {
            report.skipped.push(i);
            continue;
        }
        let w = u.wiener_norm();
        let lhs = u.hs_norm(s).powi(2);
        let rhs = if w == 0.0 {
            0.0
        } else {
            w * (factor(tau_t) * u.gevrey_wiener_norm(GevreyOrder::analytic(tau_t)?)? + w)
        };
        if lhs > rhs * (1.0 + PERSISTENCE_TOL) {
            report.pass = false;
        }
        let slack = if rhs > 0.0 { (rhs - lhs) / rhs } else { 0.0 };
        report.min_slack = report.min_slack.min(slack);
        report.samples_checked += 1;
    }
    if report.samples_checked == 0 {
        report.min_slack = 0.0;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{simulate, SimConfig, SimParams};
    use crate::rng::SeededRng;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    const GOLDEN: f64 = 1.618_033_988_749_895;

    #[test]
    fn c1_examples() {
        let z = Complex64::new(0.6, -0.8);
        assert_relative_eq!(constant_c1(&HardySeries::new(vec![z]).unwrap()).unwrap(), 3.0, max_relative = 1e-15);
        // Hankel matrix [[0,1],[1,0]] has trace norm 2
        assert_relative_eq!(
            constant_c1(&HardySeries::from_real(&[0.0, 1.0]).unwrap()).unwrap(),
            5.0,
            max_relative = 1e-15
        );
        // [[ε,1],[1,0]]: σ± = |ε ± √(ε²+4)|/2, sum √(ε²+4)
        let eps = 0.5;
        assert_relative_eq!(
            constant_c1(&HardySeries::from_real(&[eps, 1.0]).unwrap()).unwrap(),
            2.0 * (eps * eps + 4.0f64).sqrt() + 1.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn c0_examples() {
        let golden_e_3 = GOLDEN * E * 3.0;
        assert_relative_eq!(c0_from_norm(1.0, 3.0), golden_e_3, max_relative = 1e-15);
        assert!((c0_from_norm(1.0, 3.0) - 13.1948).abs() < 1e-4);
        assert_eq!(c0_from_norm(100.0, 3.0), 100.0);
        let boundary = z_star(3.0);
        assert_eq!(c0_from_norm(boundary, 3.0), boundary);
    }

    #[test]
    fn lambda_examples() {
        assert_relative_eq!(lambda_from_norm(1.0, 3.0), 4.0 * GOLDEN * E * 9.0, max_relative = 1e-15);
        assert!((lambda_from_norm(1.0, 3.0) - 158.338).abs() < 1e-3);
        assert_eq!(lambda_from_norm(100.0, 3.0), 1200.0);
        for (g, c1) in [(1.0, 3.0), (100.0, 3.0), (0.3, 1.7), (57.0, 2.2), (z_star(2.5), 2.5)] {
            assert_eq!(lambda_from_norm(g, c1), 4.0 * c0_from_norm(g, c1) * c1, "g={g} c1={c1}");
        }
    }

    #[test]
    fn z_star_examples() {
        assert_relative_eq!(z_star(1.0), GOLDEN * E, max_relative = 1e-15);
        assert!((z_star(1.0) - 4.39827).abs() < 1e-5);
        assert_eq!(z_star(2.0), 2.0 * z_star(1.0));
        assert_eq!(z_bound(1.0, 1.0), z_star(1.0));
        assert_eq!(z_bound(10.0, 1.0), 10.0);
    }

    #[test]
    fn tau_examples() {
        let p = RadiusBoundParams {
            sigma: 1.0,
            c1: 1.0,
            c0: 0.5,
            lambda: 2.0,
            initial_gevrey_norm: 0.0,
        };
        assert_eq!(p.tau(0.0), 1.0);
        assert_eq!(p.tau(-0.7), p.tau(0.7));
        assert_relative_eq!(p.tau(1.0), 0.135_335_283_236_612_7, max_relative = 1e-15);
        assert_eq!(p.tau(1e6), 0.0);
    }

    #[test]
    fn tau_tilde_examples() {
        for c1 in [1.0, 2.0, 5.0] {
            let far = lambda_tilde(1e15, 1.0, c1).unwrap();
            assert_relative_eq!(far, lambda_tilde_asymptote(c1), max_relative = 1e-6);
        }
        for t in [0.1, 1.0, 10.0] {
            assert_relative_eq!(
                lambda_tilde(t, 0.0, 1.0).unwrap(),
                2.0 * SQRT5 * E + 2.0 * E,
                max_relative = 1e-15
            );
        }
        // C₁=2, ‖u₀‖=4, t=1: 4·√(4 + 20e²) + 8e
        let expected = 4.0 * (4.0 + 20.0 * E * E).sqrt() + 8.0 * E;
        assert_relative_eq!(lambda_tilde(1.0, 4.0, 2.0).unwrap(), expected, max_relative = 1e-14);
        assert!((expected - 71.026).abs() < 1e-3);
        assert!(lambda_tilde(0.0, 1.0, 1.0).is_err());
        assert!(tau_tilde(0.0, 1.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn tau_tilde_tends_to_sigma_at_zero() {
        let sigma = 0.3;
        let mut prev = 0.0;
        for t in [1e-2, 1e-4, 1e-6, 1e-8, 1e-10] {
            let v = tau_tilde(t, 2.0, sigma, 3.0).unwrap();
            assert!(v > prev && v < sigma);
            prev = v;
        }
        assert!((sigma - prev).abs() < 1e-3 * sigma);
        assert!(lambda_tilde(1e-10, 2.0, 3.0).unwrap() * 1e-10 < 1e-3);
        // both bounds decrease in |t|
        let p = RadiusBoundParams::from_initial(&HardySeries::from_real(&[0.5, 1.0]).unwrap(), sigma).unwrap();
        let ts = [0.01, 0.1, 0.5, 1.0, 2.0];
        for w in ts.windows(2) {
            assert!(p.tau(w[1]) < p.tau(w[0]));
            assert!(p.tau_tilde(w[1]) < p.tau_tilde(w[0]));
            assert!(p.tau_tilde(-w[1]) < p.tau_tilde(-w[0]));
        }
    }

    #[test]
    fn estimate_radius_examples() {
        let rho = 0.7;
        let u = HardySeries::new((0..=64).map(|k| Complex64::new((-rho * k as f64).exp(), 0.0)).collect()).unwrap();
        assert!((estimate_radius(&u, 1e-13, 4).unwrap() - rho).abs() < 1e-10);
        assert_eq!(estimate_radius(&HardySeries::from_real(&[1.0]).unwrap(), 1e-13, 4), None);
        assert_eq!(estimate_radius(&HardySeries::zeros(20), 1e-13, 4), None);

        let mut rng = SeededRng::new(4);
        let noisy = HardySeries::new(
            (0..=64)
                .map(|k| Complex64::new((-0.3 * k as f64).exp() * (1.0 + 0.01 * rng.uniform_in(-1.0, 1.0)), 0.0))
                .collect(),
        )
        .unwrap();
        assert!((estimate_radius(&noisy, 1e-13, 4).unwrap() - 0.3).abs() < 0.01);

        for scale in [1e-3, 0.5, 7.0] {
            let scaled = u.scale(Complex64::new(scale, 0.0));
            assert!((estimate_radius(&scaled, 1e-13, 4).unwrap() - rho).abs() < 1e-10);
        }
    }

    #[test]
    fn estimator_settings_validate() {
        assert!(RadiusEstimator { floor: 0.0, min_window: 4 }.validate().is_err());
        assert!(RadiusEstimator { floor: 1e-13, min_window: 3 }.validate().is_err());
        assert!(RadiusEstimator::default().validate().is_ok());
    }

    fn short_run(initial: HardySeries, degree: usize, t_end: f64) -> Trajectory {
        let config = SimConfig::new(
            SimParams {
                degree,
                dt: 1e-3,
                t_end,
                sample_every: 50,
                ..SimParams::default()
            },
            initial,
        );
        simulate(&config).unwrap().0
    }

    #[test]
    fn persistence_single_mode() {
        let traj = short_run(HardySeries::from_real(&[0.0, 1.0]).unwrap(), 8, 1.0);
        let trace = persistence_check(&traj, 0.5).unwrap();
        assert!(trace.pass);
        for (g, tau) in trace.gevrey_norm_at_tau.iter().zip(&trace.tau) {
            assert_relative_eq!(*g, tau.exp(), max_relative = 1e-10);
            assert!(*g <= 0.5f64.exp());
        }
        assert!(trace.fitted_radius.iter().all(Option::is_none));
        assert!(trace.wiener_exceeds_c1.is_empty());
    }

    #[test]
    fn persistence_zero_data() {
        let traj = short_run(HardySeries::zeros(4), 4, 0.2);
        let trace = persistence_check(&traj, 0.5).unwrap();
        assert!(trace.pass);
        assert!(trace.gevrey_norm_at_tau.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn persistence_eps_wave() {
        let traj = short_run(HardySeries::from_real(&[0.5, 1.0]).unwrap(), 32, 1.0);
        let trace = persistence_check(&traj, 0.2).unwrap();
        assert!(trace.pass, "max ratio {}", trace.max_ratio);
        assert_eq!(trace.times.len(), trace.tau.len());
        assert!(trace.to_csv().starts_with("t,rho_hat,tau,tau_tilde,gevrey_at_tau,C0\n"));
    }

    #[test]
    fn persistence_rejects_bad_sigma() {
        let traj = short_run(HardySeries::from_real(&[0.5, 1.0]).unwrap(), 4, 0.1);
        assert!(persistence_check(&traj, 0.0).is_err());
        assert!(persistence_check(&traj, -1.0).is_err());
    }

    #[test]
    fn hs_growth_examples() {
        let zero = short_run(HardySeries::zeros(4), 4, 0.2);
        let p = RadiusBoundParams::from_initial(&HardySeries::zeros(4), 0.5).unwrap();
        let r = hs_growth_check(&zero, 1.0, &p).unwrap();
        assert!(r.pass);
        assert_eq!(r.min_slack, 0.0);

        // û=[0,1], s=1, τ=0.1: LHS = 2, RHS = e^{−2}·20²·e^{0.1} + 1
        let u = HardySeries::from_real(&[0.0, 1.0]).unwrap();
        let rhs = (-2.0f64).exp() * 400.0 * 0.1f64.exp() + 1.0;
        assert_relative_eq!(rhs, 60.8, max_relative = 1e-3);
        let single = Trajectory::from_samples(vec![0.0], vec![u.clone()]).unwrap();
        let p = RadiusBoundParams::from_initial(&u, 0.1).unwrap();
        let r = hs_growth_check(&single, 1.0, &p).unwrap();
        assert!(r.pass);
        assert_relative_eq!(r.min_slack, (rhs - 2.0) / rhs, max_relative = 1e-12);
        assert!(hs_growth_check(&single, 0.5, &p).is_err());
    }

    #[test]
    fn hs_growth_on_random_runs() {
        let mut rng = SeededRng::new(8);
        for _ in 0..3 {
            let u0 = rng.analytic_series(16, 0.5);
            let traj = short_run(u0.clone(), 16, 0.3);
            let p = RadiusBoundParams::from_initial(&u0, 0.2).unwrap();
            for s in [0.6, 1.0, 2.0] {
                assert!(hs_growth_check(&traj, s, &p).unwrap().pass);
            }
        }
    }

    #[test]
    fn gevrey_envelope_is_monotone_in_time() {
        let mut rng = SeededRng::new(15);
        let u = rng.analytic_series(30, 0.3);
        let p = RadiusBoundParams::from_initial(&u, 0.25).unwrap();
        let norms: Vec<f64> = (0..40)
            .map(|i| {
                let tau = p.tau(i as f64 * 1e-3);
                u.gevrey_wiener_norm(GevreyOrder::analytic(tau).unwrap()).unwrap()
            })
            .collect();
        assert!(norms.windows(2).all(|w| w[1] <= w[0]));
    }
}
