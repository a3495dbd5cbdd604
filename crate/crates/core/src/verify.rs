//! The invariant suite behind `szego-lab verify`.
//!
//! Each invariant reduces to one measured quantity (a worst error or a
//! negated slack) compared against a tolerance.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    convergence_study, nonlinear_term, simulate, single_mode_solution, NonlinearMode, SimConfig, SimParams,
};
use crate::error::Result;
use crate::experiments::{build_preset, Preset};
use crate::gevrey::{hs_growth_check, persistence_check, PERSISTENCE_TOL};
use crate::hankel::{hankel_report, trace_norm, INEQUALITY_SLACK};
use crate::hardy::{GevreyOrder, HardySeries};
use crate::rng::SeededRng;

/// Exponents of the Sobolev chain bound checked on random symbols.
pub const CHAIN_EXPONENTS: [f64; 4] = [1.1, 1.5, 2.0, 3.0];
/// Exponents of the Sobolev growth check.
pub const GROWTH_EXPONENTS: [f64; 3] = [0.6, 1.0, 2.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Invariant {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub invariants: Vec<Invariant>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.invariants.iter().all(|i| i.pass)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.invariants
            .iter()
            .filter(|i| !i.pass)
            .map(|i| i.name.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Test hook: the named invariant gets an unattainable tolerance.
    pub break_tolerance: Option<String>,
}

struct Suite<'a> {
    options: &'a VerifyOptions,
    invariants: Vec<Invariant>,
}

impl Suite<'_> {
    fn record(&mut self, name: &str, measured: f64, tolerance: f64, detail: String) {
        let tolerance = if self.options.break_tolerance.as_deref() == Some(name) {
            -1.0
        } else {
            tolerance
        };
        let pass = measured <= tolerance;
        if pass {
            log::info!("{name}: {measured:.3e} <= {tolerance:.3e}");
        } else {
            log::warn!("{name}: {measured:.3e} > {tolerance:.3e} ({detail})");
        }
        self.invariants.push(Invariant {
            name: name.to_string(),
            measured,
            tolerance,
            pass,
            detail,
        });
    }

    fn record_result(&mut self, name: &str, tolerance: f64, outcome: Result<(f64, String)>) {
        match outcome {
            Ok((measured, detail)) => self.record(name, measured, tolerance, detail),
            Err(err) => self.record(name, f64::INFINITY, tolerance, err.to_string()),
        }
    }
}

/// Runs the whole suite. Random inputs derive from `options.seed`.
pub fn run_verify(options: &VerifyOptions) -> VerifyReport {
    let mut suite = Suite {
        options,
        invariants: Vec::new(),
    };
    let seed = options.seed;

    let (algebra, sigma_zero) = norm_algebra(seed);
    suite.record("norm_algebra", algebra, 1e-12, "200 pairs, γ ∈ {0.5, 1}, relative excess".into());
    suite.record("gevrey_sigma_zero", sigma_zero, 0.0, "pairs whose σ = 0 norm differs from Wiener".into());
    suite.record(
        "nonlinear_oracle",
        nonlinear_oracle(seed.wrapping_add(1)),
        1e-12,
        "200 series, N ≤ 128, relative difference".into(),
    );
    suite.record_result(
        "hankel_inequalities",
        INEQUALITY_SLACK,
        hankel_inequalities(seed.wrapping_add(2)).map(|s| (s, "500 symbols, N ≤ 64, negated minimum slack".into())),
    );
    suite.record_result(
        "hankel_anti_diagonal",
        1e-12,
        anti_diagonal().map(|e| (e, "relative error against (k₀+1)|c|".into())),
    );
    suite.record_result("single_mode_exact", 1e-10, single_mode_exact());
    suite.record_result("rk4_order", 0.2, rk4_order());
    suite.record_result("conservation", 1e-10, conservation());

    let persistence_cases = [
        ("eps_plus_wave", Preset::EpsPlusWave { eps: 0.5 }),
        (
            "random_analytic",
            Preset::RandomAnalytic {
                rho: 0.5,
                seed: 42,
                n: 64,
            },
        ),
    ];
    for (label, preset) in persistence_cases {
        match persistence_run(&preset) {
            Ok(p) => {
                suite.record(
                    &format!("persistence({label})"),
                    p.max_ratio - 1.0,
                    PERSISTENCE_TOL,
                    format!("max ‖u_N(t)‖/C₀ − 1 over {} samples", p.samples),
                );
                suite.record(
                    &format!("hs_growth({label})"),
                    -p.growth_min_slack,
                    PERSISTENCE_TOL,
                    "negated minimum slack, s ∈ {0.6, 1, 2}".into(),
                );
            }
            Err(err) => {
                suite.record(&format!("persistence({label})"), f64::INFINITY, PERSISTENCE_TOL, err.to_string());
                suite.record(&format!("hs_growth({label})"), f64::INFINITY, PERSISTENCE_TOL, err.to_string());
            }
        }
    }

    VerifyReport {
        seed,
        invariants: suite.invariants,
    }
}

/// Degree uniform in `0..=max_degree`, decay rate uniform in `[0, max_rho)`.
fn random_symbol(rng: &mut SeededRng, max_degree: usize, max_rho: f64) -> HardySeries {
    let degree = rng.integer(0, max_degree);
    let rho = rng.uniform_in(0.0, max_rho);
    rng.analytic_series(degree, rho)
}

/// Worst relative excess of `‖uv‖ / (‖u‖‖v‖)` over 1, and the number of
/// symbols whose `σ = 0` norm is not bit-equal to the Wiener norm.
fn norm_algebra(seed: u64) -> (f64, f64) {
    let mut rng = SeededRng::new(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut mismatches = 0usize;
    for _ in 0..200 {
        let u = random_symbol(&mut rng, 24, 1.0);
        let v = random_symbol(&mut rng, 24, 1.0);
        let sigma = rng.uniform_in(0.0, 1.0);
        let uv = u.multiply(&v);
        for gamma in [0.5, 1.0] {
            let order = GevreyOrder::new(sigma, gamma).expect("valid order");
            let norm = |w: &HardySeries| w.gevrey_wiener_norm(order).expect("small exponents");
            let bound = norm(&u) * norm(&v);
            if bound > 0.0 {
                worst = worst.max((norm(&uv) - bound) / bound);
            }
        }
        let zero = GevreyOrder::new(0.0, 1.0).expect("valid order");
        for w in [&u, &v, &uv] {
            if w.gevrey_wiener_norm(zero).expect("σ = 0").to_bits() != w.wiener_norm().to_bits() {
                mismatches += 1;
            }
        }
    }
    (worst, mismatches as f64)
}

fn nonlinear_oracle(seed: u64) -> f64 {
    let mut rng = SeededRng::new(seed);
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let n = rng.integer(1, 128);
        let rho = rng.uniform_in(0.0, 0.3);
        let u = rng.analytic_series(n, rho);
        let direct = nonlinear_term(&u, NonlinearMode::Direct);
        let fft = nonlinear_term(&u, NonlinearMode::Fft);
        let diff: f64 = direct
            .coeffs()
            .iter()
            .zip(fft.coeffs())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let scale = direct.l2_norm();
        if scale > 0.0 {
            worst = worst.max(diff / scale);
        }
    }
    worst
}

fn hankel_inequalities(seed: u64) -> Result<f64> {
    let mut rng = SeededRng::new(seed);
    let mut min_slack = f64::INFINITY;
    for _ in 0..500 {
        let u = random_symbol(&mut rng, 64, 1.0);
        min_slack = min_slack.min(hankel_report(&u, &CHAIN_EXPONENTS)?.min_slack());
    }
    Ok(-min_slack)
}

fn anti_diagonal() -> Result<f64> {
    let mut worst = 0.0_f64;
    for k0 in 0..=12 {
        for c in [Complex64::new(1.0, 0.0), Complex64::new(-0.3, 2.0), Complex64::new(0.0, 1e-3)] {
            let expected = (k0 as f64 + 1.0) * c.norm();
            let got = trace_norm(&HardySeries::monomial(k0, c, k0))?;
            worst = worst.max((got - expected).abs() / expected);
        }
    }
    Ok(worst)
}

fn single_mode_config(dt: f64) -> SimConfig {
    SimConfig::new(
        SimParams {
            degree: 8,
            dt,
            t_end: 1.0,
            sample_every: 1000,
            ..SimParams::default()
        },
        HardySeries::from_real(&[0.0, 1.0]).expect("finite"),
    )
}

fn single_mode_exact() -> Result<(f64, String)> {
    let config = single_mode_config(1e-3);
    let (traj, _) = simulate(&config)?;
    let (t, u) = traj.last().expect("samples");
    let exact = single_mode_solution(&config.initial.with_degree(8), t).expect("single mode");
    let err = u
        .coeffs()
        .iter()
        .zip(exact.coeffs())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((err, "‖u_N(1) − e^{−i}e^{iθ}‖, N = 8, dt = 1e−3".into()))
}

fn rk4_order() -> Result<(f64, String)> {
    let table = convergence_study(&single_mode_config(0.1), 4)?;
    let p = table.observed_order().unwrap_or(f64::NAN);
    Ok(((p - 4.0).abs(), format!("observed order {p:.4}")))
}

fn conservation() -> Result<(f64, String)> {
    let config = SimConfig::new(
        SimParams {
            degree: 128,
            dt: 1e-3,
            t_end: 5.0,
            sample_every: 50,
            ..SimParams::default()
        },
        build_preset(&Preset::EpsPlusWave { eps: 0.5 })?,
    );
    let (_, report) = simulate(&config)?;
    Ok((
        report.max_rel_drift_l2.max(report.max_rel_drift_momentum),
        format!(
            "L² drift {:.3e}, momentum drift {:.3e}",
            report.max_rel_drift_l2, report.max_rel_drift_momentum
        ),
    ))
}

struct PersistenceOutcome {
    max_ratio: f64,
    samples: usize,
    growth_min_slack: f64,
}

fn persistence_run(preset: &Preset) -> Result<PersistenceOutcome> {
    let config = SimConfig::new(
        SimParams {
            degree: 128,
            dt: 1e-3,
            t_end: 3.0,
            sample_every: 10,
            ..SimParams::default()
        },
        build_preset(preset)?,
    );
    let (traj, _) = simulate(&config)?;
    let trace = persistence_check(&traj, 0.2)?;
    let mut growth_min_slack = f64::INFINITY;
    for s in GROWTH_EXPONENTS {
        let r = hs_growth_check(&traj, s, &trace.params)?;
        growth_min_slack = growth_min_slack.min(r.min_slack);
    }
    Ok(PersistenceOutcome {
        max_ratio: trace.max_ratio,
        samples: traj.len(),
        growth_min_slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let report = run_verify(&VerifyOptions {
            seed: 42,
            break_tolerance: None,
        });
        assert!(report.all_pass(), "{:#?}", report.invariants);
        assert_eq!(report.invariants.len(), 12);
    }

    #[test]
    fn broken_tolerance_names_invariant() {
        let report = run_verify(&VerifyOptions {
            seed: 3,
            break_tolerance: Some("hankel_anti_diagonal".into()),
        });
        assert_eq!(report.failing(), vec!["hankel_anti_diagonal"]);
    }
}
