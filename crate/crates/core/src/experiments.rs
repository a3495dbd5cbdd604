//! Named experiments: initial-data presets, full analysis runs with verdicts,
//! the ε-sweep of the radius at the pinch time and bound-comparison tables.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{simulate, ConservationReport, SimConfig, SimParams, Trajectory};
use crate::error::{Error, Result};
use crate::export::{self, fmt_f64};
use crate::gevrey::{hs_growth_check, persistence_check_with, HsGrowthReport, RadiusEstimator, RadiusTrace};
use crate::hankel::{hankel_report, HankelReport, ISOSPECTRAL_TOP};
use crate::hardy::HardySeries;
use crate::numeric::linear_fit;
use crate::rng::SeededRng;

/// Initial data families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Preset {
    /// `c·e^{ikθ}`.
    SingleMode { k: usize, c: Complex64 },
    /// `e^{iθ} + ε`.
    EpsPlusWave { eps: f64 },
    /// `û(k) = e^{−ρk}·g_k`, `g_k` uniform on the unit disc.
    RandomAnalytic { rho: f64, seed: u64, n: usize },
    Custom { coeffs: Vec<Complex64> },
}

impl Preset {
    pub fn validate(&self) -> Result<()> {
        match self {
            Preset::SingleMode { c, .. } if !(c.re.is_finite() && c.im.is_finite()) => {
                Err(Error::validation("preset.c", "must be finite"))
            }
            Preset::EpsPlusWave { eps } if !(*eps > 0.0) || !eps.is_finite() => {
                Err(Error::validation("preset.eps", "must be positive and finite"))
            }
            Preset::RandomAnalytic { rho, .. } if !(*rho >= 0.0) || !rho.is_finite() => {
                Err(Error::validation("preset.rho", "must be finite and non-negative"))
            }
            Preset::Custom { coeffs } => HardySeries::new(coeffs.clone()).map(drop).map_err(|e| match e {
                Error::Validation { reason, .. } => Error::validation("preset.coeffs", reason),
                other => other,
            }),
            _ => Ok(()),
        }
    }

    /// Degree of the series produced by [`build_preset`].
    pub fn degree(&self) -> usize {
        match self {
            Preset::SingleMode { k, .. } => *k,
            Preset::EpsPlusWave { .. } => 1,
            Preset::RandomAnalytic { n, .. } => *n,
            Preset::Custom { coeffs } => coeffs.len().saturating_sub(1),
        }
    }
}

pub fn build_preset(preset: &Preset) -> Result<HardySeries> {
    preset.validate()?;
    Ok(match preset {
        Preset::SingleMode { k, c } => HardySeries::monomial(*k, *c, *k),
        Preset::EpsPlusWave { eps } => HardySeries::from_real(&[*eps, 1.0])?,
        Preset::RandomAnalytic { rho, seed, n } => SeededRng::new(*seed).analytic_series(*n, *rho),
        Preset::Custom { coeffs } => HardySeries::new(coeffs.clone())?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisConfig {
    /// Initial Gevrey radius `σ`.
    pub sigma: f64,
    /// Exponents of the Sobolev chain bound (each `> 1`).
    pub s_list: Vec<f64>,
    /// Exponents of the Sobolev growth check (each `> 1/2`).
    pub hs_growth_s: Vec<f64>,
    pub floor: f64,
    pub min_window: usize,
    /// Allowed relative drift of the `L²` norm and the momentum.
    pub drift_tolerance: f64,
    pub hamiltonian_tolerance: f64,
    /// Allowed drift of the top Hankel singular values between the first and
    /// last sample; no verdict when absent.
    pub isospectral_tolerance: Option<f64>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            sigma: 0.2,
            s_list: vec![1.1, 1.5, 2.0, 3.0],
            hs_growth_s: vec![0.6, 1.0, 2.0],
            floor: 1e-13,
            min_window: 4,
            drift_tolerance: 1e-10,
            hamiltonian_tolerance: 1e-8,
            isospectral_tolerance: None,
        }
    }
}

impl AnalysisConfig {
    pub fn estimator(&self) -> RadiusEstimator {
        RadiusEstimator {
            floor: self.floor,
            min_window: self.min_window,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(Error::validation("analysis.sigma", "must be finite and non-negative"));
        }
        if let Some(s) = self.s_list.iter().find(|&&s| !(s > 1.0) || !s.is_finite()) {
            return Err(Error::validation("analysis.s_list", format!("entries must exceed 1, got {s}")));
        }
        if let Some(s) = self.hs_growth_s.iter().find(|&&s| !(s > 0.5) || !s.is_finite()) {
            return Err(Error::validation(
                "analysis.hs_growth_s",
                format!("entries must exceed 1/2, got {s}"),
            ));
        }
        self.estimator().validate()?;
        let tolerances = [
            ("analysis.drift_tolerance", Some(self.drift_tolerance)),
            ("analysis.hamiltonian_tolerance", Some(self.hamiltonian_tolerance)),
            ("analysis.isospectral_tolerance", self.isospectral_tolerance),
        ];
        for (field, tol) in tolerances {
            if let Some(tol) = tol {
                if !(tol > 0.0) || !tol.is_finite() {
                    return Err(Error::validation(field, "must be positive and finite"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub preset: Preset,
    pub sim: SimParams,
    #[serde(default)]
    pub analysis: AnalysisConfig,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let name_ok = !self.name.is_empty()
            && self.name != "."
            && self.name != ".."
            && self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
        if !name_ok {
            return Err(Error::validation(
                "name",
                "must be non-empty and use only ASCII letters, digits, '-', '_' or '.'",
            ));
        }
        self.preset.validate()?;
        self.sim.validate()?;
        if self.preset.degree() > self.sim.degree {
            return Err(Error::validation(
                "preset",
                format!(
                    "degree {} exceeds sim.degree {}",
                    self.preset.degree(),
                    self.sim.degree
                ),
            ));
        }
        self.analysis.validate()
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        self.validate()?;
        Ok(SimConfig::new(self.sim.clone(), build_preset(&self.preset)?))
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    /// Normalised margin, negative when the check fails.
    pub slack: Option<f64>,
    pub note: Option<String>,
}

impl Verdict {
    fn measured(pass: bool, slack: f64) -> Self {
        Self {
            pass,
            slack: Some(slack),
            note: None,
        }
    }

    fn error(err: &Error) -> Self {
        Self {
            pass: false,
            slack: None,
            note: Some(err.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySummary {
    pub samples: usize,
    pub t_final: f64,
    pub degree: usize,
    pub final_state: HardySeries,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub summary: Option<TrajectorySummary>,
    pub conservation: Option<ConservationReport>,
    pub hankel_initial: Option<HankelReport>,
    pub hankel_final: Option<HankelReport>,
    /// Drift of the top singular values between first and last sample.
    pub isospectral_drift: Option<f64>,
    pub radius_trace: Option<RadiusTrace>,
    pub hs_growth: Vec<HsGrowthReport>,
    pub verdicts: BTreeMap<String, Verdict>,
}

impl ExperimentResult {
    pub fn all_pass(&self) -> bool {
        self.verdicts.values().all(|v| v.pass)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.verdicts
            .iter()
            .filter(|(_, v)| !v.pass)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        export::to_json_pretty(self)
    }
}

/// A finished run: the persisted result, the trajectory it was computed from
/// and the simulation error, if any.
#[derive(Debug)]
pub struct ExperimentRun {
    pub result: ExperimentResult,
    pub trajectory: Option<Trajectory>,
    pub simulation_error: Option<Error>,
}

impl ExperimentRun {
    /// Writes `result.json`, the companion CSVs and `index.json` into
    /// `out_dir/<spec.name>`; returns that directory.
    pub fn write(&self, out_dir: &Path) -> Result<PathBuf> {
        let dir = out_dir.join(&self.result.spec.name);
        let mut artifacts = Vec::new();
        let mut put = |name: &str, contents: String| -> Result<()> {
            export::write_file(&dir, name, &contents)?;
            artifacts.push(name.to_string());
            Ok(())
        };
        put("result.json", self.result.to_json()?)?;
        if let Some(traj) = &self.trajectory {
            put("trajectory.csv", export::trajectory_csv(traj))?;
            put("conservation.csv", export::conservation_csv(traj))?;
        }
        if let Some(trace) = &self.result.radius_trace {
            put("radius_trace.csv", trace.to_csv())?;
            put("bounds.csv", compare_bounds(trace).to_csv())?;
        }
        if let Some(h) = &self.result.hankel_initial {
            put("hankel_initial.csv", h.singular_values_csv())?;
        }
        if let Some(h) = &self.result.hankel_final {
            put("hankel_final.csv", h.singular_values_csv())?;
        }
        let index = serde_json::json!({ "name": self.result.spec.name, "artifacts": artifacts });
        export::write_file(&dir, "index.json", &export::to_json_pretty(&index)?)?;
        Ok(dir)
    }
}

fn hankel_verdict(report: &HankelReport) -> Verdict {
    let failing: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.holds)
        .map(|c| c.name.as_str())
        .collect();
    Verdict {
        pass: failing.is_empty(),
        slack: Some(report.min_slack()),
        note: (!failing.is_empty()).then(|| format!("violated: {}", failing.join(", "))),
    }
}

fn drift_verdict(drift: f64, tolerance: f64) -> Verdict {
    Verdict::measured(drift <= tolerance, (tolerance - drift) / tolerance)
}

/// Simulates the spec and runs every analysis. Only an invalid spec is an
/// error; failures of individual analyses are recorded as failing verdicts.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentRun> {
    let config = spec.sim_config()?;
    let analysis = &spec.analysis;
    let mut verdicts = BTreeMap::new();
    let mut result = ExperimentResult {
        spec: spec.clone(),
        summary: None,
        conservation: None,
        hankel_initial: None,
        hankel_final: None,
        isospectral_drift: None,
        radius_trace: None,
        hs_growth: Vec::new(),
        verdicts: BTreeMap::new(),
    };

    log::info!("running experiment '{}'", spec.name);
    let (traj, report) = match simulate(&config) {
        Ok(out) => out,
        Err(err) => {
            log::warn!("simulation failed: {err}");
            verdicts.insert("simulation".into(), Verdict::error(&err));
            result.verdicts = verdicts;
            return Ok(ExperimentRun {
                result,
                trajectory: None,
                simulation_error: Some(err),
            });
        }
    };
    verdicts.insert("simulation".into(), Verdict::measured(true, 0.0));

    let (t_final, last) = traj.last().expect("simulation records samples");
    result.summary = Some(TrajectorySummary {
        samples: traj.len(),
        t_final,
        degree: last.degree(),
        final_state: last.clone(),
    });
    result.conservation = Some(report);
    verdicts.insert("conservation_l2".into(), drift_verdict(report.max_rel_drift_l2, analysis.drift_tolerance));
    verdicts.insert(
        "conservation_momentum".into(),
        drift_verdict(report.max_rel_drift_momentum, analysis.drift_tolerance),
    );
    verdicts.insert(
        "conservation_hamiltonian".into(),
        drift_verdict(report.max_rel_drift_hamiltonian, analysis.hamiltonian_tolerance),
    );

    let initial = traj.initial().expect("simulation records samples");
    for (key, u) in [("hankel_initial", initial), ("hankel_final", last)] {
        match hankel_report(u, &analysis.s_list) {
            Ok(h) => {
                verdicts.insert(key.into(), hankel_verdict(&h));
                if key == "hankel_initial" {
                    result.hankel_initial = Some(h);
                } else {
                    result.hankel_final = Some(h);
                }
            }
            Err(err) => {
                verdicts.insert(key.into(), Verdict::error(&err));
            }
        }
    }
    if let (Some(a), Some(b)) = (&result.hankel_initial, &result.hankel_final) {
        let scale = a.singular_values.first().copied().unwrap_or(0.0).max(1e-300);
        let drift = a
            .singular_values
            .iter()
            .zip(&b.singular_values)
            .take(ISOSPECTRAL_TOP)
            .map(|(x, y)| (x - y).abs() / scale)
            .fold(0.0, f64::max);
        result.isospectral_drift = Some(drift);
        if let Some(tol) = analysis.isospectral_tolerance {
            verdicts.insert("isospectral".into(), drift_verdict(drift, tol));
        }
    }

    match persistence_check_with(&traj, analysis.sigma, &analysis.estimator()) {
        Ok(trace) => {
            let mut v = Verdict::measured(trace.pass, 1.0 - trace.max_ratio);
            if !trace.wiener_exceeds_c1.is_empty() {
                v.note = Some(format!(
                    "Wiener norm above C1 at {} samples",
                    trace.wiener_exceeds_c1.len()
                ));
            }
            verdicts.insert("persistence".into(), v);
            for &s in &analysis.hs_growth_s {
                let key = format!("hs_growth(s={s})");
                match hs_growth_check(&traj, s, &trace.params) {
                    Ok(r) => {
                        verdicts.insert(key, Verdict::measured(r.pass, r.min_slack));
                        result.hs_growth.push(r);
                    }
                    Err(err) => {
                        verdicts.insert(key, Verdict::error(&err));
                    }
                }
            }
            result.radius_trace = Some(trace);
        }
        Err(err) => {
            verdicts.insert("persistence".into(), Verdict::error(&err));
            for &s in &analysis.hs_growth_s {
                verdicts.insert(format!("hs_growth(s={s})"), Verdict::error(&err));
            }
        }
    }

    result.verdicts = verdicts;
    Ok(ExperimentRun {
        result,
        trajectory: Some(traj),
        simulation_error: None,
    })
}

/// One row of the bound comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub t: f64,
    pub rho_hat: Option<f64>,
    pub tau: f64,
    pub tau_tilde: f64,
    /// `ρ̂(t) < τ(t) − 0.05σ`.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsComparison {
    pub rows: Vec<BoundsRow>,
    pub flagged: usize,
}

impl BoundsComparison {
    /// CSV `t,rho_hat,tau,tau_tilde,flag`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,rho_hat,tau,tau_tilde,flag\n");
        for r in &self.rows {
            let rho = r.rho_hat.map_or_else(|| "undetermined".to_string(), fmt_f64);
            out.push_str(&format!(
                "{},{rho},{},{},{}\n",
                fmt_f64(r.t),
                fmt_f64(r.tau),
                fmt_f64(r.tau_tilde),
                u8::from(r.flagged)
            ));
        }
        out
    }
}

/// Places the fitted decay rate next to both lower bounds. Samples where the
/// heuristic estimate falls clearly below `τ` are flagged, never failed.
pub fn compare_bounds(trace: &RadiusTrace) -> BoundsComparison {
    let margin = 0.05 * trace.params.sigma;
    let rows: Vec<BoundsRow> = (0..trace.times.len())
        .map(|i| {
            let rho_hat = trace.fitted_radius[i];
            BoundsRow {
                t: trace.times[i],
                rho_hat,
                tau: trace.tau[i],
                tau_tilde: trace.tau_tilde[i],
                flagged: rho_hat.is_some_and(|r| r < trace.tau[i] - margin),
            }
        })
        .collect();
    let flagged = rows.iter().filter(|r| r.flagged).count();
    BoundsComparison { rows, flagged }
}

/// Least-squares fit `log ρ = p·log ε + b`; returns `(p, b)`.
pub fn fit_power_law(eps: &[f64], rho: &[f64]) -> Option<(f64, f64)> {
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = rho.iter().map(|r| r.ln()).collect();
    linear_fit(&xs, &ys)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub eps: f64,
    pub t_eval: f64,
    pub dt: f64,
    pub steps: usize,
    /// `None` when the estimator could not resolve a radius.
    pub rho_hat: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    /// Evaluation time as a multiple of `π/ε`.
    pub time_factor: f64,
    pub rows: Vec<SweepRow>,
    /// Fitted exponent `p` in `ρ̂ ∝ εᵖ`.
    pub exponent: f64,
    pub intercept: f64,
}

impl SweepTable {
    /// CSV `eps,t_eval,dt,steps,rho_hat`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,t_eval,dt,steps,rho_hat\n");
        for r in &self.rows {
            let rho = r.rho_hat.map_or_else(|| "undetermined".to_string(), fmt_f64);
            out.push_str(&format!(
                "{},{},{},{},{rho}\n",
                fmt_f64(r.eps),
                fmt_f64(r.t_eval),
                fmt_f64(r.dt),
                r.steps
            ));
        }
        out
    }

    fn fit(time_factor: f64, rows: Vec<SweepRow>) -> Result<Self> {
        let (eps, rho): (Vec<f64>, Vec<f64>) = rows
            .iter()
            .filter_map(|r| r.rho_hat.map(|rho| (r.eps, rho)))
            .unzip();
        if eps.len() < 3 {
            return Err(Error::Precondition(format!(
                "power-law fit needs at least 3 resolved radii, got {}",
                eps.len()
            )));
        }
        let (exponent, intercept) = fit_power_law(&eps, &rho)
            .ok_or_else(|| Error::Precondition("degenerate ε values in the fit".into()))?;
        Ok(Self {
            time_factor,
            rows,
            exponent,
            intercept,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// The radius is measured at `t = time_factor·π/ε`.
    pub time_factor: f64,
    /// Worker threads; results never depend on it.
    pub jobs: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            time_factor: 0.5,
            jobs: 1,
        }
    }
}

fn check_eps_values(eps_values: &[f64]) -> Result<()> {
    if eps_values.len() < 3 {
        return Err(Error::Precondition(format!(
            "power-law fit needs at least 3 ε values, got {}",
            eps_values.len()
        )));
    }
    if let Some(e) = eps_values.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
        return Err(Error::validation("eps", format!("values must lie in (0, 1), got {e}")));
    }
    if eps_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::validation("eps", "values must be strictly descending"));
    }
    Ok(())
}

/// Simulates `e^{iθ}+ε` for each `ε` up to `t = time_factor·π/ε` and fits the
/// decay rate of the final profile against `ε`. The template provides the
/// degree, the integrator and the estimator; its step is used for the largest
/// `ε` and scaled proportionally for the others, then shortened so that a
/// whole number of steps lands on the evaluation time.
pub fn epsilon_sweep(eps_values: &[f64], template: &ExperimentSpec, options: SweepOptions) -> Result<SweepTable> {
    template.sim.validate()?;
    template.analysis.validate()?;
    check_eps_values(eps_values)?;
    if !(options.time_factor > 0.0) || !options.time_factor.is_finite() {
        return Err(Error::validation("time_factor", "must be positive and finite"));
    }
    if options.jobs == 0 {
        return Err(Error::validation("jobs", "must be at least 1"));
    }
    let eps_min = eps_values[eps_values.len() - 1];
    let horizon = options.time_factor * PI / eps_min;
    if template.sim.t_end < horizon {
        return Err(Error::Precondition(format!(
            "sim.t_end = {} does not reach the evaluation time {horizon} for ε = {eps_min}",
            template.sim.t_end
        )));
    }
    if template.sim.degree < 1 {
        return Err(Error::validation("sim.degree", "must be at least 1"));
    }

    let eps_max = eps_values[0];
    let estimator = template.analysis.estimator();
    let run = |&eps: &f64| -> SweepRow {
        let t_eval = options.time_factor * PI / eps;
        let steps = (t_eval / (template.sim.dt * eps / eps_max)).ceil().max(1.0) as usize;
        let dt = t_eval / steps as f64;
        let mut params = template.sim.clone();
        params.dt = dt;
        params.t_end = t_eval;
        params.sample_every = steps;
        let config = SimConfig::new(params, HardySeries::from_real(&[eps, 1.0]).expect("finite data"));
        log::info!("sweep: ε = {eps}, {steps} steps of {dt}");
        let (rho_hat, note) = match simulate(&config) {
            Ok((traj, _)) => {
                let (_, u) = traj.last().expect("trajectory has samples");
                let rho = estimator.estimate(u);
                (rho, rho.is_none().then(|| "undetermined".to_string()))
            }
            Err(err) => (None, Some(err.to_string())),
        };
        SweepRow {
            eps,
            t_eval,
            dt,
            steps,
            rho_hat,
            note,
        }
    };

    let rows: Vec<SweepRow> = if options.jobs == 1 {
        eps_values.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
        pool.install(|| eps_values.par_iter().map(run).collect())
    };
    SweepTable::fit(options.time_factor, rows)
}

/// The sweep's regression on constructed profiles `û(k) = e^{−cε²k}`, `k ≤ degree`.
pub fn synthetic_sweep(eps_values: &[f64], c: f64, degree: usize, estimator: &RadiusEstimator) -> Result<SweepTable> {
    check_eps_values(eps_values)?;
    estimator.validate()?;
    let rows = eps_values
        .iter()
        .map(|&eps| {
            let rate = c * eps * eps;
            let u = HardySeries::new((0..=degree).map(|k| Complex64::new((-rate * k as f64).exp(), 0.0)).collect())?;
            let rho_hat = estimator.estimate(&u);
            Ok(SweepRow {
                eps,
                t_eval: 0.0,
                dt: 0.0,
                steps: 0,
                rho_hat,
                note: rho_hat.is_none().then(|| "undetermined".to_string()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SweepTable::fit(0.0, rows)
}
