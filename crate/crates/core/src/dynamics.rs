//! Galerkin truncation of the cubic Szegő equation and its time integration.
//!
//! The truncated system is `i ∂ₜu_N = P_N(|u_N|² u_N)`, i.e. for `0 ≤ k ≤ N`
//!
//! ```text
//! d/dt û(k) = −i Σ_{n−j+m=k, 0≤n,j,m≤N} û(n) conj(û(j)) û(m)
//! ```
//!
//! The cubic term is evaluated either by exact convolution (`Direct`) or on a
//! zero-padded grid of length `L ≥ 3N+3` (`Fft`); both are exact up to rounding.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::HardySeries;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonlinearMode {
    Direct,
    #[default]
    Fft,
}

/// Integration parameters without the initial datum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimParams {
    #[serde(default = "SimParams::default_degree")]
    pub degree: usize,
    #[serde(default = "SimParams::default_dt")]
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "SimParams::default_sample_every")]
    pub sample_every: usize,
    #[serde(default)]
    pub nonlinear_mode: NonlinearMode,
    /// Integrate towards negative times with step `−dt`.
    #[serde(default)]
    pub backward: bool,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            degree: Self::default_degree(),
            dt: Self::default_dt(),
            t_end: 1.0,
            sample_every: Self::default_sample_every(),
            nonlinear_mode: NonlinearMode::default(),
            backward: false,
        }
    }
}

impl SimParams {
    fn default_degree() -> usize {
        128
    }
    fn default_dt() -> f64 {
        1e-3
    }
    fn default_sample_every() -> usize {
        1
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree < 1 {
            return Err(Error::validation("sim.degree", "must be at least 1"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::validation("sim.dt", "must be positive and finite"));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::validation("sim.t_end", "must be positive and finite"));
        }
        if self.sample_every == 0 {
            return Err(Error::validation("sim.sample_every", "must be at least 1"));
        }
        Ok(())
    }

    /// Number of fixed steps: the smallest count with `steps·dt ≥ t_end`, up to
    /// a relative rounding allowance of `1e−9`.
    pub fn steps(&self) -> usize {
        let ratio = self.t_end / self.dt;
        let nearest = ratio.round();
        if (ratio - nearest).abs() <= 1e-9 * ratio.max(1.0) {
            nearest.max(1.0) as usize
        } else {
            ratio.ceil() as usize
        }
    }

    /// Signed step.
    pub fn signed_dt(&self) -> f64 {
        if self.backward {
            -self.dt
        } else {
            self.dt
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    #[serde(flatten)]
    pub params: SimParams,
    pub initial: HardySeries,
}

impl SimConfig {
    pub fn new(params: SimParams, initial: HardySeries) -> Self {
        Self { params, initial }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.initial.degree() > self.params.degree {
            return Err(Error::validation(
                "initial",
                format!(
                    "degree {} exceeds sim.degree {}",
                    self.initial.degree(),
                    self.params.degree
                ),
            ));
        }
        Ok(())
    }
}

/// Conserved quantities recorded at one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservationRecord {
    pub l2_norm: f64,
    pub momentum: f64,
    pub hamiltonian: f64,
}

impl ConservationRecord {
    pub fn of(u: &HardySeries) -> Self {
        Self {
            l2_norm: u.l2_norm(),
            momentum: u.momentum(),
            hamiltonian: hamiltonian(u),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<HardySeries>,
    pub conservation: Vec<ConservationRecord>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn initial(&self) -> Option<&HardySeries> {
        self.states.first()
    }

    pub fn last(&self) -> Option<(f64, &HardySeries)> {
        Some((*self.times.last()?, self.states.last()?))
    }

    pub fn degree(&self) -> Option<usize> {
        self.states.first().map(HardySeries::degree)
    }

    /// Builds a trajectory from given samples, recording conserved quantities.
    pub fn from_samples(times: Vec<f64>, states: Vec<HardySeries>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::Precondition(format!(
                "{} times for {} states",
                times.len(),
                states.len()
            )));
        }
        let conservation = states.iter().map(ConservationRecord::of).collect();
        Ok(Self {
            times,
            states,
            conservation,
        })
    }

    pub fn conservation_report(&self) -> ConservationReport {
        ConservationReport::from_records(&self.conservation)
    }
}

/// Maximum relative drift `|Q(t)−Q(0)| / max(|Q(0)|, 1e−300)` over samples.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConservationReport {
    pub max_rel_drift_l2: f64,
    pub max_rel_drift_momentum: f64,
    pub max_rel_drift_hamiltonian: f64,
}

impl ConservationReport {
    pub fn from_records(records: &[ConservationRecord]) -> Self {
        let Some(first) = records.first() else {
            return Self::default();
        };
        let drift = |q0: f64, q: f64| (q - q0).abs() / q0.abs().max(1e-300);
        records.iter().fold(Self::default(), |acc, r| Self {
            max_rel_drift_l2: acc.max_rel_drift_l2.max(drift(first.l2_norm, r.l2_norm)),
            max_rel_drift_momentum: acc.max_rel_drift_momentum.max(drift(first.momentum, r.momentum)),
            max_rel_drift_hamiltonian: acc
                .max_rel_drift_hamiltonian
                .max(drift(first.hamiltonian, r.hamiltonian)),
        })
    }
}

/// Smallest power of two `≥ 3N+3`.
pub fn fft_length(degree: usize) -> usize {
    (3 * degree + 3).next_power_of_two()
}

struct FftWorkspace {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    buffer: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl FftWorkspace {
    fn new(degree: usize) -> Self {
        let len = fft_length(degree);
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            len,
            forward,
            inverse,
            buffer: vec![ZERO; len],
            scratch: vec![ZERO; scratch_len],
        }
    }

    fn cubic(&mut self, u: &[Complex64], out: &mut [Complex64]) {
        self.buffer.fill(ZERO);
        self.buffer[..u.len()].copy_from_slice(u);
        self.inverse.process_with_scratch(&mut self.buffer, &mut self.scratch);
        for z in self.buffer.iter_mut() {
            *z *= z.norm_sqr();
        }
        self.forward.process_with_scratch(&mut self.buffer, &mut self.scratch);
        let scale = 1.0 / self.len as f64;
        for (o, z) in out.iter_mut().zip(&self.buffer) {
            *o = z * scale;
        }
    }
}

/// Evaluates `F(u) = P_N(|u|²u)` for series of a fixed degree. Owns its workspace.
pub struct NonlinearEvaluator {
    degree: usize,
    mode: NonlinearMode,
    fft: Option<FftWorkspace>,
    modulus: Vec<Complex64>,
}

impl NonlinearEvaluator {
    pub fn new(degree: usize, mode: NonlinearMode) -> Self {
        let fft = match mode {
            NonlinearMode::Fft => Some(FftWorkspace::new(degree)),
            NonlinearMode::Direct => None,
        };
        Self {
            degree,
            mode,
            fft,
            modulus: vec![ZERO; 2 * degree + 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn mode(&self) -> NonlinearMode {
        self.mode
    }

    /// Writes `F(u)` into `out`; both slices have length `N+1`.
    pub fn eval_into(&mut self, u: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(u.len(), self.degree + 1);
        debug_assert_eq!(out.len(), self.degree + 1);
        match &mut self.fft {
            Some(ws) => ws.cubic(u, out),
            None => direct_cubic(u, &mut self.modulus, out),
        }
    }

    pub fn eval(&mut self, u: &HardySeries) -> Result<HardySeries> {
        if u.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                actual: u.degree(),
            });
        }
        let mut out = vec![ZERO; self.degree + 1];
        self.eval_into(u.coeffs(), &mut out);
        Ok(HardySeries::from_vec_unchecked(out))
    }
}

/// Exact `O(N²)` evaluation: `w = |u|²` by convolution, then `P_N(w·u)`.
fn direct_cubic(u: &[Complex64], modulus: &mut [Complex64], out: &mut [Complex64]) {
    let n = u.len() - 1;
    // modulus[d + n] = w(d) = Σ_j û(j+d) conj(û(j))
    for d in 0..=n {
        let mut acc = ZERO;
        for j in 0..=(n - d) {
            acc += u[j + d] * u[j].conj();
        }
        modulus[n + d] = acc;
        modulus[n - d] = acc.conj();
    }
    for (k, o) in out.iter_mut().enumerate() {
        let mut acc = ZERO;
        // F(k) = Σ_m w(k−m) û(m), with k−m ∈ [−N, N]
        for (m, um) in u.iter().enumerate() {
            acc += modulus[n + k - m] * um;
        }
        *o = acc;
    }
}

/// `P_N(|u|²u)` at the degree of `u`.
pub fn nonlinear_term(u: &HardySeries, mode: NonlinearMode) -> HardySeries {
    let mut eval = NonlinearEvaluator::new(u.degree(), mode);
    let mut out = vec![ZERO; u.degree() + 1];
    eval.eval_into(u.coeffs(), &mut out);
    HardySeries::from_vec_unchecked(out)
}

/// Time derivative `−i·P_N(|u|²u)`.
pub fn rhs(u: &HardySeries, mode: NonlinearMode) -> HardySeries {
    nonlinear_term(u, mode).scale(Complex64::new(0.0, -1.0))
}

/// Classical four-stage Runge–Kutta for `dû/dt = −i F(û)` with reusable buffers.
pub struct Rk4Integrator {
    eval: NonlinearEvaluator,
    k: [Vec<Complex64>; 4],
    stage: Vec<Complex64>,
}

impl Rk4Integrator {
    pub fn new(degree: usize, mode: NonlinearMode) -> Self {
        let len = degree + 1;
        Self {
            eval: NonlinearEvaluator::new(degree, mode),
            k: std::array::from_fn(|_| vec![ZERO; len]),
            stage: vec![ZERO; len],
        }
    }

    fn derivative(eval: &mut NonlinearEvaluator, u: &[Complex64], out: &mut [Complex64]) {
        eval.eval_into(u, out);
        for z in out.iter_mut() {
            // −i·z
            *z = Complex64::new(z.im, -z.re);
        }
    }

    /// Advances `state` in place by `dt` (which may be negative).
    pub fn step(&mut self, state: &mut [Complex64], dt: f64) {
        let [k1, k2, k3, k4] = &mut self.k;
        Self::derivative(&mut self.eval, state, k1);
        for ((s, u), k) in self.stage.iter_mut().zip(state.iter()).zip(k1.iter()) {
            *s = u + k * (0.5 * dt);
        }
        Self::derivative(&mut self.eval, &self.stage, k2);
        for ((s, u), k) in self.stage.iter_mut().zip(state.iter()).zip(k2.iter()) {
            *s = u + k * (0.5 * dt);
        }
        Self::derivative(&mut self.eval, &self.stage, k3);
        for ((s, u), k) in self.stage.iter_mut().zip(state.iter()).zip(k3.iter()) {
            *s = u + k * dt;
        }
        Self::derivative(&mut self.eval, &self.stage, k4);
        let w = dt / 6.0;
        for (i, u) in state.iter_mut().enumerate() {
            *u += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w;
        }
    }
}

/// One RK4 step of size `dt`.
pub fn rk4_step(u: &HardySeries, dt: f64, mode: NonlinearMode) -> Result<HardySeries> {
    if !dt.is_finite() || dt == 0.0 {
        return Err(Error::validation("dt", "must be finite and non-zero"));
    }
    let mut integrator = Rk4Integrator::new(u.degree(), mode);
    let mut state = u.coeffs().to_vec();
    integrator.step(&mut state, dt);
    let out = HardySeries::from_vec_unchecked(state);
    if !out.is_finite() {
        return Err(Error::IntegrationFailure { step: 1 });
    }
    Ok(out)
}

/// Fixed-step RK4 from `t = 0` to `steps·dt`. Samples are recorded every
/// `sample_every` steps; the initial and final states are always recorded.
pub fn simulate(config: &SimConfig) -> Result<(Trajectory, ConservationReport)> {
    config.validate()?;
    let p = &config.params;
    let steps = p.steps();
    let dt = p.signed_dt();
    let mut integrator = Rk4Integrator::new(p.degree, p.nonlinear_mode);
    let mut state = config.initial.with_degree(p.degree).into_coeffs();

    let capacity = steps / p.sample_every + 2;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    times.push(0.0);
    states.push(HardySeries::from_vec_unchecked(state.clone()));

    for step in 1..=steps {
        integrator.step(&mut state, dt);
        if state.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::IntegrationFailure { step });
        }
        if step % p.sample_every == 0 || step == steps {
            times.push(step as f64 * dt);
            states.push(HardySeries::from_vec_unchecked(state.clone()));
        }
    }
    let trajectory = Trajectory::from_samples(times, states)?;
    let report = trajectory.conservation_report();
    log::debug!(
        "simulated {steps} steps of dt={dt:e} at N={}: l2 drift {:.3e}",
        p.degree,
        report.max_rel_drift_l2
    );
    Ok((trajectory, report))
}

/// `¼ Σ_{d=−N}^{N} |(|u|²)ˆ(d)|²`, the quartic energy `¼∫|u|⁴ dθ/2π`.
pub fn hamiltonian(u: &HardySeries) -> f64 {
    let w = u.modulus_squared();
    0.25 * crate::numeric::compensated_sum(w.coeffs().iter().map(|z| z.norm_sqr()))
}

/// Exact flow of a single-mode datum `c·e^{ikθ}`: `c·e^{−i|c|²t}e^{ikθ}`.
pub fn single_mode_solution(u0: &HardySeries, t: f64) -> Option<HardySeries> {
    let nonzero: Vec<usize> = u0
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
        .map(|(k, _)| k)
        .collect();
    match nonzero.as_slice() {
        [] => Some(u0.clone()),
        [k] => {
            let c = u0.coeff(*k);
            let phase = Complex64::from_polar(1.0, -c.norm_sqr() * t);
            let mut coeffs = vec![ZERO; u0.degree() + 1];
            coeffs[*k] = c * phase;
            Some(HardySeries::from_vec_unchecked(coeffs))
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceReference {
    /// Error against the single-mode closed form.
    ClosedForm,
    /// Error against a run at a quarter of the finest step.
    SelfConvergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub dt: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub reference: ConvergenceReference,
    pub rows: Vec<ConvergenceRow>,
    /// `log₂(e_i / e_{i+1})` per halving; `None` when an error is zero.
    pub orders: Vec<Option<f64>>,
}

impl ConvergenceTable {
    /// Order estimated from the last halving, if defined.
    pub fn observed_order(&self) -> Option<f64> {
        self.orders.last().copied().flatten()
    }
}

/// Runs `refinements` successive halvings of `dt` and measures the final-time error.
pub fn convergence_study(config: &SimConfig, refinements: usize) -> Result<ConvergenceTable> {
    config.validate()?;
    if refinements < 2 {
        return Err(Error::validation("refinements", "must be at least 2"));
    }
    let base_steps = config.params.steps();
    let t_end = config.params.t_end;
    let final_state = |steps: usize| -> Result<HardySeries> {
        let mut c = config.clone();
        c.params.dt = t_end / steps as f64;
        c.params.sample_every = steps;
        let (traj, _) = simulate(&c)?;
        Ok(traj.states.last().cloned().expect("trajectory has samples"))
    };

    let signed_t = if config.params.backward { -t_end } else { t_end };
    let initial = config.initial.with_degree(config.params.degree);
    let (reference, exact) = match single_mode_solution(&initial, signed_t) {
        Some(exact) => (ConvergenceReference::ClosedForm, exact),
        None => (
            ConvergenceReference::SelfConvergence,
            final_state(base_steps << (refinements + 1))?,
        ),
    };

    let mut rows = Vec::with_capacity(refinements);
    for r in 0..refinements {
        let steps = base_steps << r;
        let u = final_state(steps)?;
        let diff: Vec<Complex64> = u.coeffs().iter().zip(exact.coeffs()).map(|(a, b)| a - b).collect();
        let error = HardySeries::from_vec_unchecked(diff).l2_norm();
        rows.push(ConvergenceRow {
            dt: t_end / steps as f64,
            error,
        });
    }
    let orders = rows
        .windows(2)
        .map(|w| (w[0].error > 0.0 && w[1].error > 0.0).then(|| (w[0].error / w[1].error).log2()))
        .collect();
    Ok(ConvergenceTable {
        reference,
        rows,
        orders,
    })
}
