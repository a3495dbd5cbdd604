//! C ABI over `szego-lab`.
//!
//! Series and trajectories cross the boundary as opaque handles that the
//! caller releases with the matching `*_free` function. Every fallible call
//! returns an [`SzStatus`]; on failure a message is available from
//! [`sz_last_error_message`] on the same thread. Panics never unwind into C.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use szego_lab::dynamics::{simulate, NonlinearMode, SimConfig, SimParams, Trajectory};
use szego_lab::experiments::{run_experiment, ExperimentSpec};
use szego_lab::gevrey::persistence_check;
use szego_lab::hankel::trace_norm;
use szego_lab::{Complex64, Error, GevreyOrder, HardySeries};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SzStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Invalid input or unmet precondition.
    Invalid = 2,
    /// Overflow, integration blow-up or SVD non-convergence.
    Numerical = 3,
    Io = 4,
    /// The caller's buffer has the wrong length.
    BufferSize = 5,
    /// Internal panic; the library state is unaffected.
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SzNonlinearMode {
    Fft = 0,
    Direct = 1,
}

fn nonlinear_mode(raw: i32) -> Result<NonlinearMode, Failure> {
    match raw {
        x if x == SzNonlinearMode::Fft as i32 => Ok(NonlinearMode::Fft),
        x if x == SzNonlinearMode::Direct as i32 => Ok(NonlinearMode::Direct),
        _ => Err(failure(SzStatus::Invalid, format!("unknown nonlinear mode {raw}"))),
    }
}

/// Opaque truncated Hardy series.
pub struct SzSeries {
    inner: HardySeries,
}

/// Opaque sampled trajectory.
pub struct SzTrajectory {
    inner: Trajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

struct Failure {
    status: SzStatus,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let status = match &err {
            Error::Io(_) => SzStatus::Io,
            e if e.is_numerical() => SzStatus::Numerical,
            _ => SzStatus::Invalid,
        };
        Self {
            status,
            message: err.to_string(),
        }
    }
}

fn failure(status: SzStatus, message: impl Into<String>) -> Failure {
    Failure {
        status,
        message: message.into(),
    }
}

fn null(name: &str) -> Failure {
    failure(SzStatus::NullPointer, format!("{name} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SzStatus::Ok,
        Ok(Err(fail)) => {
            set_last_error(fail.message);
            fail.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            SzStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| failure(SzStatus::Invalid, format!("{name} is not UTF-8: {e}")))
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| failure(SzStatus::Invalid, "output contains a nul byte"))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sz_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn sz_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a series of degree `len − 1` from real and imaginary parts; `im`
/// may be null for real coefficients.
///
/// # Safety
/// `re` (and `im` if non-null) must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_series_new(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut SzSeries,
) -> SzStatus {
    guard(|| {
        if re.is_null() {
            return Err(null("re"));
        }
        if len == 0 {
            return Err(failure(SzStatus::Invalid, "len must be at least 1"));
        }
        let re = std::slice::from_raw_parts(re, len);
        let coeffs = if im.is_null() {
            re.iter().map(|&r| Complex64::new(r, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, len);
            re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect()
        };
        let series = HardySeries::new(coeffs)?;
        write_out(out, Box::into_raw(Box::new(SzSeries { inner: series })), "out")
    })
}

/// Parses `{"coeffs": [[re, im], ...]}`.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_series_from_json(json: *const c_char, out: *mut *mut SzSeries) -> SzStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let series: HardySeries = serde_json::from_str(text).map_err(|e| failure(SzStatus::Invalid, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(SzSeries { inner: series })), "out")
    })
}

/// Serialises a series; release the string with [`sz_string_free`].
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_series_to_json(series: *const SzSeries, out: *mut *mut c_char) -> SzStatus {
    guard(|| {
        let s = borrow(series, "series")?;
        let text = serde_json::to_string(&s.inner).map_err(|e| failure(SzStatus::Invalid, e.to_string()))?;
        write_out(out, into_c_string(text)?, "out")
    })
}

/// # Safety
/// `series` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sz_series_free(series: *mut SzSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_series_degree(series: *const SzSeries, out: *mut usize) -> SzStatus {
    guard(|| write_out(out, borrow(series, "series")?.inner.degree(), "out"))
}

/// Copies the coefficients into `re` and `im`, each of exactly `degree + 1` doubles.
///
/// # Safety
/// `series` must be a live handle; `re` and `im` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sz_series_coeffs(series: *const SzSeries, re: *mut f64, im: *mut f64, len: usize) -> SzStatus {
    guard(|| {
        let s = borrow(series, "series")?;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let coeffs = s.inner.coeffs();
        if len != coeffs.len() {
            return Err(failure(
                SzStatus::BufferSize,
                format!("buffers hold {len} values, series has {}", coeffs.len()),
            ));
        }
        for (k, c) in coeffs.iter().enumerate() {
            re.add(k).write(c.re);
            im.add(k).write(c.im);
        }
        Ok(())
    })
}

/// `(Σ|û(k)|²)^{1/2}`.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_series_l2_norm(series: *const SzSeries, out: *mut f64) -> SzStatus {
    guard(|| write_out(out, borrow(series, "series")?.inner.l2_norm(), "out"))
}

/// `Σ|û(k)|`.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_series_wiener_norm(series: *const SzSeries, out: *mut f64) -> SzStatus {
    guard(|| write_out(out, borrow(series, "series")?.inner.wiener_norm(), "out"))
}

/// `(Σ(k^{2s}+1)|û(k)|²)^{1/2}` for `s ≥ 0`.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_series_hs_norm(series: *const SzSeries, s: f64, out: *mut f64) -> SzStatus {
    guard(|| {
        let series = borrow(series, "series")?;
        if !(s >= 0.0) {
            return Err(failure(SzStatus::Invalid, format!("s must be non-negative, got {s}")));
        }
        write_out(out, series.inner.hs_norm(s), "out")
    })
}

/// `Σe^{σk^γ}|û(k)|` for `σ ≥ 0`, `0 < γ ≤ 1`.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_series_gevrey_norm(
    series: *const SzSeries,
    sigma: f64,
    gamma: f64,
    out: *mut f64,
) -> SzStatus {
    guard(|| {
        let s = borrow(series, "series")?;
        let norm = s.inner.gevrey_wiener_norm(GevreyOrder::new(sigma, gamma)?)?;
        write_out(out, norm, "out")
    })
}

/// Trace norm of the Hankel operator with the given symbol.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_hankel_trace_norm(series: *const SzSeries, out: *mut f64) -> SzStatus {
    guard(|| write_out(out, trace_norm(&borrow(series, "series")?.inner)?, "out"))
}

/// Integrates from `initial` with `ceil(t_end/dt)` RK4 steps, keeping every
/// `sample_every`-th state plus the first and last. `mode` is one of the
/// `SzNonlinearMode` values.
///
/// # Safety
/// `initial` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_simulate(
    initial: *const SzSeries,
    degree: usize,
    dt: f64,
    t_end: f64,
    sample_every: usize,
    mode: i32,
    out: *mut *mut SzTrajectory,
) -> SzStatus {
    guard(|| {
        let u0 = borrow(initial, "initial")?;
        let config = SimConfig::new(
            SimParams {
                degree,
                dt,
                t_end,
                sample_every,
                nonlinear_mode: nonlinear_mode(mode)?,
                backward: false,
            },
            u0.inner.clone(),
        );
        let (traj, _) = simulate(&config)?;
        write_out(out, Box::into_raw(Box::new(SzTrajectory { inner: traj })), "out")
    })
}

/// # Safety
/// `traj` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sz_trajectory_free(traj: *mut SzTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Number of samples.
///
/// # Safety
/// `traj` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_trajectory_len(traj: *const SzTrajectory, out: *mut usize) -> SzStatus {
    guard(|| write_out(out, borrow(traj, "traj")?.inner.len(), "out"))
}

fn sample_index(traj: &Trajectory, index: usize) -> Result<usize, Failure> {
    if index < traj.len() {
        Ok(index)
    } else {
        Err(failure(
            SzStatus::Invalid,
            format!("sample {index} out of range for {} samples", traj.len()),
        ))
    }
}

/// # Safety
/// `traj` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_trajectory_time(traj: *const SzTrajectory, index: usize, out: *mut f64) -> SzStatus {
    guard(|| {
        let t = &borrow(traj, "traj")?.inner;
        let i = sample_index(t, index)?;
        write_out(out, t.times[i], "out")
    })
}

/// Copies sample `index` into a new series handle.
///
/// # Safety
/// `traj` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_trajectory_state(
    traj: *const SzTrajectory,
    index: usize,
    out: *mut *mut SzSeries,
) -> SzStatus {
    guard(|| {
        let t = &borrow(traj, "traj")?.inner;
        let i = sample_index(t, index)?;
        let series = SzSeries {
            inner: t.states[i].clone(),
        };
        write_out(out, Box::into_raw(Box::new(series)), "out")
    })
}

/// Maximum relative drifts of the `L²` norm, momentum and Hamiltonian.
///
/// # Safety
/// `traj` must be a live handle; the three outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_trajectory_conservation(
    traj: *const SzTrajectory,
    l2_drift: *mut f64,
    momentum_drift: *mut f64,
    hamiltonian_drift: *mut f64,
) -> SzStatus {
    guard(|| {
        let report = borrow(traj, "traj")?.inner.conservation_report();
        write_out(l2_drift, report.max_rel_drift_l2, "l2_drift")?;
        write_out(momentum_drift, report.max_rel_drift_momentum, "momentum_drift")?;
        write_out(hamiltonian_drift, report.max_rel_drift_hamiltonian, "hamiltonian_drift")
    })
}

/// Checks the Gevrey bound `‖u(t)‖ ≤ C₀` at every sample with radius `σe^{−λ|t|}`.
///
/// # Safety
/// `traj` must be a live handle; `passed` and `max_ratio` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_persistence_check(
    traj: *const SzTrajectory,
    sigma: f64,
    passed: *mut bool,
    max_ratio: *mut f64,
) -> SzStatus {
    guard(|| {
        let trace = persistence_check(&borrow(traj, "traj")?.inner, sigma)?;
        write_out(passed, trace.pass, "passed")?;
        write_out(max_ratio, trace.max_ratio, "max_ratio")
    })
}

/// Runs a JSON experiment spec and returns the result document; release it
/// with [`sz_string_free`]. Nothing is written to disk.
///
/// # Safety
/// `spec_json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_run_experiment_json(spec_json: *const c_char, out: *mut *mut c_char) -> SzStatus {
    guard(|| {
        let text = read_str(spec_json, "spec_json")?;
        let spec: ExperimentSpec = serde_json::from_str(text).map_err(|e| failure(SzStatus::Invalid, e.to_string()))?;
        let run = run_experiment(&spec)?;
        write_out(out, into_c_string(run.result.to_json()?)?, "out")
    })
}
