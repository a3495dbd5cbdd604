//! Plain-text and JSON emitters. Every float is written with 17 significant
//! digits in scientific notation, independent of locale.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::dynamics::{ConservationReport, Trajectory};
use crate::error::Result;
use crate::hardy::HardySeries;

/// `x` with 17 significant digits, e.g. `1.0000000000000000e0`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Long-format CSV `t,k,re,im`, one row per sample and mode.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,k,re,im\n");
    for (t, u) in traj.times.iter().zip(&traj.states) {
        let t = fmt_f64(*t);
        for (k, c) in u.coeffs().iter().enumerate() {
            out.push_str(&format!("{t},{k},{},{}\n", fmt_f64(c.re), fmt_f64(c.im)));
        }
    }
    out
}

#[derive(Serialize)]
struct Sample<'a> {
    t: f64,
    #[serde(flatten)]
    series: &'a HardySeries,
}

/// JSON array of `{t, coeffs}` objects.
pub fn trajectory_json(traj: &Trajectory) -> Result<String> {
    let samples: Vec<Sample<'_>> = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, series)| Sample { t, series })
        .collect();
    Ok(serde_json::to_string(&samples)?)
}

/// CSV `t,l2_norm,momentum,hamiltonian`.
pub fn conservation_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,l2_norm,momentum,hamiltonian\n");
    for (t, r) in traj.times.iter().zip(&traj.conservation) {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(*t),
            fmt_f64(r.l2_norm),
            fmt_f64(r.momentum),
            fmt_f64(r.hamiltonian)
        ));
    }
    out
}

pub fn conservation_json(report: &ConservationReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)?)
}

pub fn to_json_pretty<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

/// Writes `contents` to `dir/name`, creating `dir` if needed.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}
