//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed verdict or I/O error, 2 invalid
//! configuration or unmet precondition, 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::dynamics::simulate;
use crate::error::Error;
use crate::experiments::{epsilon_sweep, run_experiment, ExperimentSpec, SweepOptions};
use crate::export::{self, fmt_f64};
use crate::hankel::hankel_report;
use crate::hardy::GevreyOrder;
use crate::verify::{run_verify, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LogLevel {
    Quiet,
    Info,
    Debug,
}

#[derive(Debug, Parser)]
#[command(name = "szego-lab", version, about = "Cubic Szegő equation: simulation and analyticity diagnostics")]
pub struct Cli {
    /// JSON experiment spec; a built-in default is used when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, env = "SZEGO_LAB_OUT", default_value = "szego-out", value_name = "DIR")]
    pub out: PathBuf,
    /// Worker threads for the ε-sweep.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = LogLevel::Info)]
    pub log: LogLevel,
    /// Override a spec field by dotted name, e.g. `--set sim.dt=5e-4`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the spec and write the trajectory and conserved quantities.
    Simulate,
    /// Norms of the initial datum.
    Norms,
    /// Hankel spectrum and trace-norm bounds of the initial datum.
    Hankel,
    /// Full experiment: simulation, persistence of the Gevrey bound and all verdicts.
    Persistence,
    /// Radius of `e^{iθ}+ε` at `t = time_factor·π/ε` and its power law in `ε`.
    SweepEpsilon {
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.4, 0.3, 0.2])]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 0.5)]
        time_factor: f64,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, hide = true)]
        break_tolerance: Option<String>,
    },
}

fn default_spec() -> Value {
    json!({
        "name": "default",
        "preset": { "kind": "eps_plus_wave", "eps": 0.5 },
        "sim": { "degree": 128, "dt": 1e-3, "t_end": 1.0, "sample_every": 10 }
    })
}

fn parse_override(entry: &str) -> Result<(Vec<&str>, Value), Error> {
    let (key, raw) = entry
        .split_once('=')
        .ok_or_else(|| Error::validation("--set", format!("expected KEY=VALUE, got '{entry}'")))?;
    let path: Vec<&str> = key.split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(Error::validation("--set", format!("malformed key '{key}'")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    Ok((path, value))
}

/// Sets `root[a][b]... = value`, creating intermediate objects.
pub fn apply_override(root: &mut Value, entry: &str) -> Result<(), Error> {
    let (path, value) = parse_override(entry)?;
    let mut node = root;
    for part in &path[..path.len() - 1] {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| Error::validation(path.join("."), "parent is not an object"))?;
        node = obj.entry(part.to_string()).or_insert_with(|| json!({}));
    }
    node.as_object_mut()
        .ok_or_else(|| Error::validation(path.join("."), "parent is not an object"))?
        .insert(path[path.len() - 1].to_string(), value);
    Ok(())
}

/// Reads the config (or the default), applies overrides and validates.
pub fn load_spec(config: Option<&Path>, overrides: &[String]) -> Result<ExperimentSpec, Error> {
    let mut value = match config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::validation("--config", format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::validation("--config", e.to_string()))?
        }
        None => default_spec(),
    };
    for entry in overrides {
        apply_override(&mut value, entry)?;
    }
    let spec: ExperimentSpec = serde_json::from_value(value).map_err(|e| Error::validation("config", e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}

fn exit_code(err: &Error) -> i32 {
    if err.is_validation() {
        EXIT_INVALID
    } else if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_FAILURE
    }
}

fn init_logging(level: LogLevel) {
    let filter = match level {
        LogLevel::Quiet => log::LevelFilter::Error,
        LogLevel::Info => log::LevelFilter::Info,
        LogLevel::Debug => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(filter)
        .format_timestamp(None)
        .try_init();
    log::set_max_level(filter);
}

/// Parses `args` (including the program name) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    init_logging(cli.log);
    match execute(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, Error> {
    if let Command::Verify { seed, break_tolerance } = &cli.command {
        return cmd_verify(&cli.out, *seed, break_tolerance.clone());
    }
    let spec = load_spec(cli.config.as_deref(), &cli.overrides)?;
    match &cli.command {
        Command::Simulate => cmd_simulate(&spec, &cli.out),
        Command::Norms => cmd_norms(&spec, &cli.out),
        Command::Hankel => cmd_hankel(&spec, &cli.out),
        Command::Persistence => cmd_persistence(&spec, &cli.out),
        Command::SweepEpsilon { eps, time_factor } => cmd_sweep(
            &spec,
            &cli.out,
            eps,
            SweepOptions {
                time_factor: *time_factor,
                jobs: cli.jobs,
            },
        ),
        Command::Verify { .. } => unreachable!("handled above"),
    }
}

fn write_index(dir: &Path, name: &str, artifacts: &[&str]) -> Result<(), Error> {
    let index = json!({ "name": name, "artifacts": artifacts });
    export::write_file(dir, "index.json", &export::to_json_pretty(&index)?)
}

fn cmd_simulate(spec: &ExperimentSpec, out: &Path) -> Result<i32, Error> {
    let config = spec.sim_config()?;
    let (traj, report) = simulate(&config)?;
    let dir = out.join(&spec.name);
    export::write_file(&dir, "spec.json", &export::to_json_pretty(spec)?)?;
    export::write_file(&dir, "trajectory.csv", &export::trajectory_csv(&traj))?;
    export::write_file(&dir, "trajectory.json", &export::trajectory_json(&traj)?)?;
    export::write_file(&dir, "conservation.csv", &export::conservation_csv(&traj))?;
    export::write_file(&dir, "conservation.json", &export::conservation_json(&report)?)?;
    write_index(
        &dir,
        &spec.name,
        &["spec.json", "trajectory.csv", "trajectory.json", "conservation.csv", "conservation.json"],
    )?;
    println!(
        "{} samples; max relative drift: L2 {}, momentum {}, hamiltonian {}",
        traj.len(),
        fmt_f64(report.max_rel_drift_l2),
        fmt_f64(report.max_rel_drift_momentum),
        fmt_f64(report.max_rel_drift_hamiltonian)
    );
    Ok(EXIT_OK)
}

fn cmd_norms(spec: &ExperimentSpec, out: &Path) -> Result<i32, Error> {
    let u = spec.sim_config()?.initial;
    let sigma = spec.analysis.sigma;
    let mut rows: Vec<(String, f64)> = vec![
        ("l2".into(), u.l2_norm()),
        ("momentum".into(), u.momentum()),
        ("wiener".into(), u.wiener_norm()),
        (format!("gevrey(sigma={sigma})"), u.gevrey_wiener_norm(GevreyOrder::analytic(sigma)?)?),
    ];
    for &s in &spec.analysis.s_list {
        rows.push((format!("hs(s={s})"), u.hs_norm(s)));
    }
    let mut csv = String::from("name,value\n");
    for (name, value) in &rows {
        csv.push_str(&format!("{name},{}\n", fmt_f64(*value)));
        println!("{name:>20}  {}", fmt_f64(*value));
    }
    let table: serde_json::Map<String, Value> = rows.into_iter().map(|(k, v)| (k, json!(v))).collect();
    let dir = out.join(&spec.name);
    export::write_file(&dir, "norms.csv", &csv)?;
    export::write_file(&dir, "norms.json", &export::to_json_pretty(&json!({ "spec": spec, "norms": table }))?)?;
    write_index(&dir, &spec.name, &["norms.csv", "norms.json"])?;
    Ok(EXIT_OK)
}

fn cmd_hankel(spec: &ExperimentSpec, out: &Path) -> Result<i32, Error> {
    let u = spec.sim_config()?.initial;
    let report = hankel_report(&u, &spec.analysis.s_list)?;
    let dir = out.join(&spec.name);
    export::write_file(&dir, "hankel.json", &export::to_json_pretty(&json!({ "spec": spec, "report": report }))?)?;
    export::write_file(&dir, "hankel.csv", &report.singular_values_csv())?;
    write_index(&dir, &spec.name, &["hankel.json", "hankel.csv"])?;
    println!("trace_norm {}", fmt_f64(report.trace_norm));
    for c in &report.checks {
        println!("{} {} (slack {})", if c.holds { "ok  " } else { "FAIL" }, c.name, fmt_f64(c.slack));
    }
    Ok(if report.all_hold() { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_persistence(spec: &ExperimentSpec, out: &Path) -> Result<i32, Error> {
    let run = run_experiment(spec)?;
    let dir = run.write(out)?;
    for (name, v) in &run.result.verdicts {
        let slack = v.slack.map_or_else(|| "-".to_string(), fmt_f64);
        println!("{} {name} (slack {slack})", if v.pass { "ok  " } else { "FAIL" });
    }
    log::info!("results in {}", dir.display());
    if let Some(err) = &run.simulation_error {
        eprintln!("error: {err}");
        return Ok(exit_code(err));
    }
    Ok(if run.result.all_pass() { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_sweep(spec: &ExperimentSpec, out: &Path, eps: &[f64], options: SweepOptions) -> Result<i32, Error> {
    let table = epsilon_sweep(eps, spec, options)?;
    let dir = out.join(&spec.name);
    export::write_file(&dir, "sweep.csv", &table.to_csv())?;
    export::write_file(&dir, "sweep.json", &export::to_json_pretty(&json!({ "spec": spec, "sweep": table }))?)?;
    write_index(&dir, &spec.name, &["sweep.csv", "sweep.json"])?;
    print!("{}", table.to_csv());
    println!("exponent {}", fmt_f64(table.exponent));
    Ok(EXIT_OK)
}

fn cmd_verify(out: &Path, seed: u64, break_tolerance: Option<String>) -> Result<i32, Error> {
    let report = run_verify(&VerifyOptions { seed, break_tolerance });
    export::write_file(out, "verdicts.json", &export::to_json_pretty(&report)?)?;
    for inv in &report.invariants {
        println!(
            "{} {} measured {} tolerance {}",
            if inv.pass { "ok  " } else { "FAIL" },
            inv.name,
            fmt_f64(inv.measured),
            fmt_f64(inv.tolerance)
        );
    }
    if report.all_pass() {
        Ok(EXIT_OK)
    } else {
        eprintln!("failing invariants: {}", report.failing().join(", "));
        Ok(EXIT_FAILURE)
    }
}
