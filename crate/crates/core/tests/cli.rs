use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn szego(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_szego-lab"))
        .arg("--out")
        .arg(out)
        .args(["--log", "quiet"])
        .args(args)
        .env_remove("SZEGO_LAB_OUT")
        .output()
        .unwrap()
}

fn write_spec(dir: &Path, body: &str) -> String {
    let path = dir.join("spec.json");
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const SINGLE_MODE: &str = r#"{
  "name": "single",
  "preset": {"kind": "single_mode", "k": 1, "c": [1.0, 0.0]},
  "sim": {"degree": 8, "dt": 1e-3, "t_end": 1.0, "sample_every": 100}
}"#;

#[test]
fn simulate_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), SINGLE_MODE);
    let out = dir.path().join("does/not/exist");
    let o = szego(&out, &["--config", &spec, "simulate"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let run = out.join("single");
    for f in ["trajectory.csv", "trajectory.json", "conservation.csv", "conservation.json", "index.json", "spec.json"] {
        assert!(run.join(f).is_file(), "{f}");
    }
    let csv = fs::read_to_string(run.join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,k,re,im\n"));
    assert_eq!(csv.lines().count(), 1 + 11 * 9);
    let last = csv.lines().find(|l| l.starts_with("1.0000000000000000e0,1,")).unwrap();
    let fields: Vec<f64> = last.split(',').map(|x| x.parse().unwrap()).collect();
    assert!((fields[2] - 1f64.cos()).abs() < 1e-10 && (fields[3] + 1f64.sin()).abs() < 1e-10);
}

#[test]
fn invalid_dt_exits_2_naming_field() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), SINGLE_MODE);
    let o = szego(dir.path(), &["--config", &spec, "--set", "sim.dt=0", "simulate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sim.dt"));

    let bad = write_spec(dir.path(), "{ not json");
    assert_eq!(szego(dir.path(), &["--config", &bad, "simulate"]).status.code(), Some(2));
    assert_eq!(szego(dir.path(), &["--config", "/nonexistent.json", "norms"]).status.code(), Some(2));
    assert_eq!(szego(dir.path(), &["frobnicate"]).status.code(), Some(2));
}

#[test]
fn blow_up_exits_3_with_step() {
    let dir = tempfile::tempdir().unwrap();
    let o = szego(
        dir.path(),
        &[
            "--set",
            r#"preset={"kind":"custom","coeffs":[[1000,0],[1000,0]]}"#,
            "--set",
            "sim.degree=4",
            "--set",
            "sim.dt=0.5",
            "--set",
            "sim.t_end=5",
            "simulate",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("step"));
}

#[test]
fn hankel_anti_diagonal_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = szego(
        dir.path(),
        &[
            "--set",
            r#"preset={"kind":"custom","coeffs":[[0,0],[0,0],[0,0],[1,0]]}"#,
            "--set",
            "sim.degree=3",
            "--set",
            "name=anti",
            "hankel",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("anti/hankel.json")).unwrap()).unwrap();
    assert!((report["report"]["trace_norm"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    let csv = fs::read_to_string(dir.path().join("anti/hankel.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn norms_sigma_zero_columns_agree() {
    let dir = tempfile::tempdir().unwrap();
    let o = szego(dir.path(), &["--set", "analysis.sigma=0", "norms"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("default/norms.json")).unwrap()).unwrap();
    assert_eq!(v["norms"]["wiener"], v["norms"]["gevrey(sigma=0)"]);
}

#[test]
fn persistence_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = szego(dir.path(), &["--set", "sim.t_end=0.5", "--set", "sim.degree=32", "persistence"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let index: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("default/index.json")).unwrap()).unwrap();
    for a in index["artifacts"].as_array().unwrap() {
        assert!(dir.path().join("default").join(a.as_str().unwrap()).is_file());
    }
    let result = fs::read_to_string(dir.path().join("default/result.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&result).unwrap();
    assert_eq!(parsed["verdicts"]["persistence"]["pass"], true);
}

#[test]
fn sweep_needs_three_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = szego(dir.path(), &["--set", "sim.t_end=20", "sweep-epsilon", "--eps", "0.4,0.3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = szego(dir.path(), &["sweep-epsilon", "--eps", "0.4,0.3,0.2"]);
    assert_eq!(o.status.code(), Some(2), "t_end 1 cannot reach the evaluation time");
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fresh");
    let o = szego(&out, &["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(out.join("verdicts.json").is_file());

    let o = szego(&out, &["verify", "--break-tolerance", "nonlinear_oracle"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonlinear_oracle"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("verdicts.json")).unwrap()).unwrap();
    let failing: Vec<&str> = v["invariants"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|i| i["pass"] == false)
        .map(|i| i["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["nonlinear_oracle"]);
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_szego-lab"))
        .args(["--log", "quiet", "--set", "name=envrun", "norms"])
        .env("SZEGO_LAB_OUT", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("envrun/norms.csv").is_file());
}
