use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn cliffqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cliffqm"))
        .args(args)
        .env_remove("CLIFFQM_OUTPUT_ROOT")
        .output()
        .unwrap()
}

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.cfg"))
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn list_shows_bundled_scenarios() {
    let out = cliffqm(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["schrodinger_gaussian", "pauli_superposition", "harmonic_ground", "pauli_free_packet", "gradient_identity"] {
        assert!(text.contains(name), "{name} missing from\n{text}");
    }
    let json: Value = serde_json::from_slice(&cliffqm(&["list", "--json"]).stdout).unwrap();
    let names: Vec<&str> = json.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"schrodinger_gaussian") && names.contains(&"pauli_superposition"));
}

#[test]
fn list_of_empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = cliffqm(&["list", "--json", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(serde_json::from_slice::<Value>(&out.stdout).unwrap(), Value::Array(vec![]));
}

#[test]
fn run_writes_artifacts_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = cliffqm(&["run", "schrodinger_gaussian", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}{}", stdout(&out), stderr(&out));
    let r = report(&out_dir);
    assert_eq!(r["pass"], true);
    assert_eq!(r["status"], "completed");
    let checks = r["checks"].as_object().unwrap();
    assert_eq!(checks.len(), 6);
    for name in ["qhj", "continuity", "torque", "momentum_triple", "energy_triple", "messiah_current"] {
        assert_eq!(checks[name]["pass"], true, "{name}");
    }
    assert_eq!(r["diagnostics"]["trajectories"]["order_preserved"], true);
    let fields = fs::read_to_string(out_dir.join("fields.csv")).unwrap();
    assert!(fields.starts_with("x,rho,momentum_x,q,q1,q2,velocity_x,energy,"));
    assert_eq!(fields.lines().count(), 402);
    let traj = fs::read_to_string(out_dir.join("trajectories.csv")).unwrap();
    assert!(traj.starts_with("seed_id,t,x,truncated_flag\n"));
}

#[test]
fn runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        assert_eq!(cliffqm(&["run", "pauli_superposition", "--out", d.to_str().unwrap()]).status.code(), Some(0));
    }
    for f in ["fields.csv", "trajectories.csv", "report.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f} differs");
    }
    let r = report(&a);
    assert!(r["oracle_agreement"]["momentum_triple"]["max_abs"].as_f64().unwrap() > 0.0);
    assert!(r["residuals"]["spin_transport"].is_object());
}

#[test]
fn output_root_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cliffqm"))
        .args(["run", "gradient_identity"])
        .env("CLIFFQM_OUTPUT_ROOT", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(dir.path().join("gradient_identity").join("report.json").exists());
}

#[test]
fn malformed_config_exits_2_without_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    let text = fs::read_to_string(bundled("schrodinger_gaussian")).unwrap().replace("sigma = 1.0", "sigma = 1.0 oops");
    fs::write(&cfg, text).unwrap();
    let out_dir = dir.path().join("out");
    let out = cliffqm(&["run", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bad.cfg:14:"), "{}", stderr(&out));
    assert!(!out_dir.exists());
}

#[test]
fn invalid_parameters_exit_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("wide.cfg");
    let text = fs::read_to_string(bundled("schrodinger_gaussian")).unwrap().replace("sigma = 1.0", "sigma = 4.0");
    fs::write(&cfg, text).unwrap();
    let out = cliffqm(&["run", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("wide.cfg:11:"), "{}", stderr(&out));
}

#[test]
fn residual_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.cfg");
    let text = fs::read_to_string(bundled("schrodinger_gaussian")).unwrap().replace("[checks.qhj]\nc = 0.73", "[checks.qhj]\nc = 0.0001");
    fs::write(&cfg, text).unwrap();
    let out_dir = dir.path().join("o");
    let out = cliffqm(&["run", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out_dir);
    assert_eq!(r["pass"], false);
    assert_eq!(r["checks"]["qhj"]["pass"], false);
    assert_eq!(r["checks"]["continuity"]["pass"], true);
}

#[test]
fn blow_up_is_reported_as_aborted() {
    let dir = tempfile::tempdir().unwrap();
    let mut table = String::from("# x V\n");
    for i in 0..101 {
        let x = -10.0 + 0.2 * i as f64;
        table.push_str(&format!("{x} {}\n", if i == 50 { "nan" } else { "0" }));
    }
    fs::write(dir.path().join("v.txt"), table).unwrap();
    let cfg = dir.path().join("nan.cfg");
    fs::write(
        &cfg,
        r#"schema_version = 1
name = "nan"
particle = "schrodinger"

[grid]
boundary = "clamped"
axes = [{ min = -10.0, max = 10.0, count = 101 }]

[state]
kind = "gaussian"
center = [0.0]
sigma = 1.0

[potential]
kind = "table"
file = "v.txt"

[evolution]
dt = 0.01
steps = 10
"#,
    )
    .unwrap();
    let out_dir = dir.path().join("o");
    let out = cliffqm(&["run", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out_dir);
    assert_eq!(r["status"], "aborted");
    assert!(r["abort_reason"].as_str().unwrap().contains("blow-up"));
    assert!(!out_dir.join("fields.csv").exists());
}

#[test]
fn sweep_reports_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("sweep");
    let out = cliffqm(&["sweep", "gradient_identity", "--levels", "3", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let r = report(&out_dir);
    let slope = r["sweep"]["slope_checks"]["momentum_triple"]["slope"].as_f64().unwrap();
    assert!((slope - 2.0).abs() <= 0.2, "slope {slope}");
    assert_eq!(r["sweep"]["levels"].as_array().unwrap().len(), 3);
    let csv = fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn sweep_needs_three_levels() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("o");
    let out = cliffqm(&["sweep", "gradient_identity", "--levels", "1", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());
}

#[test]
fn unknown_scenario_is_a_usage_error() {
    assert_eq!(cliffqm(&["run", "no_such_scenario"]).status.code(), Some(2));
    assert_eq!(cliffqm(&["frobnicate"]).status.code(), Some(2));
}
