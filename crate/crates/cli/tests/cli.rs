use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_stochgrav");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).args(args).current_dir(dir).output().expect("binary runs")
}

fn code(dir: &Path, args: &[&str]) -> i32 {
    run(dir, args).status.code().expect("exited normally")
}

fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(d, &["background", "n_modes=3", "f_min_hz=5", "f_max_hz=1", "rms=1e-6", "seed=1"]), 2);
    assert_eq!(code(d, &["background", "n_modes=3", "f_min_hz=1", "f_max_hz=5", "seed=1"]), 2);
    assert_eq!(code(d, &["bell", "model=cosine-projection", "method=montecarlo", "n=50"]), 2);
    assert_eq!(code(d, &["bell", "model=local-realist"]), 2);
    assert_eq!(code(d, &["bell", "a=45deg"]), 2);
    assert_eq!(code(d, &["deviate", "r=1e-10", "dt=1"]), 2);
    assert_eq!(code(d, &["twoslit", "screen_distance=1e-6"]), 2);
    assert_eq!(code(d, &["twoslit", "no_such_key=1"]), 2);
    assert_eq!(code(d, &["twoslit", "sigma=1", "sigma=2"]), 2);
    assert_eq!(code(d, &["geometry", "--workers", "0"]), 2);
    assert_eq!(code(d, &["teleport"]), 2);
    assert_eq!(code(d, &["report", "--config", "missing.cfg"]), 2);
    // Nothing is written before validation fails.
    assert_eq!(fs::read_dir(d).unwrap().count(), 0);
}

#[test]
fn error_goes_to_stderr_on_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["bell", "model=nope"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(out.stdout.is_empty());
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: "));
}

#[test]
fn config_file_is_overridden_by_pairs_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("run.cfg"), "# bell run\nmodel=deterministic-sign\nmethod=montecarlo\nn=1000\nseed=1\n").unwrap();
    assert_eq!(code(d, &["bell", "--config", "run.cfg", "n=2000", "--seed", "9"]), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("bell.json")).unwrap()).unwrap();
    assert_eq!(v["n_samples"], 2000);
    assert_eq!(v["seed"], 9);
    assert_eq!(v["model"], "deterministic-sign");
    assert_eq!(v["config"]["n"], "2000");
}

#[test]
fn bell_record_carries_result_fields() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["bell", "model=deterministic-sign"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("s_value=1.000000"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("bell.json")).unwrap()).unwrap();
    for field in ["settings", "model", "method", "n_samples", "seed", "correlations", "s_value", "std_error", "bound", "pass"] {
        assert!(v.get(field).is_some(), "missing {field}");
    }
    assert_eq!(v["correlations"].as_array().unwrap().len(), 4);
    assert_eq!(v["pass"], true);
}

#[test]
fn zero_amplitude_background_matches_coherent_profile() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let common = ["n_realizations=500", "seed=4", "screen_points=401"];
    let mut a = vec!["twoslit", "model=gaussian", "sigma=0", "--output", "a.csv"];
    a.extend(common);
    let mut b = vec!["twoslit", "model=background", "bg_rms=0", "--output", "b.csv"];
    b.extend(common);
    assert_eq!(code(d, &a), 0);
    assert_eq!(code(d, &b), 0);
    let ra = data_rows(&fs::read_to_string(d.join("a.csv")).unwrap());
    let rb = data_rows(&fs::read_to_string(d.join("b.csv")).unwrap());
    assert_eq!(ra, rb);
    let run: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("b.csv.run.json")).unwrap()).unwrap();
    assert!((run["visibility"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
}

#[test]
fn flat_spacetime_keeps_separation_constant() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(dir.path(), &["deviate", "r=0", "ell0=2.5", "steps=200"]), 0);
    let rows = data_rows(&fs::read_to_string(dir.path().join("deviate.csv")).unwrap());
    assert_eq!(rows.len(), 201);
    assert!(rows.iter().all(|r| r[1] == 2.5 && r[2] == 0.0));
}

#[test]
fn constant_tidal_reports_small_energy_drift() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["deviate", "r=4.4e-16", "dt=0.001", "steps=5000"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let drift: f64 = stdout.lines().find_map(|l| l.strip_prefix("energy_drift=")).unwrap().parse().unwrap();
    assert!(drift < 1e-6, "{drift}");
}

#[test]
fn ensemble_file_drives_deviation() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(d, &["background", "n_modes=20", "f_min_hz=1", "f_max_hz=4", "rms=1e-6", "seed=2", "--output", "ens.json"]), 0);
    let out = run(d, &["deviate", "tidal=ensemble", "ensemble=ens.json", "steps=100", "phase_output=phi.csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let phi = data_rows(&fs::read_to_string(d.join("phi.csv")).unwrap());
    assert_eq!(phi.len(), 101);
    assert!(phi.windows(2).all(|w| w[1][1] >= w[0][1]));

    fs::write(d.join("broken.json"), "{\"seed\": 1}").unwrap();
    assert_eq!(code(d, &["deviate", "tidal=ensemble", "ensemble=broken.json"]), 2);
}

#[test]
fn geometry_self_checks_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["geometry", "--format", "json", "--output", "g.json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("g.json")).unwrap()).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["report", "bell_samples=100000", "n_realizations=20000", "bound_settings=1000"];
    let first = run(d, &args);
    let second = run(d, &args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}
