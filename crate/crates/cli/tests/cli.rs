use assert_cmd::Command;
use serde_json::Value;
use std::fs;

fn orbitdepth() -> Command {
    let mut cmd = Command::cargo_bin("orbitdepth").unwrap();
    cmd.env_remove("OUTPUT_DIR");
    cmd
}

fn stdout_json(cmd: &mut Command) -> Value {
    let out = cmd.assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).expect("stdout is JSON")
}

#[test]
fn malformed_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"t0": 0.36, "no_such_key": 1}"#).unwrap();
    orbitdepth()
        .args(["--config", cfg.to_str().unwrap(), "verify", "orbit"])
        .assert()
        .code(2);

    fs::write(&cfg, r#"{"t0": 0.9}"#).unwrap();
    orbitdepth()
        .args(["--config", cfg.to_str().unwrap(), "verify", "orbit"])
        .assert()
        .code(2);
}

#[test]
fn unparsable_word_is_a_usage_error() {
    orbitdepth()
        .args(["orbit", "var", "--word", "g q"])
        .assert()
        .code(2);
}

#[test]
fn verify_orbit_writes_a_passing_json_report() {
    let dir = tempfile::tempdir().unwrap();
    orbitdepth()
        .args([
            "--output-dir",
            dir.path().to_str().unwrap(),
            "verify",
            "orbit",
        ])
        .assert()
        .success();
    let report: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report-orbit.json")).unwrap())
            .unwrap();
    assert_eq!(report["pass"], Value::Bool(true));
    let records = report["records"].as_array().unwrap();
    assert!(records.len() >= 7);
    assert!(records.iter().all(|r| r["pass"] == Value::Bool(true)));
    assert_eq!(report["manifest"]["seed"], 20_240_611);
}

#[test]
fn output_dir_env_wins_over_flag() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    orbitdepth()
        .env("OUTPUT_DIR", env_dir.path())
        .args([
            "--output-dir",
            flag_dir.path().to_str().unwrap(),
            "verify",
            "orbit",
            "--format",
            "csv",
        ])
        .assert()
        .success();
    assert!(env_dir.path().join("report-orbit.csv").exists());
    assert!(!flag_dir.path().join("report-orbit.csv").exists());
}

#[test]
fn verify_repr_fails_on_the_stated_corner_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("repr.csv");
    orbitdepth()
        .args([
            "verify",
            "repr",
            "--k",
            "2",
            "--samples",
            "10",
            "--format",
            "csv",
            "--out",
            out.to_str().unwrap(),
        ])
        .assert()
        .code(1);
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let headers = rdr.headers().unwrap().clone();
    let id = headers.iter().position(|h| h == "id").unwrap();
    let pass = headers.iter().position(|h| h == "pass").unwrap();
    let failing: Vec<String> = rdr
        .records()
        .map(|r| r.unwrap())
        .filter(|r| &r[pass] != "true")
        .map(|r| r[id].to_string())
        .collect();
    assert_eq!(failing, ["repr.stated_corner.k1", "repr.stated_corner.k2"]);
}

#[test]
fn falsified_flagship_is_order_two_nonzero() {
    let v = stdout_json(orbitdepth().args(["mel", "classify", "--a2", "t^2"]));
    assert_eq!(v["classification"]["tag"], "ORDER2_NONZERO");
    let v = stdout_json(orbitdepth().args(["mel", "classify"]));
    assert_eq!(v["classification"]["tag"], "LENGTH3");
}

#[test]
fn flagship_mv3_is_t_squared() {
    let v = stdout_json(orbitdepth().args(["mel", "mv", "--i", "3"]));
    assert_eq!(v["value"], "t^2");
}

#[test]
fn hamiltonian_center_is_preserved() {
    orbitdepth()
        .args([
            "num",
            "center-check",
            "--lambda",
            "0",
            "--c1",
            "1",
            "--lambda1",
            "1",
        ])
        .assert()
        .success();
}

#[test]
fn fit_writes_samples_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("samples.csv");
    orbitdepth()
        .env("OUTPUT_DIR", dir.path())
        .args([
            "--plots",
            "num",
            "fit",
            "--word",
            "g",
            "--samples-csv",
            samples.to_str().unwrap(),
        ])
        .assert()
        .success();
    assert!(samples.exists());
    assert!(dir.path().join("fit.svg").exists());
}
