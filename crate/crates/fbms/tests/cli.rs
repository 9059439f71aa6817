use std::path::Path;
use std::process::Command;

use fbms::cli::run;
use fbms::export::RunManifest;
use fbms::report::ReportDocument;

fn fbms(dir: &Path, args: &[&str]) -> i32 {
    let out = dir.to_str().unwrap();
    let argv: Vec<&str> = ["fbms"].iter().chain(args).chain(["--out", out].iter()).copied().collect();
    run(argv)
}

fn report(dir: &Path) -> ReportDocument {
    serde_json::from_slice(&std::fs::read(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn classify_focal_pair() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(fbms(tmp.path(), &["classify", "--m", "2", "--n", "2"]), 0);
    let dir = tmp.path().join("classify-m2-n2");
    let text = std::fs::read_to_string(dir.join("report.json")).unwrap();
    assert!(text.contains(r#""classification":"focal""#));
    let doc = report(&dir);
    assert!(doc.results["eigenvalues"][0]["im"].as_f64().unwrap() > 0.0);
    assert!(dir.join("nullclines.csv").exists());
}

#[test]
fn output_layout_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(fbms(tmp.path(), &["critical-catenoid", "--segments", "16"]), 0);
    let dir = tmp.path().join("critical-catenoid");
    let manifest: RunManifest = serde_json::from_slice(&std::fs::read(dir.join("manifest.json")).unwrap()).unwrap();
    let mut names: Vec<&str> = manifest.files.iter().map(|f| f.path.as_str()).collect();
    names.sort();
    assert_eq!(names, ["mesh.obj", "profile.csv", "report.json"]);
    manifest.verify(&dir).unwrap();
    assert_eq!(manifest.config["segments"], 16);
    assert_eq!(manifest.schema, 1);
}

#[test]
fn wrong_regime_is_a_numeric_failure() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(fbms(tmp.path(), &["family", "--m", "4", "--n", "4", "--k", "1"]), 3);
    assert_eq!(fbms(tmp.path(), &["annulus", "--m", "2", "--n", "2"]), 3);
    assert!(!tmp.path().join("family-m4-n4-k1").exists());
}

#[test]
fn annulus_symmetric_case() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(fbms(tmp.path(), &["annulus", "--m", "4", "--n", "4", "--eps-grid", "32"]), 0);
    let doc = report(&tmp.path().join("annulus-m4-n4-R0.5"));
    let eps = doc.results["eps_bar"].as_f64().unwrap();
    assert!((eps - std::f64::consts::FRAC_PI_2).abs() < 1e-8);
    assert_eq!(doc.parameters["eps_grid"], 32);
}

#[test]
fn validation_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    for args in [
        &["classify", "--m", "1"][..],
        &["classify", "--m", "two"],
        &["family", "--k", "0"],
        &["annulus", "--m", "9", "--n", "3", "--radius", "-1"],
        &["critical-catenoid", "--segments", "4"],
        &["balance", "--quad-nodes", "3"],
        &["family", "--tol-rel", "0"],
        &["nonsense"],
        &["classify", "--unknown-flag", "1"],
        &[],
    ] {
        assert_eq!(fbms(tmp.path(), args), 2, "{args:?}");
    }
    assert_eq!(std::fs::read_dir(tmp.path()).unwrap().count(), 0);
}

#[test]
fn config_file_precedence() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.json");
    std::fs::write(&cfg, r#"{"m": 9, "n": 3, "radius": 0.25, "eps_grid": 40}"#).unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(fbms(tmp.path(), &["annulus", "--config", c, "--radius", "0.5"]), 0);
    let doc = report(&tmp.path().join("annulus-m9-n3-R0.5"));
    assert_eq!(doc.parameters["m"], 9);
    assert_eq!(doc.parameters["eps_grid"], 40);
    assert_eq!(doc.parameters["radius"].as_f64(), Some(0.5));

    std::fs::write(&cfg, r#"{"m": 9, "colour": 3}"#).unwrap();
    assert_eq!(fbms(tmp.path(), &["annulus", "--config", c]), 2);
    assert_eq!(fbms(tmp.path(), &["annulus", "--config", "/nonexistent/run.json"]), 2);
}

#[test]
fn failed_checks_exit_4() {
    let tmp = tempfile::tempdir().unwrap();
    // a residual threshold no computation can meet
    assert_eq!(fbms(tmp.path(), &["family", "--m", "2", "--n", "2", "--k", "1", "--tol-residual", "1e-30"]), 4);
    let doc = report(&tmp.path().join("family-m2-n2-k1"));
    assert!(!doc.passed());
}

#[test]
fn every_subcommand_succeeds() {
    let tmp = tempfile::tempdir().unwrap();
    for args in [
        &["family", "--m", "2", "--n", "5", "--k", "3"][..],
        &["catenoid", "--n", "2"],
        &["catenoid", "--n", "5"],
        &["uniqueness", "--n", "4", "--c-grid", "5"],
        &["balance", "--n", "4"],
    ] {
        assert_eq!(fbms(tmp.path(), args), 0, "{args:?}");
    }
    assert!(tmp.path().join("family-m2-n5-k3/member-3.csv").exists());
    assert!(tmp.path().join("catenoid-n2/free-boundary.obj").exists());
    assert!(!tmp.path().join("catenoid-n5/free-boundary.obj").exists());
}

#[test]
fn binary_runs_verify_all() {
    let tmp = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_fbms"))
        .args(["verify-all", "--out", tmp.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
    let stderr = String::from_utf8_lossy(&status.stderr);
    assert_eq!(stderr.lines().filter(|l| l.starts_with("PASS")).count(), 14);
    let dir = tmp.path().join("verify-all");
    assert!(report(&dir).passed());
    assert!(!dir.join("serialization-scratch").exists());
}

#[test]
fn binary_help_and_bad_flag() {
    let help = Command::new(env!("CARGO_BIN_EXE_fbms")).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_fbms")).args(["family", "--m", "x"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("--m"));
}
