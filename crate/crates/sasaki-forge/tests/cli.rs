//! End-to-end tests of the `sasaki-forge` binary: exit codes, report
//! content, CSV grids, and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sasaki-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_json(dir: &Path, name: &str) -> serde_json::Value {
    let text = std::fs::read_to_string(dir.join(name)).expect("report exists");
    serde_json::from_str(&text).expect("valid json")
}

#[test]
fn reeb_minimize_quadrant_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "reeb-minimize",
        "--preset",
        "quadrant",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rep = read_json(dir.path(), "reeb_minimize.json");
    let xi = rep["xi"].as_array().unwrap();
    assert!((xi[0].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((xi[1].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(rep["residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(rep["regularity"]["type"], "rational");
    assert!(rep["tolerances"]["barycenter_residual"].as_f64().unwrap() == 1e-10);
}

#[test]
fn profile_ke_emits_grid_with_known_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "profile-ke",
        "--m",
        "1",
        "--p",
        "2",
        "--k",
        "2",
        "--grid",
        "0:10:100",
        "--format",
        "both",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rep = read_json(dir.path(), "profile_ke.json");
    assert!((rep["e_c0"].as_f64().unwrap() - 0.5).abs() < 1e-6);

    let grid = std::fs::read_to_string(dir.path().join("grid.csv")).unwrap();
    let mut lines = grid.lines();
    assert_eq!(lines.next().unwrap(), "tau,phi,dphi,d2phi,residual");
    let row_at_one = grid
        .lines()
        .find(|l| l.starts_with("1.0000000000000000e0,"))
        .expect("tau = 1 row");
    let phi: f64 = row_at_one.split(',').nth(1).unwrap().parse().unwrap();
    assert!((phi - 1.5).abs() < 1e-12);

    let coords = std::fs::read_to_string(dir.path().join("coords.csv")).unwrap();
    assert!(coords.starts_with("t,tau,F,phi\n"));
    assert!(coords.lines().count() > 50);
}

#[test]
fn soliton_without_mu_is_a_validation_error() {
    let out = run(&["profile-soliton", "--m", "1", "--kappa", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("mu"), "stderr: {msg}");
}

#[test]
fn unknown_flag_is_a_validation_error() {
    let out = run(&[
        "profile-ke",
        "--m",
        "1",
        "--p",
        "2",
        "--k",
        "2",
        "--frob",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn shrinking_pipeline_reports_solved_mu() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "full-pipeline",
        "--preset",
        "quadrant",
        "--p",
        "2",
        "--k",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rep = read_json(dir.path(), "pipeline.json");
    assert!((rep["mu"].as_f64().unwrap() - 2.0_f64.sqrt()).abs() < 1e-12);
    assert_eq!(rep["profile"]["family"], "shrinking");
    assert_eq!(rep["pass"], true);
}

#[test]
fn ricci_flat_pipeline_passes_with_decay_block() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "full-pipeline",
        "--preset",
        "quadrant",
        "--p",
        "2",
        "--k",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rep = read_json(dir.path(), "pipeline.json");
    assert!(
        rep["verification"]["einstein_identity_max_scaled"]
            .as_f64()
            .unwrap()
            < 1e-10
    );
    assert!((rep["decay"]["first_constant"].as_f64().unwrap() - 1.0).abs() < 0.01);
    assert!((rep["e_c0"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert_eq!(rep["homothetic"]["exact"], true);
}

#[test]
fn del_pezzo_pipeline_flags_irrational_direction() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "full-pipeline",
        "--preset",
        "delpezzo1",
        "--p",
        "1",
        "--k",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rep = read_json(dir.path(), "pipeline.json");
    assert_eq!(rep["reeb"]["regularity"]["type"], "irrational");
    assert_eq!(
        rep["reeb"]["regularity"]["denominator_bound"].as_u64(),
        Some(10_000)
    );
    assert!((rep["e_c0"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
}

#[test]
fn verify_passes_for_steady_soliton() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "verify",
        "--profile",
        "soliton",
        "--m",
        "1",
        "--kappa",
        "2.0",
        "--mu",
        "-1.0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rep = read_json(dir.path(), "verify.json");
    assert_eq!(rep["pass"], true);
    assert!(
        rep["verification"]["soliton_identity_max_scaled"]
            .as_f64()
            .unwrap()
            < 1e-10
    );
}

#[test]
fn verify_accepts_profile_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("prof.json");
    std::fs::write(&spec, r#"{"type": "soliton", "m": 1, "p": 2, "k": 1}"#).unwrap();
    let out = run(&[
        "verify",
        "--profile-file",
        spec.to_str().unwrap(),
        "--format",
        "both",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rep = read_json(dir.path(), "verify.json");
    assert_eq!(rep["profile"]["family"], "shrinking");
    assert!((rep["profile"]["mu"].as_f64().unwrap() - 2.0_f64.sqrt()).abs() < 1e-12);

    let table = std::fs::read_to_string(dir.path().join("residuals.csv")).unwrap();
    assert!(table.starts_with("tau,ode_residual,identity_transverse,identity_vertical\n"));
    assert_eq!(table.lines().count(), 201);
}

#[test]
fn asymptotics_report_orders() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "asymptotics",
        "--m",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rep = read_json(dir.path(), "asymptotics.json");
    assert!((rep["decay"]["first_order"].as_f64().unwrap() + 4.0).abs() < 0.04);
    assert!((rep["decay"]["second_order"].as_f64().unwrap() + 6.0).abs() < 0.12);
    assert_eq!(rep["pass"], true);
}

#[test]
fn cone_file_input_matches_preset() {
    let dir = tempfile::tempdir().unwrap();
    let cone_path = dir.path().join("cone.json");
    std::fs::write(
        &cone_path,
        r#"{"dim": 3, "normals": [[1,0,0],[1,1,0],[1,1,1],[1,0,1]]}"#,
    )
    .unwrap();
    let out = run(&[
        "cone-analyze",
        "--normals-file",
        cone_path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rep = read_json(dir.path(), "cone_analyze.json");
    assert_eq!(rep["cone"]["gorenstein"], true);
    assert_eq!(rep["cone"]["beta"][0], "1/1");
    assert_eq!(rep["cone"]["rays"].as_array().unwrap().len(), 4);

    let dir2 = tempfile::tempdir().unwrap();
    let out2 = run(&[
        "cone-analyze",
        "--preset",
        "conifold",
        "--out",
        dir2.path().to_str().unwrap(),
    ]);
    assert!(out2.status.success());
    let rep2 = read_json(dir2.path(), "cone_analyze.json");
    assert_eq!(rep["cone"], rep2["cone"]);
}

#[test]
fn malformed_cone_file_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cone_path = dir.path().join("cone.json");
    std::fs::write(&cone_path, r#"{"dim": 3, "normals": [[1,0],[1,1,0]]}"#).unwrap();
    let out = run(&[
        "cone-analyze",
        "--normals-file",
        cone_path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["reeb-minimize", "--preset", "delpezzo1"],
        vec![
            "full-pipeline",
            "--preset",
            "conifold",
            "--p",
            "1",
            "--k",
            "1",
        ],
        vec![
            "profile-soliton",
            "--m",
            "1",
            "--p",
            "2",
            "--k",
            "1",
            "--grid",
            "0:5:50",
            "--format",
            "both",
        ],
    ];
    for case in cases {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        for d in [&d1, &d2] {
            let mut args = case.clone();
            args.push("--out");
            args.push(d.path().to_str().unwrap());
            let out = run(&args);
            assert!(out.status.success(), "{case:?}");
        }
        for entry in std::fs::read_dir(d1.path()).unwrap() {
            let name = entry.unwrap().file_name();
            let a = std::fs::read(d1.path().join(&name)).unwrap();
            let b = std::fs::read(d2.path().join(&name)).unwrap();
            assert_eq!(a, b, "{case:?}: {name:?} differs between runs");
        }
    }
}
