use std::f64::consts::{FRAC_PI_2, LN_2};
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qmaxent(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmaxent"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn example1_eigencurves_cross_at_quarter_turn() {
    let dir = TempDir::new().unwrap();
    let out = qmaxent(&["--builtin", "example1", "--task", "eigencurves"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("eigencurves.csv"));
    assert_eq!(header, ["angle", "lambda1", "lambda2", "lambda3"]);
    assert_eq!(rows.len(), 720);
    // 720-point grid: row 180 is exactly π/2
    let at = &rows[180];
    assert!((num(&at[0]) - FRAC_PI_2).abs() < 1e-15);
    assert!((num(&at[1]) - num(&at[2])).abs() < 1e-12);
    for i in [170, 179, 181, 190] {
        assert!(num(&rows[i][2]) - num(&rows[i][1]) > 1e-3);
    }
}

#[test]
fn example2_groundstate_scan_traces_the_circle() {
    let dir = TempDir::new().unwrap();
    let out = qmaxent(&["--builtin", "example2", "--task", "groundstate-scan"], dir.path());
    assert!(out.status.success());
    let (header, rows) = read_csv(&dir.path().join("groundstate.csv"));
    assert_eq!(header, ["angle", "degeneracy", "alpha1", "alpha2", "entropy"]);
    for row in &rows {
        let a = num(&row[0]);
        assert!((num(&row[2]) + a.cos()).abs() < 1e-8);
        assert!((num(&row[3]) + a.sin()).abs() < 1e-8);
    }
    // the degenerate ground state at angle π
    assert_eq!(rows[360][1], "2");
    assert!((num(&rows[360][4]) - LN_2).abs() < 1e-12);
}

#[test]
fn ghz3_correlation_in_nats_and_bits() {
    let dir = TempDir::new().unwrap();
    let out = qmaxent(&["--builtin", "ghz3", "--task", "correlation"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = read_csv(&dir.path().join("correlation.csv"));
    let get = |name: &str| num(&rows.iter().find(|r| r[0] == name).unwrap()[1]);
    assert!((get("C_2") - 2.0 * LN_2).abs() < 1e-6);
    assert!((get("C_3") - LN_2).abs() < 1e-6);
    assert!((get("I") - 3.0 * LN_2).abs() < 1e-9);

    let out = qmaxent(&["--builtin", "ghz3", "--task", "correlation", "--bits"], dir.path());
    assert!(out.status.success());
    let (_, rows) = read_csv(&dir.path().join("correlation.csv"));
    let get = |name: &str| num(&rows.iter().find(|r| r[0] == name).unwrap()[1]);
    assert!((get("C_2") - 2.0).abs() < 1e-6);
    assert!((get("C_3") - 1.0).abs() < 1e-6);
}

#[test]
fn maxent_from_scenario_file() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("edge.toml");
    fs::write(
        &spec,
        "task = \"maxent\"\nhamiltonians = [\"Z ++ [[1]]\", \"Z ++ [[-1]]\"]\nalpha = [0.0, -1.0]\n",
    )
    .unwrap();
    let out = qmaxent(&["--spec", spec.to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("maxent.json")).unwrap()).unwrap();
    assert_eq!(json["face_chain_ranks"], serde_json::json!([2]));
    assert_eq!(json["dual_parameter"], "boundary");
    assert!((json["entropy"].as_f64().unwrap() - LN_2).abs() < 1e-9);
}

#[test]
fn parse_failures_exit_with_three() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("bad.toml");
    fs::write(&spec, "task = \"maxent\"\nhamiltonians = [\"1.0*XQ\"]\n").unwrap();
    let out = qmaxent(&["--spec", spec.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:23:"));

    let out = qmaxent(&["--builtin", "example7", "--task", "boundary"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let out = qmaxent(&["--builtin", "example1"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn infeasible_expected_value_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("outside.toml");
    fs::write(&spec, "task = \"maxent\"\nbuiltin = \"example2\"\nalpha = [1.5, 0.0]\n").unwrap();
    let out = qmaxent(&["--spec", spec.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn example3_boundary_reports_two_non_exposed_points() {
    let dir = TempDir::new().unwrap();
    let out = qmaxent(&["--builtin", "example3", "--task", "boundary", "--angles", "360"], dir.path());
    assert!(out.status.success());
    let (_, rows) = read_csv(&dir.path().join("non_exposed.csv"));
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert!((num(&row[0]) - 0.5).abs() < 1e-6);
        assert!((num(&row[1]).abs() - 3f64.sqrt() / 2.0).abs() < 1e-6);
    }
    let (header, rows) = read_csv(&dir.path().join("boundary.csv"));
    assert_eq!(header, ["angle", "h", "face_dim", "x0", "y0", "x1", "y1"]);
    assert!(rows.len() >= 360);
}

#[test]
fn example2_boundary_scan_flags_one_jump() {
    let dir = TempDir::new().unwrap();
    let out = qmaxent(&["--builtin", "example2", "--task", "discontinuity"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("discontinuity.csv"));
    assert_eq!(header, ["t", "alpha1", "alpha2", "entropy", "jump_flag"]);
    let flagged: Vec<&Vec<String>> = rows.iter().filter(|r| r[4] == "1").collect();
    assert_eq!(flagged.len(), 1);
    assert!((num(&flagged[0][1]) - 1.0).abs() < 1e-12);
}

#[test]
fn outputs_are_reproducible_for_a_seed() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let args = ["--builtin", "example3", "--task", "pythagorean", "--seed", "7"];
    assert!(qmaxent(&args, a.path()).status.success());
    assert!(qmaxent(&args, b.path()).status.success());
    let x = fs::read(a.path().join("pythagorean.csv")).unwrap();
    let y = fs::read(b.path().join("pythagorean.csv")).unwrap();
    assert_eq!(x, y);
    let (_, rows) = read_csv(&a.path().join("pythagorean.csv"));
    assert_eq!(rows.len(), 50);
    for row in rows {
        assert!(num(&row[4]) <= 1e-7);
    }
}

#[test]
fn thread_cap_is_validated() {
    let dir = TempDir::new().unwrap();
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_qmaxent"))
            .args(["--builtin", "example1", "--task", "groundstate-scan", "--angles", "16", "--out"])
            .arg(dir.path())
            .env("MAXENT_GIBBS_THREADS", v)
            .output()
            .unwrap()
    };
    assert!(run("1").status.success());
    assert_eq!(run("zero").status.code(), Some(3));
}
