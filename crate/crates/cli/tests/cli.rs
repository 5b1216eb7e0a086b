use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn cw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cw"))
        .args(args)
        .env_remove("CW_QUAD_TOL")
        .output()
        .expect("cw runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const UNIT_SPHERE: &str = r#"{"label":"unit","segments":[{"type":"arc","center":[0,0],"radius":1,"theta":[-1.5707963267948966,1.5707963267948966]}]}"#;

#[test]
fn report_unit_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "s.json", UNIT_SPHERE);
    let svg = dir.path().join("s.svg");
    let v = json_of(&cw(&["report", &path, "--svg", svg.to_str().unwrap()]));
    assert!((v["area"].as_f64().unwrap() - 4.0 * PI).abs() < 1e-9);
    assert!((v["willmore"].as_f64().unwrap() - 4.0 * PI).abs() < 1e-9);
    let plot = std::fs::read_to_string(svg).unwrap();
    assert!(plot.starts_with("<svg") && plot.contains("unit-circle"));
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "bad.json", "{\"segments\": [");
    assert_eq!(cw(&["report", &path]).status.code(), Some(2));
    let path = write(&dir, "bad2.json", r#"{"segments":[{"type":"helix"}]}"#);
    assert_eq!(cw(&["verify", &path]).status.code(), Some(2));
}

#[test]
fn neck_output_reports_closed_form_area() {
    let dir = tempfile::tempdir().unwrap();
    let sol = json_of(&cw(&["neck", "--r", "0.95"]));
    let a_plus = sol["energies"]["a_plus"].as_f64().unwrap();
    let surface = cw(&["neck", "--r", "0.95", "--emit", "sigma-plus"]);
    let path = write(&dir, "neck.json", &String::from_utf8(json_of(&surface).to_string().into_bytes()).unwrap());
    let rep = json_of(&cw(&["report", &path]));
    assert!((rep["area"].as_f64().unwrap() - a_plus).abs() <= 1e-8 * a_plus);
}

#[test]
fn neck_at_r_one_is_clean_error() {
    let out = cw(&["neck", "--r", "1.0"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside"));
}

#[test]
fn report_round_trip_matches_direct_evaluation() {
    let dir = tempfile::tempdir().unwrap();
    let surface = cw(&["neck", "--r", "0.999", "--emit", "double-sphere"]);
    let path = write(&dir, "ds.json", &String::from_utf8(surface.stdout).unwrap());
    let rep = json_of(&cw(&["report", &path]));
    let direct = confined_willmore::neck::build_double_sphere(0.999, 8.0 * PI, None)
        .unwrap()
        .surface
        .report()
        .unwrap();
    assert!((rep["area"].as_f64().unwrap() - direct.area).abs() <= 1e-12 * direct.area);
    assert!((rep["willmore"].as_f64().unwrap() - direct.willmore).abs() <= 1e-12 * direct.willmore);
}

#[test]
fn verify_passes_on_bump_surface() {
    let dir = tempfile::tempdir().unwrap();
    let surface = cw(&["bump", "--s", "0.1", "--emit", "surface"]);
    let path = write(&dir, "b.json", &String::from_utf8(surface.stdout).unwrap());
    let v = json_of(&cw(&["verify", &path]));
    assert_eq!(v["pass"], Value::Bool(true));
}

#[test]
fn bump_csv_has_header_and_lf() {
    let out = cw(&["bump", "--s", "0.05,0.1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("s,t,area,area_excess,willmore,willmore_excess,slope_partial\n"));
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn sweep_near_sphere_rows_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("sweep.svg");
    let a_max = format!("{}", 4.0 * PI + 0.5);
    let v = json_of(&cw(&["sweep", "--a-min", "4pi", "--a-max", &a_max, "--steps", "11"]));
    for row in v["rows"].as_array().unwrap() {
        let a = row["a"].as_f64().unwrap();
        assert!(row["upper_bump"].as_f64().unwrap() >= a - 1e-9);
    }
    assert!(v["fit"]["r_squared"].as_f64().unwrap() >= 0.99);
    let out = cw(&[
        "sweep", "--a-min", "4pi", "--a-max", &a_max, "--steps", "11", "--format", "svg", "--out",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let plot = std::fs::read_to_string(svg).unwrap();
    assert!(plot.contains("line-w-equals-a") && plot.contains("sqrt-fit"));
}

#[test]
fn optimize_sphere() {
    let v = json_of(&cw(&["optimize", "--area", "4pi"]));
    let w = v["result"]["w_est"].as_f64().unwrap();
    assert!((w / (4.0 * PI) - 1.0).abs() < 5e-3);
}

#[test]
fn quadrature_tolerance_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "s.json", UNIT_SPHERE);
    let out = Command::new(env!("CARGO_BIN_EXE_cw"))
        .args(["report", &path])
        .env("CW_QUAD_TOL", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_cw"))
        .args(["report", &path])
        .env("CW_QUAD_TOL", "1e-6")
        .output()
        .unwrap();
    assert!(out.status.success());
}
