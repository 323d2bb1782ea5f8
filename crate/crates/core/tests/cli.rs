use std::path::Path;
use std::process::{Command, Output};

fn p3c(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_p3c")).args(args).current_dir(dir).output().expect("run p3c")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn recover_worked_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = p3c(&["recover", "--rho1", "2/5", "--rho2", "1/8", "--rho3", "-1/6", "--rho4", "3/2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["beta"], "1");
    assert_eq!(v["alpha_selected"], "-1");
    assert_eq!(v["branch"], "Degenerate");
}

#[test]
fn recover_without_rho4_on_degenerate_branch_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = p3c(&["recover", "--rho1", "2/5", "--rho2", "1/8", "--rho3", "-1/6"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rho4"));
}

#[test]
fn analyze_exact_and_float() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "w.json", r#"{"alpha": -1, "beta": 1}"#);
    let o = p3c(&["analyze", "--input", "w.json", "--output", "r.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["c_values"][0]["closed"], "3");
    assert_eq!(v["c_values"][0]["pass"], true);
    assert_eq!(v["cross_ratios"]["rho2"], "1/8");

    write(dir.path(), "w.toml", "alpha = -1\nbeta = 1\n");
    let o = p3c(&["analyze", "--input", "w.toml", "--mode", "float"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["c_values"][1]["closed"], 12.0);
}

#[test]
fn non_generic_inputs_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a33.json", r#"{"a": {"32": 1, "33": 1, "44": -1}, "b": {"33": 1}}"#);
    let o = p3c(&["analyze", "--input", "a33.json"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("a33"));

    write(dir.path(), "nv.json", r#"{"alpha": "-1/4", "beta": 1}"#);
    let o = p3c(&["analyze", "--input", "nv.json"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("non-versal"));
    let o = p3c(&["trace", "--input", "nv.json"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "w.json", r#"{"alpha": -1, "beta": 1}"#);
    assert_eq!(p3c(&["analyze", "--input", "w.json", "--tol", "0"], dir.path()).status.code(), Some(1));
    assert_eq!(p3c(&["analyze", "--input", "missing.json"], dir.path()).status.code(), Some(1));
    assert_eq!(p3c(&["frobnicate"], dir.path()).status.code(), Some(1));
    write(dir.path(), "bad.json", r#"{"alpha": -1, "beta": 1, "gamma": 2}"#);
    assert_eq!(p3c(&["analyze", "--input", "bad.json"], dir.path()).status.code(), Some(1));
}

#[test]
fn trace_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "w.json", r#"{"alpha": -1, "beta": 1}"#);
    let o = p3c(&["trace", "--input", "w.json", "--grid", "20"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("label,y,x_oracle,x_closed"));
    assert!(text.lines().any(|l| l.starts_with("Delta,")));
}

#[test]
fn atlas_grid_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let o = p3c(&["atlas", "--grid", "100", "--output", "atlas.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("atlas.csv")).unwrap();
    assert_eq!(csv.lines().count(), 100 * 100 + 1);
    assert!(csv.starts_with("alpha,beta,pattern,region"));
    let svg = std::fs::read_to_string(dir.path().join("atlas.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    let audit: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(audit.as_array().is_some_and(|a| !a.is_empty()));
}

#[test]
fn portrait_svg_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.json", r#"{"alpha": 2, "beta": -1}"#);
    let o = p3c(&["portrait", "--input", "s.json", "--output", "p.svg", "--grid", "3", "--box", "0.2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(dir.path().join("p.svg")).unwrap().contains("<polyline"));
    assert!(std::fs::read_to_string(dir.path().join("p.csv")).unwrap().starts_with("curve,x,y"));
}
