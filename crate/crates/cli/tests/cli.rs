use std::path::PathBuf;
use std::process::{Command, Output};

use higherlim::diagram::{random_instance, RandomParams};
use higherlim::exactla::PrimeField;
use higherlim::instance::InstanceFile;

fn instance(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_higherlim")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn circle_with_both_backends() {
    let o = run(&["compute", instance("circle.json").to_str().unwrap(), "--method", "both"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("H^0=1 H^1=1; backends agree"));
}

#[test]
fn labelling_figure() {
    let dot = tempfile::NamedTempFile::new().unwrap();
    let o = run(&["label", instance("fig_labelling.json").to_str().unwrap(), "--dot", dot.path().to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    let labels: Vec<&str> = text.lines().filter_map(|l| l.split("B=").nth(1)).map(|s| &s[..1]).collect();
    assert_eq!(labels, ["0", "1", "1", "1", "1", "1", "1", "2", "2"]);
    assert!(text.ends_with("sup B = 2\n"));
    let dot = std::fs::read_to_string(dot.path()).unwrap();
    assert!(dot.contains("\"p8\" [label=\"p8 (d=4, B=2)\"]"));
    assert_eq!(dot.matches("->").count(), 10);
    assert_eq!(dot.matches("dashed").count(), 2);
}

#[test]
fn zero_chain_report() {
    let o = run(&["compute", instance("chain3_zero.json").to_str().unwrap(), "--method", "fibrant"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("H^0=1"));
    let top = text.lines().find(|l| l.starts_with("2 ")).unwrap();
    assert!(top.contains("truncated") && top.contains("[3, 2]"), "{top}");
}

#[test]
fn json_mode_and_at() {
    let o = run(&["--json", "compute", instance("circle_with_top.json").to_str().unwrap(), "--at", "t", "--method", "both"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["higher_limits"], serde_json::json!([1, 1]));
    assert_eq!(v["field"], "Fp:5");
}

#[test]
fn input_errors_exit_with_one() {
    let o = run(&["compute", instance("circle.json").to_str().unwrap(), "--at", "nowhere"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nowhere"));

    let bad = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(bad.path(), r#"{"poset": {"elements": ["a", "b", "c"], "covers": [["a","b"],["b","c"],["a","c"]]}}"#).unwrap();
    let o = run(&["label", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`a` < `c`"));
}

#[test]
fn random_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = run(&["random", "--seed", "11", "--field", "Fp:5", "--max-elements", "9", "-o", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let f5 = PrimeField::new(5).unwrap();
    let parsed = InstanceFile::from_json(&text).unwrap().diagram(&f5).unwrap();
    let params = RandomParams { max_elements: 9, max_dim: 3, atoms: 5, max_layers: 5, ..RandomParams::default() };
    assert_eq!(parsed, random_instance(&f5, 11, &params));
}

#[test]
fn check_is_reproducible() {
    let args = ["check", "--trials", "12", "--seed", "40", "--max-elements", "8"];
    let a = run(&args);
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(stdout(&a), "12/12 trials passed\n");
    assert_eq!(stdout(&run(&args)), stdout(&a));
}
