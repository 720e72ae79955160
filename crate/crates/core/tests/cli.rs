use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_renorm-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn eval(norm: &str, x: &str) -> f64 {
    let o = lab(&["eval", "--norm", norm, "--x", x]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o).trim().parse().unwrap()
}

#[test]
fn eval_examples() {
    assert!((eval("hull", "1.41421356,0,0") - 1.0).abs() < 1e-6);
    assert_eq!(eval("theta", "0,1,0"), 4.0);
    assert!((eval("final", "0,0,1") - 1.125f64.sqrt()).abs() < 1e-12);
    assert!((eval("split", "3,4,0") - 5.0).abs() < 1e-12);
    assert!((eval("l1", "1,0") - 2.0).abs() < 1e-12);
    assert!((eval("final", "-1.41421356,0,0,0") - 0.99999999832).abs() < 1e-9);
}

#[test]
fn malformed_input_exits_with_two() {
    assert_eq!(
        lab(&["eval", "--norm", "hull", "--x", "1,abc"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lab(&["eval", "--norm", "base", "--x", "1,NaN"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(lab(&["suite", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(
        lab(&["suite", "kadec", "--dim", "2"]).status.code(),
        Some(2)
    );
}

fn strip_volatile(mut v: Value) -> Value {
    let obj = v.as_object_mut().unwrap();
    obj.remove("timestamp");
    obj.remove("runtime_ms");
    v
}

#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let o = lab(&[
            "suite",
            "kadec",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v["suite"], "kadec");
        assert!(v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .all(|r| r["status"] == "pass"));
        runs.push(strip_volatile(v));
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn witness_table_as_csv() {
    let o = lab(&["suite", "lur-witness", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[0], "n");
    assert_eq!(lines.count(), 20);
}

#[test]
fn failing_suite_exits_with_one() {
    let o = lab(&["suite", "gateaux", "--points", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["status"] == "fail"));
}

#[test]
fn oracle_and_l1_suites_pass() {
    assert_eq!(
        lab(&["suite", "oracle", "--dim", "3", "--points", "100"])
            .status
            .code(),
        Some(0)
    );
    let o = lab(&["suite", "l1", "--nrange", "2:1000", "--samples", "10000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
