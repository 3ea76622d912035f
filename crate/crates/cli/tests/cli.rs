use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxmeasure"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn ok(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    json(&out)
}

const NU: &str = r#"{"atom_values":{"a":1,"b":2,"c":0.5}}"#;
const F: &str = r#"{"a":3,"b":1,"c":4}"#;

#[test]
fn integrate_fixture() {
    let v = ok(&["integrate", "--measure", NU, "--fn", F]);
    assert_eq!(v["schema"], "1");
    assert_eq!(v["command"], "integrate");
    assert_eq!(v["value"], 3.0);
    assert_eq!(v["evaluator_agreement"], true);
    let v = ok(&["integrate", "--op", "min", "--measure", NU, "--fn", F]);
    assert_eq!(v["value"], 1.0);
    let v = ok(&["integrate", "--measure", NU, "--fn", F, "--set", "c"]);
    assert_eq!(v["value"], 2.0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["integrate", "--measure", NU]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["residual", "--op", "times", "--r", "x", "--s", "1"]).status.code(), Some(2));
    let out = run(&["integrate", "--measure", NU, "--fn", r#"{"a":1,"z":2}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "UnknownElement");
    assert_eq!(run(&["suite"]).status.code(), Some(2));
}

#[test]
fn density_counterexample() {
    // δ_# against ∞·δ_# on two atoms
    let out = run(&["density", "--nu", r#"{"atom_values":[1,1]}"#, "--tau", r#"{"atom_values":["inf","inf"]}"#]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "NoDensity");
}

#[test]
fn density_methods() {
    let nu = r#"{"atom_values":[2,0,6]}"#;
    let tau = r#"{"atom_values":[1,1,3]}"#;
    let a = ok(&["density", "--nu", nu, "--tau", tau]);
    assert_eq!(a["density"]["atom_values"], serde_json::json!({"1": 2.0, "2": 0.0, "3": 2.0}));
    let b = ok(&["density", "--nu", nu, "--tau", tau, "--method", "associated"]);
    assert_eq!(a["density"], b["density"]);
    let c = ok(&["density", "--nu", r#"{"atom_values":[2,3]}"#, "--tau", r#"{"type":"additive","atom_values":[1,0.5]}"#, "--method", "bcj"]);
    assert_eq!(c["density"]["atom_values"], serde_json::json!({"1": 2.0, "2": 3.0}));
}

#[test]
fn check_reports_witness() {
    let v = ok(&["check", "--measure", r#"{"type":"table","values":{"0":1,"1":1,"0+1":3}}"#, "--order", "2"]);
    assert_eq!(v["report"]["maxitive"], false);
    assert!(v["report"]["witnesses"]["maxitive"]["sets"].as_array().is_some_and(|s| !s.is_empty()));
    let out = run(&["check", "--measure", r#"{"type":"table","values":{"0":2,"1":1,"0+1":1}}"#]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "NotMonotone");
    let out = run(&["--no-validate", "check", "--measure", r#"{"type":"table","values":{"0":2,"1":1,"0+1":1}}"#]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn decompose_and_variation() {
    let v = ok(&["decompose", "--measure", r#"{"atom_values":{"x":3,"y":0,"z":1}}"#]);
    assert_eq!(v["atoms"], serde_json::json!(["x", "z"]));
    assert_eq!(v["residual_null"], "y");
    let v = ok(&["variation", "--measure", r#"{"atom_values":[3,0,1]}"#]);
    assert_eq!(v["value"], 4.0);
    assert_eq!(v["brute_force"], 4.0);
}

#[test]
fn condition_fixture() {
    let v = ok(&[
        "condition",
        "--pi",
        r#"{"atom_values":{"1":1,"2":0.5,"3":0.25,"4":1}}"#,
        "--x",
        r#"{"1":2,"2":5,"3":3,"4":1}"#,
        "--sub",
        "1+2|3+4",
        "--x2",
        "[1,0,2,3]",
    ]);
    assert_eq!(v["y"]["atom_values"], serde_json::json!({"1": 2.5, "2": 2.5, "3": 1.0, "4": 1.0}));
    assert_eq!(v["suite"]["all_passed"], true);
}

#[test]
fn condition_lp() {
    let v = ok(&[
        "condition",
        "--lp",
        "--pi",
        r#"{"type":"additive","atom_values":[0.25,0.25,0.25,0.25]}"#,
        "--x",
        "[2,5,3,1]",
        "--sub",
        "1+2|3+4",
    ]);
    assert_eq!(v["lp"]["monotone"], true);
    assert_eq!(v["lp"]["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn residual_command() {
    let v = ok(&["residual", "--op", "plus", "--r", "5", "--s", "3"]);
    assert_eq!(v["residual"], 2.0);
    let v = ok(&["residual", "--op", "min", "--r", "3", "--s", "5", "--verify"]);
    assert_eq!(v["residual"], 3.0);
    assert_eq!(v["exact"], true);
    let v = ok(&["residual", "--op", "times", "--r", "inf", "--s", "inf"]);
    assert_eq!(v["residual"], "inf");
}

#[test]
fn simulate_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let v = ok(&[
        "simulate",
        "--m",
        r#"{"type":"additive","atom_values":{"a":0.2,"b":0.3,"c":0.5}}"#,
        "--n",
        "500",
        "--seed",
        "3",
        "--csv",
        csv.to_str().unwrap(),
        "--fn",
        r#"{"a":1,"b":2,"c":0.5}"#,
    ]);
    assert_eq!(v["set"]["m"], 1.0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("stream,a,b,c"));
    assert_eq!(lines.count(), 500);
}

#[test]
fn suite_runs() {
    let v = ok(&["suite", "--list"]);
    assert!(v["manifest"].as_array().unwrap().len() >= 50);
    let v = ok(&["suite", "integral", "pseudo_mul.galois", "--seed", "3"]);
    assert_eq!(v["run"]["failed"], 0);
    let v = ok(&["suite", "--all"]);
    assert_eq!(v["run"]["all_passed"], true);
}

#[test]
fn reports_are_reingestible() {
    let tau = r#"{"space":{"ground":["p","q","r"]},"atom_values":{"p":1,"q":0,"r":2}}"#;
    let e = ok(&["esssup", "--measure", tau, "--fn", r#"{"p":3,"q":9,"r":1}"#]);
    assert_eq!(e["value"], 3.0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("esssup.json");
    std::fs::write(&path, e.to_string()).unwrap();
    // τ_f fed back as a measure
    let v = ok(&["integrate", "--measure", path.to_str().unwrap(), "--fn", r#"{"p":1,"q":1,"r":1}"#]);
    assert_eq!(v["value"], 3.0);

    let d = ok(&["density", "--nu", r#"{"atom_values":{"p":2,"q":0,"r":6}}"#, "--tau", r#"{"atom_values":{"p":1,"q":1,"r":3}}"#]);
    let dpath = dir.path().join("density.json");
    std::fs::write(&dpath, d.to_string()).unwrap();
    let v = ok(&["integrate", "--measure", r#"{"atom_values":{"p":1,"q":1,"r":3}}"#, "--fn", dpath.to_str().unwrap(), "--set", "r"]);
    assert_eq!(v["value"], 6.0);
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn model_files() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(
        dir.path(),
        "model.json",
        r#"{
          "space": {"ground": ["a", "b", "c", "d"], "atoms": [["a", "b"], ["c"], ["d"]]},
          "measures": {"nu": {"atom_values": {"a": 1, "c": 2, "d": 0.5}}},
          "functions": {"f": {"a": 3, "c": 1, "d": 4}},
          "subalgebras": {"g": "a+b+c|d"}
        }"#,
    );
    let v = ok(&["--model", &model, "integrate", "--measure", "nu", "--fn", "f"]);
    assert_eq!(v["value"], 3.0);
    assert_eq!(v["space"]["atoms"][0], serde_json::json!(["a", "b"]));
    let v = ok(&["--model", &model, "integrate", "--measure", "nu", "--fn", "f", "--set", "c"]);
    assert_eq!(v["value"], 2.0);

    let bad = write(dir.path(), "bad.json", r#"{"space":{"ground":["a"]},"measures":{"nu":{"atom_values":{"zz":1}}}}"#);
    let out = run(&["--model", &bad, "variation", "--measure", "nu"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "UnknownElement");

    let out = run(&["--model", "/nonexistent/model.json", "variation", "--measure", "nu"]);
    assert_eq!(out.status.code(), Some(2));
}
