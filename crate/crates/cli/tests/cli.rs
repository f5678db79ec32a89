use serde_json::{json, Value};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pavforge")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (Value, i32) {
    let o = run(args);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{}: {}", e, String::from_utf8_lossy(&o.stdout)));
    (v, o.status.code().unwrap())
}

#[test]
fn eval_function_field() {
    let (v, code) = report(&["eval", "--field", "Q(T)", "--pav", r#"{"kind":"ultra","place":"T-2","c":"1"}"#, "--expr", "(T-2)^3/(T+1)"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"value": {"kind": "exp", "q_num": -3, "q_den": 1}}));
}

#[test]
fn degree_sum_gaussian() {
    let (v, code) = report(&["degree-sum", "--base", r#"{"kind":"ultradeg","p":5}"#, "--ext", "Q(i)"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"sum": "1"}));
}

#[test]
fn zero_denominator_is_a_syntax_error() {
    let (v, code) = report(&["eval", "--field", "Q", "--pav", r#"{"kind":"arch"}"#, "--expr", "1/0"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "SyntaxError");
    assert_eq!(v["error"]["pos"], 1);
}

#[test]
fn syntax_error_carries_position() {
    let (v, code) = report(&["eval", "--field", "Q", "--pav", r#"{"kind":"arch"}"#, "--expr", "1/(2"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["pos"], 4);
}

#[test]
fn unknown_suite() {
    let (v, code) = report(&["suite", "nope"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "OutOfRange");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["eval"]).status.code(), Some(2));
    assert_eq!(run(&["--tol", "-1", "suite", "flow-laws"]).status.code(), Some(2));
}

#[test]
fn newton_suite_passes() {
    let (v, code) = report(&["suite", "newton-limsup"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "pass");
    assert!(v["payload"]["arch"]["gap"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn separation_witness_and_failure() {
    let (v, code) = report(&["separate", "--field", "Q", "--x", r#"{"kind":"arch"}"#, "--y", r#"{"kind":"ultra","p":5,"c":"1"}"#]);
    assert_eq!(code, 0);
    assert!(v["f"].is_string() && v["t"].is_string());
    let (v, code) = report(&["separate", "--field", "Q", "--x", r#"{"kind":"arch"}"#, "--y", r#"{"kind":"arch"}"#]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "NotSeparated");
}

#[test]
fn extension_orbit_is_transitive() {
    let (v, code) = report(&["extend", "--base", r#"{"kind":"ultra","p":5,"c":"1"}"#, "--ext", "Q(i)", "--galois"]);
    assert_eq!(code, 0);
    assert_eq!(v["extensions"].as_array().unwrap().len(), 2);
    assert_eq!(v["orbit"]["transitive"], true);
}

#[test]
fn density_csv() {
    let o = run(&["density", "--z", "0", "--c", "1", "--n", "3", "--csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("n,fn_id,value,target,gap"));
}

#[test]
fn output_is_deterministic() {
    let args = ["suite", "separation"];
    let a = run(&args).stdout;
    let b = Command::new(env!("CARGO_BIN_EXE_pavforge")).args(args).env("RAYON_NUM_THREADS", "3").output().unwrap().stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("pavforge-out-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = run(&["--out", p, "degree-sum", "--base", r#"{"kind":"ultradeg","p":5}"#, "--ext", "Q(i)"]);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v, json!({"sum": "1"}));
}
