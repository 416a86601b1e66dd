use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("modcat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Runs the binary; returns exit code, parsed stdout and raw stdout.
fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_modcat")).args(args).arg("-q").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v, text)
}

fn ok(args: &[&str]) -> Value {
    let (code, v, text) = run(args);
    assert_eq!(code, 0, "{args:?} failed: {text}");
    v
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gauss_sum_of_norm_form() {
    let v = ok(&["gauss", "--form", p(&data("norm2.json")), "--sign", "plus"]);
    assert_eq!(v, json!({"tau": "-2"}));
    let v = ok(&["gauss", "--form", p(&data("toric2.json")), "--sign", "minus"]);
    assert_eq!(v, json!({"tau": "2"}));
    // τ on Z/3 with q(1) = 1/3 is 1 + 2e(1/3) = i√3
    let v = ok(&["gauss", "--form", p(&data("z3.json"))]);
    assert_eq!(v["tau"]["conductor"], json!(3));
}

#[test]
fn classify_double_of_z2() {
    let d = tmp("double_z2.json");
    ok(&["double", "--group", p(&data("z2.json")), "--output", p(&d)]);
    let v = ok(&["classify", "--data", p(&d), "-p", "2"]);
    assert_eq!(v["verdict"], "CpPlus");
    assert_eq!(v["tau_plus"], "2");

    let v = ok(&["classify", "--form", p(&data("norm2.json"))]);
    assert_eq!(v["verdict"], "CpMinus");
    assert_eq!(v["witt_class"], "CpMinusCompatible");
    let v = ok(&["classify", "--form", p(&data("z3.json"))]);
    assert_eq!(v["verdict"], "FailsCriterion(1)");
}

#[test]
fn twisted_double_with_fusion() {
    let v = ok(&["double", "--group", p(&data("z2.json")), "--omega", p(&data("w_z2.json")), "--fusion"]);
    assert_eq!(v["schema"], "modcat/modular-data@1");
    let mut twists: Vec<String> = v["twists"].as_array().unwrap().iter().map(|t| t.as_str().unwrap().to_string()).collect();
    twists.sort();
    assert_eq!(twists, ["0/1", "0/1", "1/4", "3/4"]);
    // semion × antisemion: every fusion coefficient is 0 or 1, 16 nonzero entries
    assert_eq!(v["fusion"].as_array().unwrap().len(), 16);
}

fn round_trip(gamma: &str, p_: &str, n: &str, omega: &str) {
    let l = tmp(&format!("lift_{gamma}"));
    let e = tmp(&format!("ext_{gamma}"));
    ok(&["lift", "--gamma", p(&data(gamma)), "-p", p_, "-n", n, "--omega", p(&data(omega)), "--output", p(&l)]);
    let ext = ok(&["extend", "--lift", p(&l), "--output", p(&e)]);
    let ext: Value = if ext.is_null() { serde_json::from_str(&std::fs::read_to_string(&e).unwrap()).unwrap() } else { ext };
    assert!(ext["table"].is_array());
    let v = ok(&["associator", "--extension", p(&e)]);
    assert_eq!(v["cohomologous"], true);
    assert!(v["witness"].is_object());
    assert_eq!(v["omega"]["values"], serde_json::from_str::<Value>(&std::fs::read_to_string(data(omega)).unwrap()).unwrap()["values"]);
}

#[test]
fn lift_extend_associator_round_trip() {
    round_trip("z2.json", "2", "1", "w_z2.json");
    round_trip("z4.json", "2", "1", "w_z4.json");
}

#[test]
fn associator_detects_a_different_class() {
    let l = tmp("lift_zero");
    let e = tmp("ext_zero");
    ok(&["lift", "--gamma", p(&data("z2.json")), "-p", "2", "-n", "1", "--omega", p(&data("w_z2.json")), "--output", p(&l)]);
    ok(&["extend", "--lift", p(&l), "--output", p(&e)]);
    let v = ok(&["associator", "--extension", p(&e), "--omega", p(&data("w_z2_zero.json"))]);
    assert_eq!(v["cohomologous"], false);
    assert!(v["witness"].is_null());
}

#[test]
fn reruns_are_byte_identical() {
    let g = data("d8.json");
    let args = ["double", "--group", p(&g)];
    let (_, _, a) = run(&args);
    let (_, _, b) = run(&args);
    assert_eq!(a, b);
    assert!(a.contains("\"labels\""));
}

#[test]
fn witt_and_pointed() {
    let v = ok(&["witt", "--form", p(&data("toric2.json"))]);
    assert_eq!(v["class"], "CpPlusCompatible");
    assert_eq!(v["witness"]["chain"].as_array().unwrap().len(), 1);
    let v = ok(&["witt", "--form", p(&data("norm2.json"))]);
    assert_eq!(v["class"], "CpMinusCompatible");
    assert!(v["iso"].is_array());
    let v = ok(&["pointed", "--form", p(&data("toric2.json"))]);
    assert_eq!(v["labels"].as_array().unwrap().len(), 4);
}

#[test]
fn cohomology_of_cyclic_groups() {
    let v = ok(&["cohomology", "--module", p(&data("z2_trivial.json")), "-n", "3"]);
    assert_eq!(v["invariant_factors"], json!([2]));
    assert_eq!(v["representatives"][0]["schema"], "modcat/cochain@1");
    let v = ok(&["cohomology", "--module", p(&data("z2_swap.json")), "-n", "2"]);
    assert_eq!(v["order"], 1);
}

#[test]
fn heisenberg_model() {
    let v = ok(&["heisenberg", "-p", "3", "-m", "2"]);
    assert_eq!(v["order"], 81);
    assert_eq!(v["center"].as_array().unwrap().len(), 9);
    assert_eq!(v["radical"].as_array().unwrap().len(), 9);
    assert!(v.get("table").is_none());
    let v = ok(&["heisenberg", "-p", "2", "-m", "2", "--table"]);
    assert_eq!(v["table"].as_array().unwrap().len(), 16);
}

#[test]
fn obstruction_of_honest_extension() {
    let v = ok(&["obstruct", "--outer-action", p(&data("oa_d8.json"))]);
    assert_eq!(v["K"], json!([0, 2]));
    assert_eq!(v["omega"]["trivial"], true);
    assert_eq!(v["beta"]["trivial"], true);
    assert!(v["honest_extension"]["eta"].is_object());
    let v = ok(&["obstruct", "--outer-action", p(&data("oa_d8_inner.json"))]);
    assert_eq!(v["N"]["embedding"], json!([0, 2]));
}

fn error_of(args: &[&str], code: i32) -> Value {
    let (c, v, text) = run(args);
    assert_eq!(c, code, "{args:?}: {text}");
    let e = &v["error"];
    assert!(e["code"].is_string() && e["message"].is_string() && e["context"].is_object(), "{text}");
    e.clone()
}

#[test]
fn malformed_input_exits_with_2() {
    let e = error_of(&["gauss", "--form", p(&data("z2.json"))], 2);
    assert_eq!(e["code"], "MalformedInput");
    assert!(e["context"]["file"].is_string());
    error_of(&["gauss"], 2);
    error_of(&["gauss", "--form", "/nonexistent.json"], 2);
    let bad = tmp("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    error_of(&["gauss", "--form", p(&bad)], 2);
    std::fs::write(&bad, r#"{"schema":"modcat/form@1","group":{"cyclic":[2]},"q":{"(0)":"x","(1)":"1/4"}}"#).unwrap();
    error_of(&["gauss", "--form", p(&bad)], 2);
}

#[test]
fn domain_errors_exit_with_1() {
    let e = error_of(&["heisenberg", "-p", "2", "-m", "1"], 1);
    assert_eq!(e["code"], "DegenerateModel");
    let e = error_of(&["heisenberg", "-p", "4", "-m", "2"], 1);
    assert_eq!(e["code"], "NotPrime");
    let e = error_of(&["heisenberg", "-p", "2", "-m", "6"], 1);
    assert_eq!(e["code"], "CapExceeded");
    // raising a cap above its ceiling is refused, lowering it applies
    let e = error_of(&["heisenberg", "-p", "2", "-m", "2", "--max-order", "4096"], 1);
    assert_eq!(e["code"], "CapExceeded");
    let e = error_of(&["double", "--group", p(&data("d8.json")), "--max-order", "4"], 1);
    assert_eq!(e["code"], "CapExceeded");
    let bad = tmp("odd.json");
    std::fs::write(&bad, r#"{"schema":"modcat/form@1","group":{"cyclic":[2]},"q":{"(0)":"0","(1)":"0"}}"#).unwrap();
    let e = error_of(&["gauss", "--form", p(&bad)], 1);
    assert_eq!(e["code"], "Degenerate");
    let e = error_of(&["lift", "--gamma", p(&data("z4.json")), "-p", "2", "-n", "1", "--omega", p(&data("w_z4_bad.json"))], 1);
    assert_eq!(e["code"], "NotACocycle");
}
