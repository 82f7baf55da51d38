use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn alg(dir: &TempDir, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alg")).args(args).current_dir(dir.path()).output().unwrap()
}

fn gen(dir: &TempDir, name: &str, field: &str) -> PathBuf {
    let out = alg(dir, &["gen", name, "--field", field]);
    assert!(out.status.success());
    let p = dir.path().join(format!("{}.alg", name.replace(':', "_")));
    fs::write(&p, out.stdout).unwrap();
    p
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn classify_reports_witness() {
    let d = tempfile::tempdir().unwrap();
    let f = gen(&d, "aflex", "rational");
    let out = alg(&d, &["classify", f.to_str().unwrap(), "--seed", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("descendingly flexible") && text.contains("at (e1, e1, e2) -> 2*e4"), "{text}");
    let v = json(&alg(&d, &["classify", f.to_str().unwrap(), "--json"]));
    assert_eq!(v["descendingly_alternative"]["status"], "fails");
    assert_eq!(v["implications_consistent"], true);
}

#[test]
fn lengths_of_group_algebra() {
    let d = tempfile::tempdir().unwrap();
    let f = gen(&d, "z2n:3", "gf:2");
    let text = fs::read_to_string(&f).unwrap();
    assert!(text.starts_with("# group generators as basis indices: --set 2,3,5"));
    let v = json(&alg(&d, &["length", f.to_str().unwrap(), "--set", "2,3,5", "--json"]));
    assert_eq!(v["length"], 3);
    assert_eq!(v["generating"], true);
    // the whole group basis generates in one step
    let v = json(&alg(&d, &["length", f.to_str().unwrap(), "--set", "basis", "--json"]));
    assert_eq!(v["length"], 1);
    let v = json(&alg(&d, &["diffseq", f.to_str().unwrap(), "--set", "2,3,5", "--json"]));
    assert_eq!(v["d"], serde_json::json!([1, 3, 3, 1]));
}

#[test]
fn set_file_is_read() {
    let d = tempfile::tempdir().unwrap();
    let f = gen(&d, "aflex", "rational");
    let s = d.path().join("s.txt");
    fs::write(&s, "# two generators\n1 0 0 0 0\n0 1 0 0 0\n").unwrap();
    let v = json(&alg(&d, &["length", f.to_str().unwrap(), "--set-file", s.to_str().unwrap(), "--json"]));
    assert_eq!(v["length"], 3);
}

#[test]
fn mixing_mode_needs_a_verdict() {
    let d = tempfile::tempdir().unwrap();
    let f = gen(&d, "squaring", "rational");
    let out = alg(&d, &["diffseq", f.to_str().unwrap(), "--set", "1", "--mode", "mixing"]);
    assert_eq!(out.status.code(), Some(2));
    let out = alg(&d, &["diffseq", f.to_str().unwrap(), "--set", "1", "--json"]);
    assert_eq!(json(&out)["d"], serde_json::json!([0, 1, 1, 0, 1]));
}

#[test]
fn bounds_pass_on_alt_example() {
    let d = tempfile::tempdir().unwrap();
    let f = gen(&d, "aalt", "rational");
    let out = alg(&d, &["bounds", f.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["all_pass"], true);
    assert!(!v["entries"].as_array().unwrap().is_empty());
}

#[test]
fn canonical_subcommand() {
    let d = tempfile::tempdir().unwrap();
    let out = alg(&d, &["canonical", "--variant", "alt", "--word", "(((1 2) 3) 4)"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("(((1 2) 3) 4) == -(((1 2) 4) 3)"), "{}", stdout(&out));
    let f = gen(&d, "aflex", "rational");
    let out = alg(
        &d,
        &["canonical", "--variant", "flex", "--word", "((1 (2 1)) 2)", f.to_str().unwrap(), "--set", "1,2", "--json"],
    );
    let v = json(&out);
    assert_eq!(v["verified"], true);
    assert!(v["shape"].is_string());
    let out = alg(&d, &["canonical", "--variant", "flex", "--word", "(1 2)"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_and_unity() {
    let d = tempfile::tempdir().unwrap();
    let f = gen(&d, "aflex", "rational");
    let v = json(&alg(&d, &["search", f.to_str().unwrap(), "--tries", "8", "--json"]));
    let lb = v["lower_bound"].as_u64().unwrap();
    assert!((1..=3).contains(&lb));
    let h = gen(&d, "spin:2", "rational");
    let v = json(&alg(&d, &["infer-unity", h.to_str().unwrap(), "--json"]));
    assert_eq!(v["declared"], "verified");
    assert_eq!(v["inferred"], serde_json::json!(["1", "0", "0"]));
    let v = json(&alg(&d, &["infer-unity", f.to_str().unwrap(), "--json"]));
    assert_eq!(v["inferred"], Value::Null);
}

#[test]
fn usage_errors_exit_2() {
    let d = tempfile::tempdir().unwrap();
    let bad = d.path().join("bad.alg");
    fs::write(&bad, "field gf 4\ndim 1\n").unwrap();
    let out = alg(&d, &["classify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    assert_eq!(alg(&d, &["classify", "missing.alg"]).status.code(), Some(2));
    assert_eq!(alg(&d, &["frobnicate"]).status.code(), Some(2));
    assert_eq!(alg(&d, &["gen", "nope"]).status.code(), Some(2));
    let f = gen(&d, "aflex", "rational");
    assert_eq!(alg(&d, &["length", f.to_str().unwrap(), "--set", "9"]).status.code(), Some(2));
    assert_eq!(alg(&d, &["exact-length", f.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn failed_verification_exits_1() {
    // M_4 is not descendingly flexible, so the flexible rewriting is wrong there
    let d = tempfile::tempdir().unwrap();
    let f = gen(&d, "matrix:4", "rational");
    let args = ["canonical", "--variant", "flex", "--word", "((1 (2 3)) 4)", f.to_str().unwrap(), "--set", "2,7,12,13"];
    let out = alg(&d, &args);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("NOT verified"));
}

#[test]
fn gen_round_trips_through_classify() {
    let d = tempfile::tempdir().unwrap();
    for (name, field) in [("hull:aflex", "gf:3"), ("cd:2", "rational"), ("matrix:2", "gf5"), ("nil3", "q")] {
        let f = gen(&d, name, field);
        let out = alg(&d, &["classify", f.to_str().unwrap(), "--samples", "8"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
    }
}
