use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    doc: Value,
    raw: String,
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn pfcone(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_pfcone")).args(args).output().unwrap();
    let raw = String::from_utf8(out.stdout).unwrap();
    let doc = serde_json::from_str(&raw).unwrap_or(Value::Null);
    Run { code: out.status.code().unwrap(), doc, raw }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve1_reports_unsolvable_diagonal_instance() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", r#"{"n": 3, "entries": [[0,0,0],[0,1,0],[0,0,2]]}"#);
    let b = write(&dir, "b.json", r#"{"entries": [0, 0, 1]}"#);
    let r = pfcone(&["solve1", "--lambda", "1", "--b", s(&b), s(&m)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.doc["solvable"], json!(false));
    assert_eq!(r.doc["rho_b"], json!("2"));
    assert_eq!(r.doc["fired_condition"], json!("g"));
}

#[test]
fn solve2_constructs_a_solution() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", r#"{"entries": [[2,0],[1,1]]}"#);
    let b = write(&dir, "b.json", r#"{"entries": [0, 1]}"#);
    let r = pfcone(&["solve2", "--lambda", "2", "--b", s(&b), s(&m)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.doc["solvable"], json!(true));
    assert_eq!(r.doc["x"], json!(["1", "0"]));
    assert_eq!(r.doc["fired_condition"], json!("cor4_2"));
}

#[test]
fn analyze_two_final_basic_classes() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", r#"{"entries": [[1,0],[0,1]]}"#);
    let r = pfcone(&["analyze", s(&m)]);
    assert_eq!(r.code, 0);
    let classes = r.doc["taxonomy"]["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 2);
    assert!(classes.iter().all(|c| c["basic"] == json!(true) && c["final"] == json!(true)));
    for key in ["classes", "taxonomy", "spectral", "faces"] {
        assert!(r.doc.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn sigma1_check_on_jordan_block() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", r#"{"entries": [[1,1],[0,1]]}"#);
    let r = pfcone(&["check", "--property", "thm5.10", s(&m)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.doc["pass"], json!(true));
    assert_eq!(r.doc["rho_in_sigma1"], json!(false));
    assert_eq!(r.doc["lp_agrees"], json!(true));
}

#[test]
fn every_property_runs() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", r#"{"entries": [[2,1,0],[0,1,0],[0,0,1]]}"#);
    for id in ["thm3.1", "cor4.2", "thm4.13", "cor4.20", "thm5.10", "thm5.11", "cor6.4", "cor4.8-gap"] {
        let r = pfcone(&["check", "--property", id, s(&m)]);
        assert_eq!(r.code, 0, "{id}: {}", r.raw);
        assert_eq!(r.doc["pass"], json!(true), "{id}: {}", r.raw);
    }
}

#[test]
fn cw_and_alt_verbs() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", r#"{"entries": [[1,1],[0,1]]}"#);
    let x = write(&dir, "x.json", r#"{"entries": [0, 1]}"#);
    let r = pfcone(&["cw", "--x", s(&x), s(&m)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.doc["R_upper"], json!("inf"));
    let r = pfcone(&["cw", s(&m)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.doc["sup_omega"], json!("1"));
    let r = pfcone(&["alt", "--shift", "1", "--x", s(&x), "--max-steps", "8", s(&m)]);
    assert_eq!(r.code, 0);
    assert_eq!((r.doc["kind"].clone(), r.doc["length"].clone()), (json!("finite"), json!(2)));
}

#[test]
fn irrational_radius_falls_back_to_float() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", r#"{"entries": [[1,1],[1,0]]}"#);
    let r = pfcone(&["analyze", s(&m)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.doc["mode"], json!("float"));
    let rho = r.doc["spectral"]["rho"].as_f64().unwrap();
    assert!((rho - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-8);
    let r = pfcone(&["--mode", "rational", "analyze", s(&m)]);
    assert_eq!(r.code, 3);
    assert_eq!(r.doc["kind"], json!("numeric"));
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"entries": [[1, -1], [0, 1]]}"#);
    assert_eq!(pfcone(&["analyze", s(&bad)]).code, 2);
    assert_eq!(pfcone(&["analyze", "/nonexistent/m.json"]).code, 2);
    assert_eq!(pfcone(&["frobnicate"]).code, 2);
    let m = write(&dir, "m.json", r#"{"entries": [[1]]}"#);
    assert_eq!(pfcone(&["analyze", "--bogus", s(&m)]).code, 2);
    assert_eq!(pfcone(&["check", "--property", "thm9.9", s(&m)]).code, 2);
    let b = write(&dir, "b.json", r#"{"entries": [1, 2]}"#);
    assert_eq!(pfcone(&["solve1", "--lambda", "2", "--b", s(&b), s(&m)]).code, 2);
}

#[test]
fn output_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", r#"{"entries": [[2,1,0],[0,1,0],[1,0,1]]}"#);
    let a = pfcone(&["analyze", s(&m)]).raw;
    let b = pfcone(&["analyze", s(&m)]).raw;
    assert_eq!(a, b);
}
