use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rrfilt_cli::cache::CACHE_ENV;
use serde_json::Value;

const CI: &str = "ring: QQ[x,y]\nideal: x^2, y^3\nchecks: hilbert, reduction, depth\n";

fn run(dir: &Path, body: &str, args: &[&str], cache: Option<&Path>) -> Output {
    let file = dir.join("input.txt");
    fs::write(&file, body).unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rrfilt"));
    cmd.arg("analyze").arg(&file).args(args);
    match cache {
        Some(c) => cmd.env(CACHE_ENV, c),
        None => cmd.env_remove(CACHE_ENV),
    };
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn complete_intersection_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), CI, &[], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["input"]["groebner_basis"], serde_json::json!(["x^2", "y^3"]));
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    assert!(results.iter().all(|r| r["status"] == "PASS"));
    assert_eq!(results[0]["report"]["h_poly"], serde_json::json!([6]));
    assert_eq!(results[1]["report"]["minimal"]["red"], 0);
    assert_eq!(results[2]["report"]["depth"], 2);
}

#[test]
fn parse_errors_report_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), "ring: QQ[x,y]\nideal: x^2, y^3 +* x\n", &[], None);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2, column"), "{err}");
    assert!(out.stdout.is_empty());

    let out = run(dir.path(), "ring: QQ[x,y]\nideal: x^2, y^3\nchecks: hilbert, nonsense\n", &[], None);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonsense"));
}

#[test]
fn ideals_that_are_not_primary_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), "ring: QQ[x,y,z]\nideal: x^2, y^2, x*z\n", &[], None);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains('z'), "{err}");
}

#[test]
fn empty_check_list_echoes_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), "ring: QQ[x,y]\nideal: y^3, x^2, x*y\nchecks:\n", &[], None);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["results"], serde_json::json!([]));
    assert_eq!(doc["input"]["groebner_basis"], serde_json::json!(["x*y", "x^2", "y^3"]));
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), CI, &["--checks", "reduction", "--seed", "11", "--trials", "2", "--window", "4"], None);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["input"]["checks"], serde_json::json!(["reduction"]));
    assert_eq!(doc["parameters"]["seed"], 11);
    assert_eq!(doc["parameters"]["trials"], 2);
    assert_eq!(doc["parameters"]["window"], 4);
}

#[test]
fn json_flag_writes_the_document_and_prints_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let out = run(dir.path(), CI, &["--json", target.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert!(serde_json::from_slice::<Value>(&out.stdout).is_err());
    assert!(!out.stdout.is_empty());
}

#[test]
fn runs_are_deterministic_and_the_cache_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let body = "ring: QQ[x,y]\nideal: x^4, x^3*y, x*y^3, y^4\nchecks: hilbert, rr, depth\nseed: 5\n";
    let a = run(dir.path(), body, &[], None);
    let b = run(dir.path(), body, &[], None);
    assert_eq!(a.stdout, b.stdout);
    let cold = run(dir.path(), body, &[], Some(&cache));
    let warm = run(dir.path(), body, &[], Some(&cache));
    assert_eq!(cold.stdout, a.stdout);
    assert_eq!(warm.stdout, a.stdout);
    assert_eq!(warm.status.code(), a.status.code());

    let entries: Vec<_> = fs::read_dir(&cache).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let entry = entries[0].as_ref().unwrap().path();
    for name in ["ideal.txt", "powers.txt", "closures.txt", "report.json"] {
        assert!(entry.join(name).is_file(), "missing {name}");
    }
    assert_eq!(fs::read(entry.join("report.json")).unwrap(), a.stdout);

    // a different seed is a different entry
    let other = body.replace("seed: 5", "seed: 6");
    run(dir.path(), &other, &[], Some(&cache));
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 2);
}
