use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3picard")).args(args).output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn query_finds_no_orthogonal_root() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "q.json",
        r#"{"lattice": {"labels": ["D", "L"], "gram": [[4, 5], [5, 2]]},
            "query": {"self_intersection": -2, "pairings": [{"anchor": "D", "relation": "eq", "value": 0}]}}"#,
    );
    let o = run(&["query", &file]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("0 solutions"), "{}", stdout(&o));
}

#[test]
fn oracle_scans_a_box() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "q.json", r#"{"lattice": {"gram": [[-2, 0], [0, -2]]}, "query": {"self_intersection": -2}}"#);
    let o = run(&["oracle", &file, "--box", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("4 solutions"), "{}", stdout(&o));

    let o = run(&["oracle", &file]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("box"));
}

#[test]
fn infinite_query_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "q.json", r#"{"lattice": {"gram": [[2, 0], [0, -2]]}, "query": {"self_intersection": -2}}"#);
    let o = run(&["query", &file]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not certifiably finite"), "{}", stderr(&o));
}

#[test]
fn malformed_input_names_the_field() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "q.json", r#"{"lattice": {"gram": [[2]]}, "query": {"self_intersection": 0, "paring": []}}"#);
    let o = run(&["query", &file]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("paring"), "{}", stderr(&o));

    let file = write(&dir, "odd.json", r#"{"lattice": {"gram": [[3]]}, "query": {"self_intersection": 0}}"#);
    assert_eq!(run(&["query", &file]).status.code(), Some(2));
}

#[test]
fn verify_claim_prints_a_certificate() {
    let o = run(&["verify-claim", "3.10", "--j", "1", "--k", "5", "--h", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cert["claim_id"], "Claim3.10");
    assert_eq!(cert["status"], "Verified");
    assert!(stderr(&o).contains("Claim3.10: Verified"));

    let o = run(&["verify-claim", "Claim3.6", "--j", "-1", "--k", "1", "--h", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = run(&["verify-claim", "3.10", "--j", "1", "--k", "6", "--h", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify-claim", "3.4", "--j", "1", "--k", "5", "--h", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn build_writes_a_family() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("family.json");
    let o = run(&["build", "--j", "0", "--k", "1", "--h", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["disc"], 34);
    assert_eq!(doc["signature"], serde_json::json!([1, 2]));

    let o = run(&["build", "--j", "3", "--k", "9", "--h", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["build", "--j", "-1", "--k", "0", "--h", "1", "--rank", "2", "--explore", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("orthogonal"), "{}", stderr(&o));
}

fn table(out: &Path, jobs: &str) -> Output {
    run(&["verify-table", "--h-max", "6", "--k-max", "8", "--jobs", jobs, "--out", out.to_str().unwrap()])
}

#[test]
fn verify_table_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let o = table(&a, "1");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("0 failed"));
    assert_eq!(table(&b, "4").status.code(), Some(0));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(report["summary"]["failed"], 0);
}
