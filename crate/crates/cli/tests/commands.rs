use std::process::{Command, Output};

fn a2k(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_a2k"))
        .args(args)
        .output()
        .expect("run a2k")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn gen_writes_the_q2_presentation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t0_q2.a2tp");
    let o = a2k(&["gen", "--q", "2", "--variant", "t0", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l == "a2tp q=2 n=7"));
    assert_eq!(text.lines().filter(|l| l.starts_with("lambda ")).count(), 7);
    assert_eq!(text.lines().filter(|l| l.starts_with("t ")).count(), 21);
}

#[test]
fn gen_rejects_bad_q() {
    let o = a2k(&["gen", "--q", "6", "--variant", "t0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("6 is not a prime power"));
    let o = a2k(&["gen", "--q", "5", "--variant", "omega"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn analyze_q3_text() {
    let o = a2k(&["analyze", "--q", "3", "--variant", "t0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("A_T ≅ Z2, ord(eps)=2"));
}

#[test]
fn analyze_q4_json() {
    let o = a2k(&["analyze", "--q", "4", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"epsilon_order\": 1"));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["checks"]["scheme_agreement"], true);
}

#[test]
fn round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("frob.a2tp");
    let p = path.to_str().unwrap();
    assert_eq!(a2k(&["gen", "--q", "3", "--variant", "frob1", "--out", p]).status.code(), Some(0));
    let o = a2k(&["validate", "--file", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("valid"));
    let o = a2k(&["verify", "--file", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("INFO  s_invariance         not invariant"));
    assert!(stdout(&o).contains("PASS  lemma_q2"));
}

#[test]
fn corrupted_file_is_rejected_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t0.a2tp");
    let p = path.to_str().unwrap();
    a2k(&["gen", "--q", "2", "--out", p]);
    let text = std::fs::read_to_string(&path).unwrap();
    let cut: Vec<&str> = text.lines().filter(|l| *l != "t 0 1 3").collect();
    assert_eq!(cut.len() + 1, text.lines().count());
    std::fs::write(&path, cut.join("\n")).unwrap();
    let o = a2k(&["analyze", "--file", p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("axiom"), "{}", stderr(&o));
    assert_eq!(a2k(&["validate", "--file", p]).status.code(), Some(2));
}

#[test]
fn verify_twists() {
    let o = a2k(&["verify", "--q", "4", "--variant", "t0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("CONJECTURE-HOLDS"));
    let o = a2k(&["verify", "--q", "2", "--variant", "frob1", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let m = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "m_subset").unwrap();
    assert_eq!(m["status"], "pass");
    let o = a2k(&["verify", "--q", "7", "--variant", "omega", "--base", "t0dual"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn small_table() {
    let o = a2k(&["table", "--q-min", "2", "--q-max", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.ends_with("MATCH")).count(), 8);
    let o = a2k(&["table", "--q-min", "9", "--q-max", "9", "--output", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"][1]["computed"], "Z3+Z3+Z3+Z3+Z3+Z24");
    assert_eq!(v["rows"][1]["epsilon_order"], "8");
}

#[test]
fn budget_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_a2k"))
        .args(["analyze", "--q", "2", "--variant", "frob2"])
        .env("A2K_BACKTRACK_BUDGET", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_a2k"))
        .args(["analyze", "--q", "2"])
        .env("A2K_BACKTRACK_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
