use std::process::{Command, Output};

use fgroup::relations::{recompute_verdict, CaseReport};

fn fgroup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fgroup")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn intersect_disjoint_letters() {
    let o = fgroup(&["intersect", "a1", "--", "a2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "trivial (0 components)");
}

#[test]
fn intersect_shared_letter() {
    let o = fgroup(&["intersect", "--json", "a1", "a2", "--", "a2", "ha2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["components"].as_array().unwrap().len(), 1);
    assert_eq!(v["components"][0]["generators"][0], "a2");
}

#[test]
fn whitehead_on_a_boundary() {
    let d = "ha1 a1' ha1' a1 ha2 a2' ha2' a2 ha3 a3' ha3' a3";
    let o = fgroup(&["whitehead", d]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "no cut vertex: true");
    let o = fgroup(&["whitehead", "a1 a2", "--genus", "3"]);
    assert_eq!(stdout(&o).trim(), "no cut vertex: false");
}

#[test]
fn member_and_fold() {
    let o = fgroup(&["member", "a1", "a1 ha2", "--", "a1", "a1'", "a1", "ha2"]);
    assert_eq!(stdout(&o).trim(), "member: true");
    let o = fgroup(&["member", "a1 a1", "--", "a1"]);
    assert_eq!(stdout(&o).trim(), "member: false");
    let o = fgroup(&["fold", "a1 ha2", "a1 a2"]);
    assert!(stdout(&o).contains("digraph"));
    let o = fgroup(&["fold", "a1 ha2", "a1 a2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["edges"].as_array().unwrap().len(), 3);
}

#[test]
fn boundary_words() {
    let o = fgroup(&["boundary", "--kind", "nonorientable", "--genus", "2"]);
    assert_eq!(stdout(&o).trim(), "n ha1 a1 ha1' n a1 ha2 a2' ha2' a2");
    let o = fgroup(&["boundary", "--kind", "orientable", "--genus", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_input_reports_the_position() {
    let o = fgroup(&["fold", "a1", "a2 b3 a1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("generator 2") && err.contains("`b3`") && err.contains("token 1"), "{err}");
    let o = fgroup(&["intersect", "a1", "--", "1 a2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("second subgroup"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(fgroup(&[]).status.code(), Some(2));
    assert_eq!(fgroup(&["verify"]).status.code(), Some(2));
    assert_eq!(fgroup(&["verify", "--case", "9"]).status.code(), Some(2));
    let o = fgroup(&["verify", "--case", "1", "--rank", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("genus at least 7"));
    assert_eq!(fgroup(&["verify", "--case", "1", "--convention", "sideways"]).status.code(), Some(2));
}

#[test]
fn case_one_reports_its_two_stated_mismatches() {
    let o = fgroup(&["verify", "--case", "1", "--rank", "14"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("composition ok"));
    assert!(out.contains("stated claims contradicted: 2"), "{out}");
}

#[test]
fn case_one_under_the_other_convention_does_not_compose() {
    let o = fgroup(&["verify", "--case", "1", "--convention", "leftmost-first"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("composition FAILS"));
}

#[test]
fn json_reports_round_trip() {
    let o = fgroup(&["verify", "--case", "4", "--json"]);
    let r = CaseReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.case, "4");
    let m = r.model().unwrap();
    for s in &r.steps {
        assert_eq!(recompute_verdict(&m, s).unwrap(), s.verdict, "step {}", s.label);
    }
    let again = fgroup(&["verify", "--case", "4", "--json"]);
    assert_eq!(stdout(&o), stdout(&again));
    assert_eq!(o.status.code(), again.status.code());
}

#[test]
fn verify_all_covers_every_case() {
    let o = fgroup(&["verify-all", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 12);
}

#[test]
fn small_oracle_run() {
    let o = fgroup(&["oracle", "--samples", "25", "--max-len", "6", "--seed", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["agreeing"], 25);
    assert_eq!(v["seed"], 5);
}
