use std::process::{Command, Output};

fn superplane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superplane")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON report")
}

#[test]
fn normalize_example() {
    let out = superplane(&["normalize", "--family", "I", "--expr", "x*dx"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "p*dx*x");
}

#[test]
fn computation_commands() {
    let d = superplane(&["diff", "--family", "I", "--expr", "x*th"]);
    assert_eq!(d.status.code(), Some(0));
    // d(xθ) = dx θ + x dθ = dx θ + pq dθ x
    let expected = superplane(&["normalize", "--family", "I", "--expr", "dx*th + x*dth"]);
    assert_eq!(stdout(&d), stdout(&expected));

    let c = superplane(&["coproduct", "--expr", "x"]);
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(stdout(&c).trim(), "x (x) x");

    let s = superplane(&["antipode", "--expr", "x"]);
    assert_eq!(stdout(&s).trim(), "xinv");

    let w = superplane(&["diff", "--expr", "w"]);
    assert_eq!(w.status.code(), Some(1));
}

#[test]
fn braid_family_two() {
    let generic = superplane(&["verify", "braid", "--family", "II"]);
    assert_eq!(generic.status.code(), Some(1));
    assert!(stdout(&generic).contains("fail"));
    let special = superplane(&["verify", "braid", "--family", "II", "--set", "s=q*r"]);
    assert_eq!(special.status.code(), Some(0));
}

#[test]
fn hopf_family_two() {
    let generic = superplane(&["verify", "hopf", "--family", "II", "--fuel", "20", "--seed", "7"]);
    assert_eq!(generic.status.code(), Some(1));
    let special = superplane(&["verify", "hopf", "--family", "II", "--fuel", "20", "--seed", "7", "--set", "s=q*r"]);
    assert_eq!(special.status.code(), Some(0), "{}", stdout(&special));
}

#[test]
fn json_report_fields() {
    let out = superplane(&["verify", "consistency", "--family", "I", "--fuel", "10", "--seed", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys.len(), 6);
    for k in ["schema", "command", "family", "bindings", "seed", "checks"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert_eq!(v["seed"], 3);
    assert_eq!(v["family"], "I");
    for check in v["checks"].as_array().unwrap() {
        let mut fields: Vec<&str> = check.as_object().unwrap().keys().map(String::as_str).collect();
        fields.sort();
        assert_eq!(fields, ["name", "paper_eq", "status", "witness"]);
        assert!(["pass", "fail", "n/a"].contains(&check["status"].as_str().unwrap()));
    }
}

#[test]
fn bindings_appear_in_report() {
    let out = superplane(&["verify", "braid", "--family", "II", "--set", "s=q*r", "--json"]);
    assert_eq!(json(&out)["bindings"]["s"], "q*r");
}

#[test]
fn solve_and_derive() {
    assert_eq!(superplane(&["solve", "consistency"]).status.code(), Some(0));
    assert_eq!(superplane(&["derive", "twoforms"]).status.code(), Some(0));
    let forms = superplane(&["derive", "forms", "--json"]);
    assert_eq!(forms.status.code(), Some(1));
    let failing: Vec<String> = json(&forms)["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["paper_eq"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(failing, ["38a", "39b"]);
}

#[test]
fn usage_errors() {
    let bad_expr = superplane(&["normalize", "--expr", "x*(th"]);
    assert_eq!(bad_expr.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_expr.stderr).contains("1:6"));
    assert_eq!(superplane(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(superplane(&["verify", "braid", "--set", "z=1"]).status.code(), Some(2));
    assert_eq!(superplane(&["--help"]).status.code(), Some(0));
}

#[test]
fn deterministic_reports() {
    let args = ["verify", "calculus", "--family", "II", "--fuel", "30", "--seed", "11", "--json"];
    assert_eq!(superplane(&args).stdout, superplane(&args).stdout);
}
