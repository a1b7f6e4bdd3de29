use std::fs;

use addax_cli::{run_with, EXIT_INVALID, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn run(args: &str) -> (i32, String) {
    run_with(std::iter::once("addax").chain(args.split_whitespace()), None)
}

fn run_json(args: &str) -> Value {
    let (code, out) = run(args);
    assert_eq!(code, EXIT_OK, "{args}: {out}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn conic_equation() {
    assert_eq!(run_json("equation --catalog truncated:3")["equation"], "x0*x2 - 1/2*x1^2");
    assert_eq!(run("--pretty equation --catalog truncated:3"), (EXIT_OK, "x0*x2 - 1/2*x1^2".into()));
}

#[test]
fn chain_action_formula() {
    let (code, out) = run("act --catalog corank_one_n2_chain --symbolic --pretty");
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "[x0 : x1+a1*x0 : x2+(a2+1/6*a1^3)*x0+1/2*a1^2*x1+a1*x3 : x3+1/2*a1^2*x0+a1*x1]");
}

#[test]
fn classify_canonical_quadric() {
    let (code, out) = run("classify --catalog quadric_nondegenerate:4");
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with(r#"{"rank":6,"case":"NONDEGENERATE","#), "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["certificate"]["identity"], true);
    assert_eq!(v["lambda"], Value::Null);
}

#[test]
fn classify_corank_one_cases() {
    assert_eq!(run_json("classify --catalog corank_one_n2_split")["case"], "N2_SPLIT");
    assert_eq!(run_json("classify --catalog corank_one_n2_chain")["case"], "N2_CHAIN");
    let v = run_json("classify --catalog corank_one:0,0;0,1");
    assert_eq!(v["rank"], 4);
    assert_eq!(v["lambda"], serde_json::json!([["0", "0"], ["0", "1"]]));
}

#[test]
fn numeric_action() {
    let v = run_json("act --catalog truncated:3 --params 2");
    assert_eq!(v["origin_image"], "[1 : 2 : 2]");
    let (code, _) = run("act --catalog truncated:3 --params 1,2");
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn invariance_reports_witnesses() {
    let v = run_json("invariance --catalog truncated:5");
    assert_eq!((v["form_invariant"].clone(), v["action_invariant"].clone()), (true.into(), true.into()));
    let v = run_json("invariance --catalog truncated:3 --poly x1^2");
    assert_eq!(v["form_invariant"], false);
    assert_eq!(v["form_witness"]["tuple"], serde_json::json!([0, 1]));
}

#[test]
fn exit_codes() {
    assert_eq!(run("bogus").0, EXIT_USAGE);
    assert_eq!(run("equation").0, EXIT_USAGE);
    assert_eq!(run("act --catalog truncated:3").0, EXIT_USAGE);
    let (code, out) = run("degree --catalog nope");
    assert_eq!(code, EXIT_INVALID);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["error"], "unknown_catalog");
    let (code, out) = run("degree /no/such/file.json");
    assert_eq!(code, EXIT_INVALID);
    assert!(out.contains("\"io\""));
    assert_eq!(run("degree --catalog square_zero:2").0, EXIT_INVALID);
    assert_eq!(run("--help").0, EXIT_OK);
}

#[test]
fn invalid_algebra_has_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"dim":4,"mul":{"1,1":["0","1","0"],"2,2":["0","0","1"]}}"#).unwrap();
    let (code, out) = run(&format!("validate {}", path.display()));
    assert_eq!(code, EXIT_INVALID);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"], "invalid_algebra");
    assert_eq!(v["axiom"], "associativity");
    assert!(v["witness"].as_array().unwrap().len() == 3);
}

#[test]
fn user_catalog_directory() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("my_conic.json"),
        r#"{"dim":3,"mul":{"1,1":["0","2"]},"W":[["1","0"]],"complement":["0","1"]}"#,
    )
    .unwrap();
    let argv = |a: &str| std::iter::once("addax".to_string()).chain(a.split_whitespace().map(String::from)).collect::<Vec<_>>();
    let (code, out) = run_with(argv("equation --catalog my_conic"), Some(dir.path()));
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("x0*x2 - x1^2"), "{out}");
    let (_, list) = run_with(argv("catalog-list"), Some(dir.path()));
    let v: Value = serde_json::from_str(&list).unwrap();
    assert_eq!(v["user"], serde_json::json!(["my_conic"]));
    assert_eq!(run("equation --catalog my_conic").0, EXIT_INVALID);
}

#[test]
fn output_is_deterministic() {
    for args in [
        "classify --catalog corank_one:1,2,0;2,-1,1/3;0,1/3,0+i",
        "form --catalog quadric_nondegenerate:3",
        "invariance --catalog corank_one_n2_chain",
        "catalog-list",
    ] {
        assert_eq!(run(args), run(args));
    }
}

#[test]
fn file_and_catalog_inputs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t4.json");
    let entry = addax_core::catalog::lookup("truncated:4").unwrap();
    fs::write(&path, addax_core::io::entry_to_json(&entry).to_string()).unwrap();
    assert_eq!(run(&format!("equation {}", path.display())), run("equation --catalog truncated:4"));
    assert_eq!(run(&format!("equation {} --catalog truncated:4", path.display())).0, EXIT_USAGE);
}
