//! End-to-end tests against the installed binary: exit codes, byte
//! determinism, and that emitted documents parse back in.

use std::process::{Command, Output, Stdio};

use serde_json::Value;

use mealydc::doc::parse_document;

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mealydc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON value")
}

#[test]
fn check_monad_exit_codes() {
    let ok = run(&["check-monad", &fixture("monad_absorbing.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(ok.stdout, b"{\"pass\":true}\n");

    let bad = run(&["check-monad", &fixture("monad_broken_unit.json")]);
    assert_eq!(bad.status.code(), Some(1));
    let report = stdout_json(&bad);
    assert_eq!(report["pass"], Value::Bool(false));
    assert_eq!(report["axiom"], "ma_2");
    assert_eq!(report["witness"]["e"], 1);
}

#[test]
fn input_errors_exit_two() {
    let missing = run(&["check-monad", "/nonexistent/monad.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stdout_json(&missing)["error"].is_string());

    let wrong_kind = run(&["check-monad", &fixture("machine_swap.json")]);
    assert_eq!(wrong_kind.status.code(), Some(2));
    assert!(stdout_json(&wrong_kind)["error"]
        .as_str()
        .unwrap()
        .contains("expected a monad document"));
}

#[test]
fn reads_documents_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mealydc"))
        .args(["check-monad", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let doc = std::fs::read(fixture("monad_absorbing.json")).unwrap();
    std::io::Write::write_all(child.stdin.as_mut().unwrap(), &doc).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_is_byte_deterministic() {
    for args in [
        vec!["enumerate-monads", "--alphabet", "2", "--states", "2"],
        vec!["companion", &*fixture("fun_swap.json")],
        vec!["interchange", "--random", "--count", "5", "--seed", "7"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.status.code(), Some(0));
        assert_eq!(
            first.stdout, second.stdout,
            "non-deterministic output for {args:?}"
        );
    }
}

#[test]
fn law_search_matches_committed_report() {
    let out = run(&["free-monad", "--law-search", "--bound", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let committed = std::fs::read(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../reports/free_monad_discrepancy.json"
    ))
    .unwrap();
    assert_eq!(
        out.stdout, committed,
        "committed discrepancy report is stale"
    );
}

#[test]
fn emitted_documents_parse_back() {
    // a companion bundle is machine, counit, unit
    let out = run(&["companion", &fixture("fun_swap.json")]);
    assert_eq!(out.status.code(), Some(0));
    let docs = stdout_json(&out);
    let docs = docs.as_array().expect("bundle is an array");
    assert_eq!(docs.len(), 3);
    for d in docs {
        parse_document(d).expect("emitted document parses");
    }

    // composing the swap machine with itself squares the state count
    let swap = fixture("machine_swap.json");
    let out = run(&["compose", &swap, &swap]);
    assert_eq!(out.status.code(), Some(0));
    let machine = stdout_json(&out);
    assert_eq!(machine["states"]["size"], 4);
    parse_document(&machine).expect("composite machine parses");
}

#[test]
fn conjoint_requires_bijectivity() {
    let found = run(&["conjoint", &fixture("fun_swap.json")]);
    assert_eq!(found.status.code(), Some(0));
    assert_eq!(stdout_json(&found).as_array().unwrap().len(), 3);

    let missing = run(&["conjoint", &fixture("fun_collapse.json")]);
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(missing.stdout, b"{\"bijective\":false,\"found\":false}\n");
}
