//! Runs the `pigame` binary on the files under `tests/data` and checks
//! exit codes and reports.

use std::path::PathBuf;
use std::process::{Command, Output};

use pigame::process::parse_file;
use pigame::strategy::translate;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden").join(name)
}

fn pigame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pigame")).args(args).env_remove("PIGAME_BUDGET").output().unwrap()
}

fn file_args<'a>(cmd: &'a str, files: &'a [PathBuf], rest: &[&'a str]) -> Vec<String> {
    let mut v = vec![cmd.to_string()];
    v.extend(files.iter().map(|f| f.display().to_string()));
    v.extend(rest.iter().map(|s| s.to_string()));
    v
}

fn run(cmd: &str, files: &[&str], rest: &[&str]) -> (i32, String) {
    let paths: Vec<PathBuf> = files.iter().map(|f| data(f)).collect();
    let args = file_args(cmd, &paths, rest);
    let out = pigame(&args.iter().map(String::as_str).collect::<Vec<_>>());
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(cmd: &str, files: &[&str], rest: &[&str]) -> (i32, Value) {
    let mut rest = rest.to_vec();
    rest.extend(["--format", "json"]);
    let (code, out) = run(cmd, files, &rest);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

#[test]
fn translation_check_on_equal_processes_succeeds() {
    let (code, out) = run("check-theorem1", &["p.pi", "p.pi"], &["--k", "1"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("AgreeUpTo(1)"), "{out}");
    assert!(out.contains("k = 1"), "{out}");
}

#[test]
fn translation_check_reports_distinguished_pairs_without_mismatch() {
    let (code, v) = json("check-theorem1", &["tick.pi", "nil.pi"], &["--k", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["mismatches"], Value::Array(vec![]));
    assert!(v["processes"].as_str().unwrap().starts_with("Distinguished"));
    assert!(v["strategies"].as_str().unwrap().starts_with("Distinguished"));
    assert_eq!(v["bound"]["k"], 1);
}

#[test]
fn render_matches_the_tau_golden() {
    let out = pigame(&["render", golden("tau.play").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let want = std::fs::read_to_string(golden("tau.dot")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want);
}

#[test]
fn translate_lists_the_table_of_a_sum() {
    let (code, v) = json("translate", &["sum.pi"], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["arity"], 3);
    let tr = |text: &str| translate(&parse_file(text).unwrap().process).to_string();
    let table = v["table"].as_array().unwrap();
    let rows: Vec<(&str, Vec<&str>)> = table
        .iter()
        .map(|r| (r["seed"].as_str().unwrap(), r["summands"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect()))
        .collect();
    let inputs = [tr("free a b c x; x!x"), tr("free a b c x; tick")];
    let output = [tr("free a b c; c?.0")];
    assert_eq!(
        rows,
        vec![("in(3,1)", inputs.iter().map(String::as_str).collect()), ("out(3,2,3)", output.iter().map(String::as_str).collect())]
    );
}

#[test]
fn parse_echoes_de_bruijn_levels() {
    let (code, out) = run("parse", &["sum.pi"], &[]);
    assert_eq!(code, 0);
    assert!(out.contains("de Bruijn, 3 free: 1?.4!4 + 1?.tick + 2!3.3?"), "{out}");
    let (_, v) = json("parse", &["loop.pi"], &[]);
    assert_eq!(v["definitions"][0]["debruijn"], "1!1.X(1)");
}

#[test]
fn reduce_dumps_the_graph() {
    let (code, v) = json("reduce", &["sync.pi"], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["states"].as_array().unwrap().len(), 3);
    assert_eq!(v["saturated"], true);
    let labels: Vec<&str> = v["edges"].as_array().unwrap().iter().map(|e| e["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["τ", "♥"]);
    let (_, dot) = run("reduce", &["sync.pi"], &["--format", "dot"]);
    assert!(dot.starts_with("digraph reduce {") && dot.contains("s0 -> s1 [label=\"τ\"]"), "{dot}");
}

#[test]
fn truncated_exploration_is_unknown() {
    let (code, v) = json("reduce", &["sync.pi"], &["--budget", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["saturated"], false);
    let (code, _) = run("explore", &["sync.pi"], &["--depth", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn step_lists_both_input_summands() {
    let (code, v) = json("step", &["sum.pi"], &[]);
    assert_eq!(code, 0);
    let edges = v["edges"].as_array().unwrap();
    let inputs: Vec<&Value> = edges.iter().filter(|e| e["seed"] == "in(3,1)").collect();
    assert_eq!(inputs.len(), 2);
    assert!(edges.iter().all(|e| e["label"] == "open"));
}

#[test]
fn explore_closed_world() {
    let (code, v) = json("explore", &["sync.pi"], &[]);
    assert_eq!(code, 0);
    let labels: Vec<&str> = v["edges"].as_array().unwrap().iter().map(|e| e["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["τ", "τ", "♥"]);
}

#[test]
fn bot_records_carry_state_verdict_bound_and_witness() {
    let (code, v) = json("check-fair-pi", &["tick.pi"], &[]);
    assert_eq!(code, 0);
    for key in ["state", "verdict", "bound", "witness-path"] {
        assert!(v.get(key).is_some(), "{key} missing from {v}");
    }
    assert_eq!(v["verdict"], "InBot");
    let (code, v) = json("check-fair-pi", &["nil.pi"], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "NotInBot");
    assert_eq!(v["witness-path"], serde_json::json!(["0"]));
    let (code, v) = json("check-fair-sd", &["sync.pi"], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "InBot");
}

#[test]
fn budget_comes_from_the_environment() {
    let args = ["check-fair-pi", data("sync.pi").to_str().unwrap(), "--format", "json"].map(String::from);
    let out = Command::new(env!("CARGO_BIN_EXE_pigame")).args(&args).env("PIGAME_BUDGET", "1").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "Unknown");
    assert_eq!(v["bound"]["nodes"], 1);
}

#[test]
fn fair_testing_distinguishes_tick_from_nil() {
    let (code, v) = json("check-fair-pi", &["tick.pi", "nil.pi"], &[]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["outcome"], "Distinguished");
    let (code, v) = json("check-fair-sd", &["tick.pi", "nil.pi"], &[]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["verdicts"], serde_json::json!(["InBot", "NotInBot"]));
    let (code, v) = json("check-fair-pi", &["p.pi", "p.pi"], &["--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["outcome"], "AgreeUpTo");
    assert_eq!(v["result"]["k"], 2);
}

#[test]
fn bisimulation_over_the_alphabet() {
    assert_eq!(run("bisim-a", &["sum.pi"], &[]).0, 0);
    let (code, v) = json("bisim-a", &["tick.pi", "nil.pi"], &[]);
    assert_eq!(code, 1);
    assert_eq!(v["witness"], serde_json::json!(["♥"]));
    // `X` sends a channel over itself forever, each time known once more.
    let (code, v) = json("bisim-a", &["loop.pi"], &["--budget", "50"]);
    assert_eq!(code, 2);
    assert_eq!(v["result"], "Unknown");
}

#[test]
fn input_errors_exit_with_three() {
    assert_eq!(run("parse", &["broken.pi"], &[]).0, 3);
    assert_eq!(run("parse", &["notes.txt"], &[]).0, 3);
    assert_eq!(run("parse", &["missing.pi"], &[]).0, 3);
    assert_eq!(run("reduce", &["p.pi"], &["--k", "0"]).0, 3);
    assert_eq!(run("parse", &["p.pi"], &["--format", "dot"]).0, 3);
    assert_eq!(run("translate", &["nil.pi", "p.pi"], &[]).0, 3);
    assert_eq!(run("check-theorem1", &["p.pi", "sum.pi"], &[]).0, 3);
    assert_eq!(pigame(&["--help"]).status.code(), Some(0));
}

#[test]
fn reports_are_deterministic() {
    for (cmd, files) in [("check-theorem1", vec!["tick.pi", "nil.pi"]), ("explore", vec!["sum.pi"]), ("step", vec!["sum.pi"])] {
        let a = run(cmd, &files, &["--k", "2", "--format", "json"]);
        let b = run(cmd, &files, &["--k", "2", "--format", "json"]);
        assert_eq!(a, b, "{cmd}");
    }
}
