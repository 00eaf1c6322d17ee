use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_frobgap");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Compares `actual` with `tests/golden/<name>`, rewriting it under
/// `UPDATE_GOLDEN=1`.
fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, want, "golden file {name} differs; rerun with UPDATE_GOLDEN=1 to accept");
}

const RELATIVE: &str = "papers (that (Bob rejected))";
const ADJUNCT_GAP: &str = "papers (that (Bob (rejected <i>(without^d reading))))";

#[test]
fn derivable_sentence_exits_zero() {
    let o = run(&["parse", "--bracketing", RELATIVE, "--goal", "n"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("derivable: "));
}

#[test]
fn island_violation_exits_one_with_diagnostic() {
    let o = run(&[
        "parse",
        "--bracketing",
        "window (that (Bob ((left (the room)) <i>(without^bc closing))))",
        "--goal",
        "n",
    ]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.starts_with("not derivable:"), "{out}");
    assert!(out.contains("deepest failed subgoal:"), "{out}");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["parse", "--bracketing", "papers (that (Bob frobnicated))", "--goal", "n"][..],
        &["parse", "--bracketing", "papers (that", "--goal", "n"],
        &["parse", "--bracketing", RELATIVE, "--goal", "n/("],
        &["parse"],
        &["parse", "papers", "--bracketing", RELATIVE],
        &["parse", "--bracketing", RELATIVE, "--max-size", "0"],
        &["parse", "--bracketing", RELATIVE, "--lexicon", "/nonexistent/lexicon.lex"],
    ] {
        let o = run(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stdout(&o));
        assert!(stderr(&o).contains("error"), "{args:?}");
    }
}

#[test]
fn unbracketed_words_are_searched() {
    let o = run(&["parse", "papers", "that", "Bob", "rejected", "--goal", "n"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("papers (that (Bob rejected))"), "{}", stdout(&o));
}

#[test]
fn suite_passes_and_matches_golden() {
    let o = run(&["parse", "--suite", "--jobs", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    golden("suite.txt", &stdout(&o));
}

#[test]
fn parse_json_matches_golden() {
    let o = run(&["parse", "--bracketing", RELATIVE, "--goal", "n", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["derivable"], true);
    golden("parse_relative.json", &stdout(&o));
}

#[test]
fn derive_type_rows_match_golden() {
    let mut all = String::new();
    for word in ["without^d", "that^e", "whom^f"] {
        let o = run(&["derive-type", word]);
        assert_eq!(code(&o), 0, "{word}: {}", stderr(&o));
        all.push_str(&stdout(&o));
    }
    golden("derive_type.txt", &all);
}

#[test]
fn derive_type_with_explicit_steps() {
    let o = run(&["derive-type", "without^bc", "--steps", "geach@.(<x>[x]np);sdist@L", "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2], "[i]((iv/<x>[x]np)\\(iv/<x>[x]np))/(gp/<x>[x]np)");
}

#[test]
fn derive_type_rejects_bad_steps() {
    for steps in ["geach@.(<x>[x]np);frobnicate@L", "sdist@L", "geach@Q(np)"] {
        let o = run(&["derive-type", "without^bc", "--steps", steps]);
        assert_eq!(code(&o), 2, "{steps}: {}", stdout(&o));
        assert!(stderr(&o).contains("error"));
    }
    let o = run(&["derive-type", "papers"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn compile_writes_both_diagrams() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = run(&[
        "compile", "--bracketing", ADJUNCT_GAP, "--goal", "n", "--out-dir", d, "--name", "gap", "--dot", "--json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report["normal_size"].as_u64() < report["initial_size"].as_u64());
    assert!(!report["linking"]["links"].as_array().unwrap().is_empty());
    for tag in ["initial", "normal"] {
        let json = std::fs::read_to_string(dir.path().join(format!("gap.{tag}.json"))).unwrap();
        let v: Value = serde_json::from_str(&json).unwrap();
        frobgap::json::diagram_from_json(&v).unwrap();
        let dot = std::fs::read_to_string(dir.path().join(format!("gap.{tag}.dot"))).unwrap();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches('{').count(), dot.matches('}').count());
        assert!(dot.trim_end().ends_with('}'));
    }
}

#[test]
fn compile_of_underivable_sentence_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "compile",
        "--bracketing",
        "papers (that (Bob (rejected (the proposal))))",
        "--goal",
        "n",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn eval_check_passes_against_every_reference() {
    let o = run(&["eval", "--bracketing", ADJUNCT_GAP, "--goal", "n", "--check", "--json", "--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    let against: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["against"].as_str().unwrap()).collect();
    assert_eq!(against, ["initial diagram", "exhaustive summation", "closed form"]);
    assert_eq!(v["result"]["shape"], serde_json::json!([["N", 4]]));
}

fn write_store(dir: &Path, tensors: Value) -> String {
    let path = dir.join("store.json");
    let store = serde_json::json!({
        "schema_version": 1,
        "dims": {"N": 2, "S": 2},
        "seed": 0,
        "tensors": tensors,
    });
    std::fs::write(&path, store.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn zeros_and_ones(zero_word: &str) -> Value {
    let t = |shape: Value, len: usize, fill: f64| serde_json::json!({"shape": shape, "data": vec![fill; len]});
    let vec_n = || serde_json::json!([["N", 2]]);
    let verb = || serde_json::json!([["N", 2], ["S", 2], ["N", 2]]);
    let mut m = serde_json::Map::new();
    for (w, shape, len) in [
        ("papers", vec_n(), 2),
        ("Bob", vec_n(), 2),
        ("rejected", verb(), 8),
        ("reading", verb(), 8),
    ] {
        m.insert(w.to_string(), t(shape, len, if w == zero_word { 0.0 } else { 1.0 }));
    }
    Value::Object(m)
}

#[test]
fn eval_with_zero_tensor_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let store = write_store(dir.path(), zeros_and_ones("reading"));
    let o = run(&["eval", "--bracketing", ADJUNCT_GAP, "--goal", "n", "--store", &store, "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["data"], serde_json::json!([0.0, 0.0]));
}

#[test]
fn eval_with_all_ones_counts_paths() {
    let dir = tempfile::tempdir().unwrap();
    let store = write_store(dir.path(), zeros_and_ones(""));
    let o = run(&["eval", "--bracketing", ADJUNCT_GAP, "--goal", "n", "--store", &store, "--json", "--check"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    // sum over the subject (2) and the shared sentence index (2)
    assert_eq!(v["result"]["data"], serde_json::json!([4.0, 4.0]));
}

#[test]
fn eval_with_missing_tensor_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut tensors = zeros_and_ones("");
    tensors.as_object_mut().unwrap().remove("Bob");
    let store = write_store(dir.path(), tensors);
    let o = run(&["eval", "--bracketing", ADJUNCT_GAP, "--goal", "n", "--store", &store]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("Bob"), "{}", stderr(&o));
}
