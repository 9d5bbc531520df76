//! End-to-end checks of the command-line interface: subcommand behaviour,
//! exit codes, and agreement between human and structured output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn hoq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hoq"))
        .args(args)
        .env_remove("HOQ_MAX_ENUM")
        .env_remove("HOQ_MAX_CODE_BITS")
        .env_remove("HOQ_MAX_TARGET_UNIVERSE")
        .output()
        .expect("binary runs")
}

fn write(dir: &tempfile::TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const GRAPH: &str = r#"{
    "universe": 3,
    "vocabulary": {"E": "(i,i)", "c": "i", "d": "i"},
    "interpretation": {"E": [[0,1],[1,2]], "c": 0, "d": 2}
}"#;

#[test]
fn eval_answers_true_on_the_path_query() {
    let dir = tempfile::tempdir().unwrap();
    let formula = write(
        &dir,
        "path.hoq",
        "# a path from c to d\nTC[x; y : E(x,y)](c; d)",
    );
    let structure = write(&dir, "graph.json", GRAPH);
    let out = hoq(&[
        "eval",
        formula.to_str().unwrap(),
        structure.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("true"), "got {stdout}");
}

#[test]
fn false_answers_still_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let formula = write(&dir, "back.hoq", "TC[x; y : E(x,y)](d; c)");
    let structure = write(&dir, "graph.json", GRAPH);
    let out = hoq(&[
        "eval",
        formula.to_str().unwrap(),
        structure.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("false"));
}

#[test]
fn parse_errors_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let formula = write(&dir, "bad.hoq", "exists x:i. (x = ");
    let structure = write(&dir, "graph.json", GRAPH);
    let out = hoq(&[
        "eval",
        formula.to_str().unwrap(),
        structure.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn type_errors_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let formula = write(&dir, "ill.hoq", "E(c)");
    let structure = write(&dir, "graph.json", GRAPH);
    let out = hoq(&[
        "eval",
        formula.to_str().unwrap(),
        structure.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn guard_refusals_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let formula = write(&dir, "big.hoq", "exists X:(i,i). X(c,c)");
    let structure = write(&dir, "graph.json", GRAPH);
    let out = hoq(&[
        "--max-enum",
        "4",
        "eval",
        formula.to_str().unwrap(),
        structure.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn usage_errors_exit_two() {
    let out = hoq(&["eval"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hoq(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn count_prints_the_report() {
    let out = hoq(&["count", "--type", "((i))", "--n", "2"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.trim(), "C=4 N=16 T=16 B=4");
}

#[test]
fn count_refuses_tall_towers() {
    let out = hoq(&[
        "count",
        "--type",
        "(((i,i),(i,i)),((i,i),(i,i)))",
        "--n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn encode_and_decode_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let structure = write(&dir, "graph.json", GRAPH);
    let out = hoq(&["encode", structure.to_str().unwrap(), "--symbol", "E"]);
    assert!(out.status.success());
    let bits = String::from_utf8_lossy(&out.stdout).trim().to_string();
    assert_eq!(bits.len(), 9);
    let out = hoq(&["decode", "--type", "(i,i)", "--n", "3", "--bits", &bits]);
    assert!(out.status.success());
    let literal: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert_eq!(literal, serde_json::json!([[0, 1], [1, 2]]));
}

#[test]
fn check_reports_the_fragment() {
    let dir = tempfile::tempdir().unwrap();
    let formula = write(
        &dir,
        "frag.hoq",
        "exists X:((i)). forall Y:((i)). X = Y | !(X = Y)",
    );
    let out = hoq(&["check", formula.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("order: 3"));
    assert!(stdout.contains("monadic: true"));
}

#[test]
fn normalize_emits_the_merged_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let formula = write(
        &dir,
        "merge.hoq",
        "(forall X:(i). exists Y:(i). P(X) & P(Y)) & (exists Z:(i). P(Z))",
    );
    let out = hoq(&["normalize", formula.to_str().unwrap(), "--form", "pnf"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.contains("exists Z:(i). forall X:(i). exists Y:(i)."),
        "got {stdout}"
    );
}

#[test]
fn equiv_finds_counterexamples() {
    let dir = tempfile::tempdir().unwrap();
    let lhs = write(&dir, "lhs.hoq", "exists x:i. P(x)");
    let rhs = write(&dir, "rhs.hoq", "forall x:i. P(x)");
    let vocab = write(&dir, "vocab.json", r#"{"P": "(i)"}"#);
    let out = hoq(&[
        "equiv",
        lhs.to_str().unwrap(),
        rhs.to_str().unwrap(),
        "--vocab",
        vocab.to_str().unwrap(),
        "--max-n",
        "3",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("inequivalent"));
    assert!(stdout.contains("counterexample"));
}

#[test]
fn reduce_checks_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let formula = write(&dir, "so.hoq", "exists X:(i). X(c)");
    let structure = write(
        &dir,
        "ordered.json",
        r#"{
            "universe": 2,
            "vocabulary": {"<": "(i,i)", "c": "i"},
            "interpretation": {"<": [[0,1]], "c": 1}
        }"#,
    );
    let out = hoq(&[
        "reduce",
        formula.to_str().unwrap(),
        structure.to_str().unwrap(),
        "--check",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("agreement: true"), "got {stdout}");
    assert!(stdout.contains("\"universe\": 4"));
}

#[test]
fn gen_output_reparses() {
    for which in ["plus", "lt", "eq", "bit", "overflow", "plus-mod"] {
        let out = hoq(&["gen", which, "--arity", "1", "--order", "2"]);
        assert!(out.status.success(), "{which}");
        let text = String::from_utf8_lossy(&out.stdout);
        hoq::parse::parse_formula(text.trim())
            .unwrap_or_else(|e| panic!("{which} output does not reparse: {e}"));
    }
    let out = hoq(&["gen", "card", "--op", "le", "--k", "2", "--type", "(i)"]);
    assert!(out.status.success());
}

#[test]
fn structured_and_human_outputs_agree_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let formula = write(&dir, "path.hoq", "TC[x; y : E(x,y)](c; d)");
    let structure = write(&dir, "graph.json", GRAPH);
    let human = hoq(&[
        "eval",
        formula.to_str().unwrap(),
        structure.to_str().unwrap(),
    ]);
    let json1 = hoq(&[
        "--json",
        "eval",
        formula.to_str().unwrap(),
        structure.to_str().unwrap(),
    ]);
    let json2 = hoq(&[
        "--json",
        "eval",
        formula.to_str().unwrap(),
        structure.to_str().unwrap(),
    ]);
    assert_eq!(
        json1.stdout, json2.stdout,
        "structured output must be byte-identical"
    );
    let doc: serde_json::Value =
        serde_json::from_slice(&json1.stdout).expect("one well-formed document");
    assert_eq!(doc["value"], serde_json::json!(true));
    assert!(String::from_utf8_lossy(&human.stdout).starts_with("true"));
}

#[test]
fn env_limits_apply_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let formula = write(&dir, "big.hoq", "exists X:(i,i). X(c,c)");
    let structure = write(&dir, "graph.json", GRAPH);
    // Environment forbids, so the run fails with the guard code.
    let out = Command::new(env!("CARGO_BIN_EXE_hoq"))
        .args([
            "eval",
            formula.to_str().unwrap(),
            structure.to_str().unwrap(),
        ])
        .env("HOQ_MAX_ENUM", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // The flag overrides the environment and the run succeeds.
    let out = Command::new(env!("CARGO_BIN_EXE_hoq"))
        .args([
            "--max-enum",
            "17000000",
            "eval",
            formula.to_str().unwrap(),
            structure.to_str().unwrap(),
        ])
        .env("HOQ_MAX_ENUM", "4")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let lhs = write(&dir, "lhs.hoq", "exists x:i. P(x)");
    let rhs = write(&dir, "rhs.hoq", "forall x:i. P(x)");
    let vocab = write(&dir, "vocab.json", r#"{"P": "(i)"}"#);
    let run = |jobs: &str| {
        hoq(&[
            "--jobs",
            jobs,
            "--json",
            "equiv",
            lhs.to_str().unwrap(),
            rhs.to_str().unwrap(),
            "--vocab",
            vocab.to_str().unwrap(),
            "--max-n",
            "3",
        ])
    };
    let one = run("1");
    let four = run("4");
    assert!(one.status.success() && four.status.success());
    assert_eq!(
        one.stdout, four.stdout,
        "counterexample must not depend on scheduling"
    );
}

#[test]
fn reduce_error_codes_distinguish_input_from_guards() {
    let dir = tempfile::tempdir().unwrap();
    let ordered = write(
        &dir,
        "ordered.json",
        r#"{
            "universe": 2,
            "vocabulary": {"<": "(i,i)", "c": "i"},
            "interpretation": {"<": [[0,1]], "c": 1}
        }"#,
    );
    // A nondeterministic fixed point has no translation rule: input error.
    let npfp = write(&dir, "n.hoq", "NPFP[P, x:i : P(x) ; P(x)](c)");
    let out = hoq(&["reduce", npfp.to_str().unwrap(), ordered.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // A vocabulary without the order symbol: input error.
    let unordered = write(
        &dir,
        "plain.json",
        r#"{"universe":2,"vocabulary":{"c":"i"},"interpretation":{"c":0}}"#,
    );
    let fo = write(&dir, "f.hoq", "c = c");
    let out = hoq(&["reduce", fo.to_str().unwrap(), unordered.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    // A target universe over the cap: guard refusal.
    let so = write(&dir, "so.hoq", "exists X:(i). X(c)");
    let out = hoq(&[
        "--max-target-universe",
        "2",
        "reduce",
        so.to_str().unwrap(),
        ordered.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}
