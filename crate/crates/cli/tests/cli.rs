use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn ipchoice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ipchoice"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn problem(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const HEADER: &str = r#""schema": "ipchoice/1", "states": ["H", "T"]"#;

#[test]
fn empty_options_give_an_empty_report() {
    let f = problem(&format!(r#"{{{HEADER}, "options": []}}"#));
    let out = ipchoice(&["choose", "--input", path(&f)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"], serde_json::json!([]));
}

#[test]
fn float_literals_are_schema_errors() {
    let f = problem(&format!(
        r#"{{{HEADER}, "model": {{"rule": "meu", "model": [0.5, 0.5]}}, "options": [[[1, 0]]]}}"#
    ));
    let out = ipchoice(&["choose", "--input", path(&f)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("floating-point"));
}

#[test]
fn dimension_and_schema_mismatches_exit_2() {
    let f = problem(&format!(r#"{{{HEADER}, "options": [[[1, 0, 0]]]}}"#));
    assert_eq!(
        ipchoice(&["choose", "--input", path(&f)]).status.code(),
        Some(2)
    );
    let f = problem(r#"{"schema": "ipchoice/0", "states": ["H"]}"#);
    assert_eq!(
        ipchoice(&["choose", "--input", path(&f)]).status.code(),
        Some(2)
    );
    assert_eq!(
        ipchoice(&["choose", "--input", "/nonexistent/problem.json"])
            .status
            .code(),
        Some(2)
    );
    let f = problem(&format!(
        r#"{{{HEADER}, "model": {{"rule": "meu", "model": ["1/2", "1/3"]}}, "options": []}}"#
    ));
    assert_eq!(
        ipchoice(&["choose", "--input", path(&f)]).status.code(),
        Some(2)
    );
}

#[test]
fn selection_cap_exits_3() {
    let f = problem(&format!(
        r#"{{{HEADER}, "queries": [{{"query": "natex",
            "assessment": [[[1, -1], [-1, 1]], [[2, -1], [-1, 2]]],
            "set": [[1, 1]]}}]}}"#
    ));
    let out = ipchoice(&["check", "--input", path(&f), "--cap-selections", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let out = ipchoice(&["check", "--input", path(&f), "--cap-selections", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"][0]["verdict"], "member");
}

#[test]
fn inconsistent_assessment_has_forced_certificate() {
    let f = problem(&format!(
        r#"{{{HEADER}, "queries": [{{"query": "consistency", "assessment": [[[1, -1]], [[-1, 1]]]}}]}}"#
    ));
    let out = ipchoice(&["check", "--input", path(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"][0];
    assert_eq!(r["verdict"], "inconsistent");
    assert_eq!(r["certificate"]["refutations"].as_array().unwrap().len(), 1);
}

#[test]
fn duplicate_options_keep_input_indices() {
    let f = problem(&format!(
        r#"{{{HEADER}, "model": {{"rule": "meu", "model": ["1/2", "1/2"]}},
            "options": [[[1, 0], [0, 0], [1, 0]]]}}"#
    ));
    let out = ipchoice(&["choose", "--input", path(&f)]);
    let r = &json(&out)["results"][0];
    assert_eq!(r["chosen"], serde_json::json!([0, 2]));
    assert_eq!(r["certificates"].as_array().unwrap().len(), 3);
}

#[test]
fn gen_is_deterministic_and_feeds_choose() {
    let a = ipchoice(&["gen", "--seed", "1", "--profile", "small"]);
    let b = ipchoice(&["gen", "--seed", "1", "--profile", "small"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let p = json(&a);
    let states = p["states"].as_array().unwrap().len();
    assert!((2..=3).contains(&states));
    assert!(p["model"]["model"]["vertices"].as_array().unwrap().len() <= 4);
    for set in p["options"].as_array().unwrap() {
        assert!(set.as_array().unwrap().len() <= 5);
    }

    for profile in ["small", "medium", "adversarial"] {
        for seed in ["2", "3"] {
            let out = ipchoice(&["gen", "--seed", seed, "--profile", profile]);
            let f = problem(std::str::from_utf8(&out.stdout).unwrap());
            let chosen = ipchoice(&["choose", "--input", path(&f)]);
            assert_eq!(chosen.status.code(), Some(0), "{profile} {seed}");
            let checked = ipchoice(&["check", "--input", path(&f)]);
            assert_eq!(checked.status.code(), Some(0), "{profile} {seed}");
            let subset = &json(&checked)["results"][0];
            assert_eq!(subset["verdict"], "holds");
        }
    }
    assert_eq!(
        ipchoice(&["gen", "--profile", "huge"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_runs_suites_and_flags_vacuous_passes() {
    let out = ipchoice(&["verify", "--seed", "7", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let results = r["results"].as_array().unwrap();
    assert_eq!(results.len(), 12);
    assert!(results
        .iter()
        .all(|s| s["passed"] == true && s["vacuous"] == true));

    let f = problem(&format!(
        r#"{{{HEADER}, "queries": [{{"query": "suite", "suite": "e-subset-m", "trials": 40}}]}}"#
    ));
    let out = ipchoice(&["verify", "--input", path(&f), "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"][0]["trials"], 40);

    let f = problem(&format!(
        r#"{{{HEADER}, "queries": [{{"query": "suite", "suite": "nope"}}]}}"#
    ));
    assert_eq!(
        ipchoice(&["verify", "--input", path(&f)]).status.code(),
        Some(2)
    );
}

#[test]
fn reports_are_stable_and_recheck_catches_tampering() {
    let input = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/f1.json");
    let first = ipchoice(&["choose", "--input", input]);
    let second = ipchoice(&["choose", "--input", input]);
    assert_eq!(first.stdout, second.stdout);

    let text = String::from_utf8(first.stdout).unwrap();
    let tampered = text.replacen("\"margin\": \"1/10\"", "\"margin\": \"1/5\"", 1);
    assert_ne!(text, tampered);
    let report = problem(&tampered);
    let out = ipchoice(&["recheck", "--recheck", path(&report), "--input", input]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("margin"));

    let report = problem(&text);
    let out = ipchoice(&["recheck", "--recheck", path(&report)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_report_rechecks_without_input() {
    let out = ipchoice(&["verify", "--seed", "3", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = problem(std::str::from_utf8(&out.stdout).unwrap());
    let again = ipchoice(&["recheck", "--recheck", path(&report)]);
    assert_eq!(again.status.code(), Some(0));
}
