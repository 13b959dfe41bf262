//! Shipped fixtures must reproduce their expected reports byte for byte.
//! Set `IPCHOICE_BLESS=1` to rewrite the expected files.

use std::path::{Path, PathBuf};
use std::process::Command;

const CASES: &[(&str, &str)] = &[
    ("f1", "choose"),
    ("f1", "check"),
    ("f1", "verify"),
    ("mixing", "check"),
    ("mixing", "verify"),
    ("prop5", "choose"),
    ("prop5", "check"),
    ("prop5", "verify"),
    ("separation", "choose"),
    ("separation", "check"),
];

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ipchoice"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8"),
    )
}

#[test]
fn fixtures_match_expected_reports() {
    let bless = std::env::var_os("IPCHOICE_BLESS").is_some();
    for (name, command) in CASES {
        let input = format!("{name}.json");
        let (code, stdout) = run(&[command, "--input", &input]);
        assert_eq!(code, 0, "{name} {command} exited with {code}");
        let expected = fixtures()
            .join("expected")
            .join(format!("{name}.{command}.json"));
        if bless {
            std::fs::create_dir_all(expected.parent().unwrap()).unwrap();
            std::fs::write(&expected, &stdout).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&expected)
            .unwrap_or_else(|e| panic!("missing {}: {e}", expected.display()));
        assert_eq!(
            stdout,
            want,
            "{name} {command} differs from {}",
            expected.display()
        );
    }
}

#[test]
fn expected_reports_recheck() {
    for (name, command) in CASES {
        let input = format!("{name}.json");
        let report = format!("expected/{name}.{command}.json");
        let (code, stdout) = run(&["recheck", "--recheck", &report, "--input", &input]);
        assert_eq!(code, 0, "recheck of {name} {command} exited with {code}");
        assert!(stdout.contains("\"identical\": true"));
    }
}

#[test]
fn f1_reports_the_documented_sets() {
    let text = std::fs::read_to_string(fixtures().join("expected/f1.choose.json")).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    let chosen: Vec<_> = report["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["rule"].as_str().unwrap(), r["chosen"].clone()))
        .collect();
    assert_eq!(chosen[0], ("e-admissibility", serde_json::json!([0, 1])));
    assert_eq!(chosen[1], ("maximality", serde_json::json!([0, 1, 2])));

    let text = std::fs::read_to_string(fixtures().join("expected/f1.check.json")).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    let results = report["results"].as_array().unwrap();
    let lower = results.iter().find(|r| r["kind"] == "lower").unwrap();
    assert_eq!(lower["value"], "-1/2");
    let binary = results.iter().find(|r| r["kind"] == "binary").unwrap();
    assert_eq!(binary["verdict"], "not binary");
    assert_eq!(binary["separators"], serde_json::json!([2]));
}
