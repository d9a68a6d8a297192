//! End-to-end runs of the binary, pinned to the documented outputs.

use std::io::Write;
use std::process::{Command, Output};

fn taquin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taquin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn reference_tableau_file() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "1 2 5 9 11 / 3 7 10 / 4 8 13 / 6 12").unwrap();
    f
}

#[test]
fn char_by_ribbon_rule() {
    let out = taquin(&["char", "--shape", "2,1", "--class", "3", "--method", "mn"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "-1");
}

#[test]
fn char_methods_agree() {
    for method in ["mn", "skew", "formula"] {
        let out = taquin(&[
            "char", "--shape", "4,2,1", "--class", "3,1,1,1,1", "--method", method,
        ]);
        assert!(out.status.success(), "method {method}");
        assert_eq!(stdout(&out).trim(), "-1", "method {method}");
    }
}

#[test]
fn counts() {
    let out = taquin(&["count-standard", "--shape", "5,3,3,2"]);
    assert!(out.status.success());
    let f: u64 = stdout(&out).trim().parse().unwrap();

    let out = taquin(&["count-skew", "--shape", "5,3,3,2/3,2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "588");

    let out = taquin(&["count-skew", "--shape", "5,3,3,2/0"]);
    assert_eq!(stdout(&out).trim(), f.to_string());

    // non-containment is a zero count, not an error
    let out = taquin(&["count-skew", "--shape", "2,1/3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn count_json_has_schema() {
    let out = taquin(&["count-standard", "--shape", "3,2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["schema"], "taquin/count/1");
    assert_eq!(v["count"], "5");
}

#[test]
fn derive_pair_formula() {
    let out = taquin(&["derive", "--hook", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1/2 cp^(1,1) + cp^(2) - 1/2 cp^(1)"));
    assert!(text.contains("<^(1) v^(1) + 2 <^(1)"));

    let out = taquin(&["derive", "--hook", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["schema"], "taquin/derive/1");
    assert_eq!(v["mu"], "2");
    assert_eq!(v["expression"].as_array().unwrap().len(), 3);
}

#[test]
fn derive_square_reports_route() {
    let out = taquin(&["derive", "--mu", "2,2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("derivation routes"));
    assert!(text.contains("2,2: growth relation at 2,1"));
}

#[test]
fn jdt_trace_replays_reference_slides() {
    let file = reference_tableau_file();
    let out = taquin(&[
        "jdt",
        "--shape",
        "5,3,3,2",
        "--tableau",
        file.path().to_str().unwrap(),
        "--remove",
        "12,5",
        "--trace",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("slide 12: path (1,3) (1,2) (1,1) (0,1) (0,0)"));
    assert!(text.contains("slide 5: path (2,0) (1,0)"));
    assert!(text.contains("skew shape: 5,3,3,2/2"));
    assert!(text.contains("skew tableau: 2 8 10 / 1 3 9 / 4 6 11 / 5 7"));
    assert!(text.contains("exit order: 1 2"));
}

#[test]
fn trace_forest_dot_output() {
    let file = reference_tableau_file();
    let out = taquin(&[
        "trace-forest",
        "--tableau",
        file.path().to_str().unwrap(),
        "--dot",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("->").count(), 12);
    assert!(text.contains("\"(1,3)\" -> \"(1,2)\""));
}

#[test]
fn verify_reports_and_exit_code() {
    let out = taquin(&["verify", "--mu", "2", "--nmax", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("lambda\tformula_value\toracle\tok"));
    assert!(text.lines().skip(1).all(|l| l.ends_with("true")));

    let out = taquin(&["verify", "--mu", "3", "--nmax", "2"]);
    assert!(!out.status.success());
}

#[test]
fn char_table_tsv() {
    let out = taquin(&["char-table", "--n", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "lambda\\mu\t3\t2,1\t1,1,1");
    assert_eq!(lines[1], "3\t1\t1\t1");
    assert_eq!(lines[2], "2,1\t-1\t0\t2");
    assert_eq!(lines[3], "1,1,1\t1\t-1\t1");
}

#[test]
fn deterministic_output() {
    let a = taquin(&["derive", "--mu", "3,1", "--format", "json"]);
    let b = taquin(&["derive", "--mu", "3,1", "--format", "json"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn bad_input_fails_cleanly() {
    let out = taquin(&["count-standard", "--shape", "3,5"]);
    assert!(!out.status.success());
    let out = taquin(&["char", "--shape", "2,1", "--class", "4"]);
    assert!(!out.status.success());
}
