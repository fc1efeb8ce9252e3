use std::path::PathBuf;
use std::process::{Command, Output};

use qdyson::report::{Summary, VerificationReport};

fn qdyson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdyson"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("qdyson-cli-{}-{name}", std::process::id()))
}

#[test]
fn verify_holds() {
    let out = qdyson(&["verify", "qdyson", "--n", "2", "--a", "1,1,1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("HOLDS"));
    assert!(stdout(&out).contains("1 + 2*q + 2*q^2 + 1*q^3"));

    let out = qdyson(&["verify", "main", "--n", "2", "--a", "1,1,1", "--I", "0", "--J", "1"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn verify_rejects_malformed_input() {
    // overlap, length mismatch, unknown identity, missing flag
    for args in [
        &["verify", "kadell", "--n", "2", "--a", "1,1,1", "--I", "0", "--J", "0"][..],
        &["verify", "qdyson", "--n", "3", "--a", "1,1,1"],
        &["verify", "nope", "--n", "2", "--a", "1,1,1"],
        &["verify", "qdyson", "--a", "1,1,1"],
        &["sweep", "qdyson", "--n", "2", "--jobs", "0"],
    ] {
        assert_eq!(code(&qdyson(args)), 2, "{args:?}");
    }
}

#[test]
fn npc_violation_is_a_usage_error() {
    // j_2 = 0 < i_1 = 1 < j_3 = 2 < i_2 = 3 for the paired order
    let out = qdyson(&["verify", "main", "--n", "4", "--a", "1,1,1,1,1", "--I", "1,3,4", "--J", "0,0,2"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.starts_with("error"), "{err}");
}

#[test]
fn failing_identity_exits_one() {
    let out = qdyson(&["verify", "kadell-q", "--n", "2", "--a", "1,1,1", "--I", "0", "--J", "1"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAILS"));
}

#[test]
fn counterexample_confirms_failure() {
    let path = scratch("counterexample.json");
    let out = qdyson(&["counterexample", "--json", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("(1−q^3)(1+2q+3q^2+2q^3)"));
    assert!(text.contains("(1−q^4)(1+q)(1+q+q^2)"));
    let line = std::fs::read_to_string(&path).unwrap();
    let report = VerificationReport::from_json(line.trim()).unwrap();
    assert!(!report.holds);
    std::fs::remove_file(path).ok();
}

#[test]
fn sweep_writes_reports_and_summary() {
    let path = scratch("sweep.jsonl");
    let out = qdyson(&["sweep", "qdyson", "--n", "2", "--amax", "3", "--json", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 65);
    for line in &lines[..64] {
        let r = VerificationReport::from_json(line).unwrap();
        assert!(r.holds);
        assert_eq!(&r.to_json(), line);
    }
    let summary: Summary = serde_json::from_str(lines[64]).unwrap();
    assert_eq!((summary.total, summary.passed, summary.failed), (64, 64, 0));
    std::fs::remove_file(path).ok();
}

#[test]
fn sweep_output_is_deterministic() {
    let run = |jobs: &str| {
        let path = scratch(&format!("det-{jobs}.jsonl"));
        let out = qdyson(&["sweep", "kadell", "--n", "2", "--amax", "1", "--jobs", jobs, "--json", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::remove_file(path).ok();
        // elapsed_ms varies between runs
        text.lines()
            .map(|l| match VerificationReport::from_json(l) {
                Ok(r) => format!("{} {:?} {} {}", r.identity, r.params, r.lhs, r.rhs),
                Err(_) => l.to_string(),
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(run("1"), run("1"));
    assert_eq!(run("1"), run("3"));
}

#[test]
fn sweep_main_and_lemmas() {
    assert_eq!(code(&qdyson(&["sweep", "main", "--n", "2", "--amax", "1"])), 0);
    // set semantics only differs from the default when J repeats a value
    assert_eq!(code(&qdyson(&["sweep", "main", "--n", "2", "--amax", "1", "--m", "1", "--semantics", "set"])), 0);
    let out = qdyson(&["sweep", "main", "--n", "2", "--amax", "1", "--m", "2..2", "--semantics", "set"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("I=[0, 2] J=[1, 1]: FAILS"));
    let out = qdyson(&["sweep", "lemmas", "--n", "4", "--amax", "3", "--samples", "50", "--seed", "5"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"seed\":5"));
}
