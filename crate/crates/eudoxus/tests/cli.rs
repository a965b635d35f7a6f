//! Black-box tests of the `eudoxus` binary: output shape, exit codes,
//! environment handling, the repl, and report files.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eudoxus"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn eval_prints_decimal_and_certificate() {
    let out = run(&["eval", "1/4 + 1/4", "--digits", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap().trim(), "0.500");
    let cert_line = lines.next().unwrap();
    assert!(cert_line.contains("certificate"), "got {cert_line:?}");
    assert!(cert_line.contains("proven"), "got {cert_line:?}");
}

#[test]
fn eval_json_round_trips_through_serde() {
    let out = run(&["eval", "sqrt(2)", "--digits", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["decimal"], "1.4142");
    assert_eq!(v["certificate"]["class"], "proven");
    // The error bound is an exact positive rational p/q.
    let bound = v["error_bound"].as_str().unwrap();
    let (p, q) = bound.split_once('/').unwrap();
    assert!(p.parse::<u128>().unwrap() > 0);
    assert!(q.parse::<u128>().unwrap() > 0);
}

#[test]
fn eval_error_exits_one() {
    for expr in ["1/(2 - 2)", "5/0", "sqrt(2"] {
        let out = run(&["eval", expr]);
        assert_eq!(out.status.code(), Some(1), "expr {expr:?}");
        assert!(stderr(&out).starts_with("error:"), "expr {expr:?}");
    }
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["eval", "1", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "--scale", "gigantic"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("small or full"));
    let out = run(&["verify", "--eps", "-3/4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn max_index_env_limits_evaluation() {
    let out = bin()
        .args(["eval", "sqrt(2)", "--digits", "10"])
        .env("MAX_INDEX", "100")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    let out = bin()
        .args(["eval", "sqrt(2)", "--digits", "10", "--max-index", "100"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    // A generous flag overrides a stingy environment.
    let out = bin()
        .args(["eval", "sqrt(2)", "--digits", "4", "--max-index", "1000000000000"])
        .env("MAX_INDEX", "100")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn repl_reads_lines_and_honors_commands() {
    let mut child = bin()
        .arg("repl")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"1/2 + 1/4\n:digits 3\n1/3\nbogus(\n:quit\nignored\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("0.7500000000"), "got {text:?}");
    assert!(text.contains("digits = 3"), "got {text:?}");
    assert!(text.contains("0.333"), "got {text:?}");
    assert!(stderr(&out).contains("error:"));
    assert!(!text.contains("ignored"));
}

#[test]
fn verify_writes_sorted_jsonl_report() {
    let dir = std::env::temp_dir().join(format!("eudoxus-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.jsonl");
    let out = run(&[
        "verify",
        "--scale",
        "small",
        "--seed",
        "11",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("0 failed"), "got {text:?}");
    let body = std::fs::read_to_string(&path).unwrap();
    let ids: Vec<String> = body
        .lines()
        .map(|line| {
            let v: serde_json::Value = serde_json::from_str(line).expect("each line is JSON");
            assert!(v["claim"].is_string());
            assert!(v["outcome"]["status"].is_string());
            v["check_id"].as_str().unwrap().to_owned()
        })
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted, "report lines must be sorted by check id");
    assert!(ids.iter().any(|id| id == "meta/coverage"));
    std::fs::remove_dir_all(&dir).ok();
}
