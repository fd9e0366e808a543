//! End-to-end checks of the `dynspanner` binary: subcommands, exit codes,
//! and the trace file format.

use std::fs;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynspanner"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gen_then_run_both_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.trace");
    let path = path.to_str().unwrap();
    let out = bin(&[
        "gen", "--n", "16", "--m", "64", "--deletions", "16", "--pattern", "random", "--seed", "4",
        "--out", path,
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(path).unwrap();
    assert!(text.starts_with("spanner-trace v1\nn 16 m 64 gamma 1\n"));
    assert_eq!(text.lines().count(), 2 + 64 + 16);

    let out = bin(&["run", "--trace", path, "--algorithm", "engine", "--audit-every", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let report = stdout(&out);
    assert!(report.contains("stretch PASS"));
    assert!(report.contains("insert_calls: "));
    assert!(report.lines().any(|l| l.starts_with("summary external_insertions=64 deletions=16")));

    let out = bin(&["run", "--trace", path, "--algorithm", "low-recourse"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("stretch PASS measured="));
    assert!(stdout(&out).contains("bound=8"));

    let out = bin(&["audit", "--trace", path]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("# final audit (step 80, 1 audits total)"));
}

#[test]
fn summary_mode_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("adv.trace");
    let path = path.to_str().unwrap();
    let gen = bin(&["gen", "--n", "24", "--m", "96", "--deletions", "24", "--pattern", "adversarial", "--seed", "2"]);
    assert!(gen.status.success());
    fs::write(path, &gen.stdout).unwrap();
    let strip = |s: String| {
        s.split_whitespace()
            .filter(|kv| !kv.starts_with("wall_time") && !kv.contains("_ns="))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let a = strip(stdout(&bin(&["run", "--trace", path, "--summary"])));
    let b = strip(stdout(&bin(&["run", "--trace", path, "--summary"])));
    assert_eq!(a, b);
    assert!(a.contains("deletions=24"));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.trace");
    fs::write(&bad, "spanner-trace v1\nn 4 m 8 gamma 1\n- 0 1\n").unwrap();
    let out = bin(&["run", "--trace", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    fs::write(&bad, "n 4 m 8 gamma 1\n").unwrap();
    assert_eq!(bin(&["run", "--trace", bad.to_str().unwrap()]).status.code(), Some(2));

    // m < n cannot initialize the engine.
    fs::write(&bad, "spanner-trace v1\nn 8 m 4 gamma 1\n").unwrap();
    assert_eq!(bin(&["run", "--trace", bad.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(bin(&["run", "--trace", "/nonexistent/trace"]).status.code(), Some(2));
    assert_eq!(
        bin(&["gen", "--n", "8", "--m", "24", "--deletions", "9"]).status.code(),
        Some(2)
    );
}

#[test]
fn budget_overrun_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("over.trace");
    fs::write(
        &path,
        "spanner-trace v1\nn 2 m 2 gamma 1\n# three deletions on two vertices\n+ 0 1\n- 0 1\n+ 0 1\n- 0 1\n+ 0 1\n- 0 1\n",
    )
    .unwrap();
    let out = bin(&["run", "--trace", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("budget_exceeded: true"));
}

#[test]
fn empty_trace_passes_vacuously() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.trace");
    fs::write(&path, "spanner-trace v1\nn 4 m 8 gamma 1\n").unwrap();
    let out = bin(&["run", "--trace", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("insert_calls: 0"));
}
