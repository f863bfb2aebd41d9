use std::path::PathBuf;
use std::process::{Command, Output};

fn dkheap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dkheap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dkheap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn run_replays_a_trace_file() {
    let trace = scratch("ok.trace", "# small\nI 5\nI 3\nK 0 1\nF\nD\nD\nD\n");
    let stats = trace.with_extension("stats");
    for s in ["amortized", "wc1", "wc2"] {
        let out = dkheap(&[
            "run",
            trace.to_str().unwrap(),
            "--strategy",
            s,
            "--audit",
            "paranoid",
            "--stats",
            stats.to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(String::from_utf8_lossy(&out.stdout).contains("7 ops"));
        let text = std::fs::read_to_string(&stats).unwrap();
        assert!(text.starts_with("n=0\nmax_rank="));
        assert!(text.contains("comparisons="));
    }
}

#[test]
fn malformed_trace_is_a_usage_error() {
    let trace = scratch("bad.trace", "I 1\nX 2\n");
    let out = dkheap(&["run", trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let stale = scratch("stale.trace", "I 1\nD\nK 0 0\n");
    assert_eq!(
        dkheap(&["run", stale.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn unknown_flags_are_usage_errors() {
    assert_eq!(
        dkheap(&["fuzz", "--strategy", "fastest"]).status.code(),
        Some(2)
    );
    assert_eq!(dkheap(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        dkheap(&["run", "/nonexistent/trace"]).status.code(),
        Some(2)
    );
}

#[test]
fn fuzz_bench_and_cert_pass() {
    let out = dkheap(&[
        "fuzz",
        "--traces",
        "2",
        "--ops",
        "2000",
        "--strategy",
        "wc2",
        "--seed",
        "9",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = dkheap(&[
        "bench",
        "--vertices",
        "300",
        "--edges",
        "2000",
        "--audit",
        "off",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = dkheap(&["cert", "--max-rank", "60"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("ranks <= 60"));
    assert_eq!(dkheap(&["cert", "--max-rank", "70"]).status.code(), Some(2));
}
