use std::path::PathBuf;
use std::process::{Command, Output};

fn flexcut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flexcut")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("flexcut-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn solve_never_beats_oracle() {
    let dir = scratch("solve");
    let d = dir.to_str().unwrap();
    assert!(flexcut(&["gen", "--kind", "flex", "--count", "4", "--seed", "3", "--out", d]).status.success());
    for i in 0..4 {
        let file = format!("{d}/inst-{i:04}.txt");
        let sol = flexcut(&["solve", "fgc", "--input", &file]);
        let opt = flexcut(&["oracle", "fgc", "--input", &file]);
        assert!(sol.status.success() && opt.status.success());
        assert!(json(&sol)["cost"].as_u64() >= json(&opt)["cost"].as_u64());
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn augment_round_trip() {
    let dir = scratch("augment");
    let d = dir.to_str().unwrap();
    assert!(flexcut(&["gen", "--kind", "augment", "--count", "4", "--seed", "9", "--out", d]).status.success());
    let file = format!("{d}/inst-0002.txt");
    for solver in ["pd2", "exact"] {
        let out = flexcut(&["solve", "augment", "--input", &file, "--single-level-solver", solver]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let sol = json(&out);
        assert_eq!(sol["final_connectivity"], sol["k"]);
    }
    let out = flexcut(&["oracle", "augment", "--input", &file]);
    assert!(out.status.success());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn bench_writes_one_report_per_file() {
    let dir = scratch("bench");
    let d = dir.to_str().unwrap();
    assert!(flexcut(&["gen", "--kind", "flex", "--count", "3", "--seed", "1", "--out", d]).status.success());
    let report = dir.with_extension("json");
    let out = flexcut(&["bench", "--corpus", d, "--out", report.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let reports: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(reports.as_array().map(Vec::len), Some(3));
    let _ = std::fs::remove_dir_all(&dir);
    let _ = std::fs::remove_file(&report);
}

#[test]
fn verify_prints_report() {
    let out = flexcut(&["verify", "--suite", "forest", "--count", "50", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = json(&out);
    assert_eq!(rep["suite"], "forest");
    assert_eq!(rep["failures"], 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(flexcut(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(flexcut(&["solve", "fgc", "--input", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(flexcut(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(flexcut(&["solve", "fgc", "--input", "x", "--kecss", "bogus"]).status.code(), Some(2));
}
