use std::process::{Command, Output};

use serde_json::Value;

fn tenuniq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tenuniq"))
        .args(args)
        .env_remove("TENUNIQ_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = tenuniq(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn bounds_table_and_json() {
    let o = tenuniq(&["bounds", "--dims", "4x5x6"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("largest guaranteed rank: 7"));

    let v = json(&["bounds", "--dims", "8x20", "--sfs", "--format", "json"]);
    assert_eq!(v["command"], "bounds");
    assert!(v["tool_version"].is_string());
    assert_eq!(v["results"]["overall_max"], 21);
}

#[test]
fn csv_numbers_match_json() {
    let v = json(&["bounds", "--dims", "7x8x30", "--format", "json"]);
    let o = tenuniq(&["bounds", "--dims", "7x8x30", "--format", "csv"]);
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let header = r.headers().unwrap().clone();
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    let entries = v["results"]["entries"].as_array().unwrap();
    assert_eq!(rows.len(), entries.len());
    for (row, e) in rows.iter().zip(entries) {
        assert_eq!(row[col("max_rank")], e["max_rank"].to_string());
    }
}

#[test]
fn certify_files() {
    let dir = tempfile::tempdir().unwrap();
    let id = write(
        &dir,
        "id.json",
        r#"{"field": "real", "A": [[1,0,0],[0,1,0],[0,0,1]], "B": [[1,0,0],[0,1,0],[0,0,1]], "C": [[1,0,0],[0,1,0],[0,0,1]]}"#,
    );
    let v = json(&["certify", &id, "--format", "json"]);
    assert_eq!(v["results"]["verdict"], "UNIQUE_PROVEN");

    let dup = write(
        &dir,
        "dup.json",
        r#"{"field": "real", "A": [[1,0,1],[0,1,0]], "B": [[1,0,1],[0,1,0]], "C": [[1,0,0],[0,1,0],[0,0,1]]}"#,
    );
    let v = json(&["certify", &dup, "--format", "json"]);
    assert_eq!(v["results"]["verdict"], "NOT_PROVEN");

    let sfs = write(
        &dir,
        "sfs.json",
        r#"{"field": "complex", "sfs": true, "A": [[[1,0],[0,0]],[[0,0],[1,1]]], "C": [[[1,0],[0,0]],[[0,0],[1,0]]]}"#,
    );
    assert!(tenuniq(&["certify", &sfs]).status.success());

    let broken = write(&dir, "broken.json", r#"{"field": "real", "A": [[1]"#);
    assert_eq!(tenuniq(&["certify", &broken]).status.code(), Some(1));
    let missing = dir.path().join("missing.json");
    assert_eq!(
        tenuniq(&["certify", missing.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn generic_check_reports_passes() {
    let v = json(&[
        "generic-check",
        "--dims",
        "4x5x6",
        "--rank",
        "6",
        "--trials",
        "3",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["results"]["any_pass_trials"], 3);
}

#[test]
fn empirical_small_run() {
    let v = json(&[
        "empirical",
        "--dims",
        "3x4x5",
        "--rank",
        "2",
        "--inits",
        "3",
        "--max-iters",
        "200",
        "--format",
        "json",
    ]);
    assert_eq!(v["results"]["runs"].as_array().unwrap().len(), 3);
    assert!(v["results"]["verdict"].is_string());
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["bounds", "--dims", "0x2x2"][..],
        &["bounds", "--dims", "4x5"],
        &["bounds", "--dims", "4x5x6", "--max-rank", "0"],
        &["generic-check", "--dims", "4x5x6", "--rank", "0"],
        &["frobnicate"],
        &[],
    ] {
        let o = tenuniq(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
    let o = Command::new(env!("CARGO_BIN_EXE_tenuniq"))
        .args(["bounds", "--dims", "4x5x6"])
        .env("TENUNIQ_THREADS", "abc")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let o = tenuniq(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("generic-check"));
}
