use std::process::{Command, Output};

use serde_json::Value;

fn intramorph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intramorph"))
        .args(args)
        .env_remove("INTRAMORPH_SEED")
        .output()
        .expect("spawn intramorph")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn zero_timing(text: &str) -> String {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v["wall_time_ms"] = Value::from(0);
    serde_json::to_string_pretty(&v).unwrap() + "\n"
}

#[test]
fn list_prints_every_campaign() {
    let out = intramorph(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().count() >= 6);
    assert!(text.contains("sorting-intramorphic"));
    assert!(text.contains("granularity=parameter-added"));
    assert!(text.contains("black-box"));
}

#[test]
fn mutants_lists_catalog() {
    let out = intramorph(&["mutants", "--campaign", "montecarlo-convergence"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("wrong-scale"));
    assert!(text
        .lines()
        .any(|l| l.starts_with("boundary-strict") && l.contains("blind-spot")));
}

#[test]
fn violation_exits_one_with_counterexample() {
    let out = intramorph(&[
        "run",
        "--campaign",
        "sorting-intramorphic",
        "--mutant",
        "swap-index-i",
        "--seed",
        "42",
        "--iterations",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let golden = include_str!("golden/sorting_intramorphic_swap_index_i.json");
    assert_eq!(zero_timing(&stdout(&out)), golden);
}

#[test]
fn clean_run_exits_zero_without_counterexample() {
    let out = intramorph(&[
        "run",
        "--campaign",
        "knapsack-optimality",
        "--iterations",
        "200",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["violations"], 0);
    assert_eq!(v["seed"], 42);
    assert!(v.get("counterexample").is_none());
    assert!(v.get("statistics").is_none());
    assert_eq!(v["mutant"], Value::Null);
    assert_eq!(v["first_violation_iteration"], Value::Null);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "schema_version",
            "campaign",
            "seed",
            "mutant",
            "iterations_run",
            "violations",
            "first_violation_iteration",
            "execution_errors",
            "wall_time_ms"
        ]
    );
}

#[test]
fn csv_report_has_header_and_one_row() {
    let out = intramorph(&[
        "run",
        "--campaign",
        "montecarlo-convergence",
        "--iterations",
        "10",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let (head, last) = text.trim_end().rsplit_once(',').unwrap();
    let _: u64 = last.parse().unwrap();
    let golden = include_str!("golden/montecarlo_convergence.csv");
    assert_eq!(format!("{head},0\n"), golden);
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn csv_quotes_counterexample_fields() {
    let out = intramorph(&[
        "run",
        "--campaign",
        "ast-tokens",
        "--mutant",
        "paren-left-as-right",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    let row = reader.records().next().unwrap().unwrap();
    let col = |name: &str| &row[headers.iter().position(|h| h == name).unwrap()];
    assert!(!col("counterexample_input").is_empty());
    assert!(String::from_utf8_lossy(&out.stdout)
        .contains(&format!("\"{}\"", col("counterexample_input"))));
}

#[test]
fn report_file_and_seed_sources() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.to_str().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_intramorph"))
        .args([
            "run",
            "--campaign",
            "sorting-unit",
            "--iterations",
            "5",
            "--report",
            p,
        ])
        .env("INTRAMORPH_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["seed"], 77);

    let out = Command::new(env!("CARGO_BIN_EXE_intramorph"))
        .args([
            "run",
            "--campaign",
            "sorting-unit",
            "--iterations",
            "5",
            "--seed",
            "3",
        ])
        .env("INTRAMORPH_SEED", "77")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 3);
}

#[test]
fn repetitions_override() {
    let out = intramorph(&[
        "run",
        "--campaign",
        "montecarlo-convergence",
        "--iterations",
        "3",
        "--k",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["statistics"]["k"], 3);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys[keys.len() - 2..], ["statistics", "wall_time_ms"]);
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    let cases: [&[&str]; 7] = [
        &["run", "--campaign", "nonexistent"],
        &[
            "run",
            "--campaign",
            "ast-tokens",
            "--mutant",
            "swap-index-i",
        ],
        &["run", "--campaign", "sorting-unit", "--bogus"],
        &["run", "--campaign", "sorting-unit", "--k", "3"],
        &["run", "--campaign", "montecarlo-convergence", "--k", "2"],
        &["run", "--campaign", "sorting-unit", "--iterations", "0"],
        &["mutants", "--campaign", "nope"],
    ];
    for args in cases {
        let out = intramorph(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr(&out).trim_end().lines().count(), 1, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn unwritable_report_exits_two() {
    let out = intramorph(&[
        "run",
        "--campaign",
        "sorting-unit",
        "--report",
        "/nonexistent-dir/report.json",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    assert_eq!(intramorph(&["--help"]).status.code(), Some(0));
    assert_eq!(intramorph(&["run", "--help"]).status.code(), Some(0));
}

#[test]
fn matrix_csv_has_one_row_per_cell() {
    let out = intramorph(&["matrix", "--seed", "42", "--iterations", "50"]);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    // one control per campaign plus each campaign's catalogued mutants
    assert_eq!(rows.len(), 10 + 5 * 3 + 3 + 3 + 3 * 3);
    let headers = reader.headers().unwrap().clone();
    let as_expected = headers.iter().position(|h| h == "as_expected").unwrap();
    let all = rows.iter().all(|r| &r[as_expected] == "true");
    assert_eq!(out.status.code(), Some(if all { 0 } else { 1 }));
}
