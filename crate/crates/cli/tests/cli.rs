//! End-to-end tests of the `mntkit` binary: reference subcommand outputs,
//! the JSON round trip between subcommands, determinism, and the exit-code
//! contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn mntkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mntkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    reader
        .records()
        .map(|r| r.expect("CSV parses").iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn generate_reproduces_reference_family_counts() {
    for (k, expected_rows) in [("3", 24usize), ("4", 27), ("6", 26)] {
        let out = mntkit(&["generate", "--k", k, "--hmax", "6", "--format", "csv"]);
        assert!(out.status.success(), "generate --k {k} failed");
        let rows = csv_rows(&stdout_of(&out));
        assert_eq!(rows[0], ["k", "h", "d", "t", "r", "q"], "header");
        assert_eq!(rows.len() - 1, expected_rows, "family count at k = {k}");
        assert!(rows[1..].iter().all(|row| row[0] == k));
    }
}

#[test]
fn count_matches_reference_densities() {
    let out = mntkit(&["count", "--k", "6", "--h", "4", "--format", "csv"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout_of(&out));
    assert_eq!(rows[0], ["d", "n"]);
    assert_eq!(rows.len() - 1, 16, "d ranges over 1..=4h");
    for row in &rows[1..] {
        let d: u64 = row[0].parse().expect("d parses");
        let n: u64 = row[1].parse().expect("n parses");
        let expected = match d {
            1 | 3 => 1,
            7 | 13 => 2,
            _ => 0,
        };
        assert_eq!(n, expected, "N_d at d = {d}");
    }
}

#[test]
fn verify_table_flags_exactly_the_known_defects() {
    let out = mntkit(&["verify-table", "--builtin", "--format", "csv"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout_of(&out));
    assert_eq!(rows.len() - 1, 68, "printed reference rows");

    let with_verdict = |verdict: &str| -> Vec<&Vec<String>> {
        rows[1..].iter().filter(|r| r[6] == verdict).collect()
    };
    assert_eq!(with_verdict("consistent").len(), 62);

    let misprinted = with_verdict("misprinted-subgroup");
    assert_eq!(misprinted.len(), 2, "subgroup misprints");
    for row in &misprinted {
        assert_eq!((row[1].as_str(), row[2].as_str()), ("6", "5"));
        assert_eq!(row[7], "corrected r = 19x^2 + 15x + 3");
    }

    let malformed = with_verdict("malformed-polynomial");
    assert_eq!(malformed.len(), 1, "malformed field polynomials");
    assert_eq!(
        (malformed[0][1].as_str(), malformed[0][2].as_str()),
        ("3", "6")
    );

    let misplaced = with_verdict("misplaced-cofactor");
    assert_eq!(misplaced.len(), 3, "cofactor misplacements");
    for row in &misplaced {
        assert_eq!((row[1].as_str(), row[2].as_str()), ("4", "3"));
        assert_eq!(row[7], "true h = 5");
    }
}

#[test]
fn json_output_round_trips_between_subcommands() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("families-k6-h2.json");
    let path = path.to_str().expect("tmp path is UTF-8");

    let out = mntkit(&[
        "generate", "--k", "6", "--hmax", "2", "--format", "json", "-o", path,
    ]);
    assert!(out.status.success());

    // The generated JSON feeds reduce-pell without loss.
    let out = mntkit(&["reduce-pell", "--input", path, "--format", "json"]);
    assert!(out.status.success());
    let reductions: serde_json::Value =
        serde_json::from_str(&stdout_of(&out)).expect("reduce-pell emits JSON");
    let reductions = reductions.as_array().expect("array of reductions");
    assert_eq!(reductions.len(), 3, "k = 6 has 1 + 2 families for h <= 2");
    assert_eq!(reductions[0]["w0"], "3");
    assert_eq!(reductions[0]["w1"], "-4");
    assert_eq!(reductions[0]["w2"], "8");
    assert_eq!(reductions[0]["u"], "3");
    assert_eq!(reductions[0]["f"], "-8");

    // The same file drives both search modes, which must agree instance by
    // instance (the pell root bound covers the sweep's seed interval).
    let sweep = mntkit(&[
        "search", "--input", path, "--index", "0", "--x-min", "-10", "--x-max", "10",
        "--d-max", "100", "--format", "csv",
    ]);
    assert!(sweep.status.success());
    let pell = mntkit(&[
        "search", "--input", path, "--index", "0", "--mode", "pell", "--d-max", "100",
        "--y-limit", "100", "--format", "csv",
    ]);
    assert!(pell.status.success());
    let sweep_rows = csv_rows(&stdout_of(&sweep));
    assert_eq!(
        sweep_rows[1],
        ["-1", "5", "7", "-1", "1", "6", "19", "1", "0.827087"],
        "the first reference instance"
    );
    assert_eq!(
        sweep.stdout,
        pell.stdout,
        "sweep and pell searches emit identical instances"
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let stats_args = [
        "stats", "--k", "6", "--hmax", "1", "--index", "0", "--c-bound", "50",
        "--rho-bound", "20", "--euler-p", "1000", "--format", "json",
    ];
    let first = mntkit(&stats_args);
    let second = mntkit(&stats_args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "stats output is deterministic");

    let generate_args = ["generate", "--k", "4", "--hmax", "6", "--format", "csv"];
    let first = mntkit(&generate_args);
    let second = mntkit(&generate_args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "generate output is deterministic");
}

#[test]
fn solve_pell_lists_the_minus_one_orbit() {
    let out = mntkit(&[
        "solve-pell", "--g", "2", "--f", "-1", "--y-limit", "100", "--format", "csv",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout_of(&out));
    assert_eq!(rows[0], ["g", "f", "y", "m"]);
    let expected = [
        ("1", "-1"),
        ("1", "1"),
        ("7", "-5"),
        ("7", "5"),
        ("41", "-29"),
        ("41", "29"),
    ];
    assert_eq!(rows.len() - 1, expected.len());
    for (row, (y, m)) in rows[1..].iter().zip(expected) {
        assert_eq!(row[0], "2");
        assert_eq!(row[1], "-1");
        assert_eq!((row[2].as_str(), row[3].as_str()), (y, m));
    }
}

#[test]
fn invalid_input_exits_one_with_usage() {
    let out = mntkit(&["generate", "--nope"]);
    assert_eq!(out.status.code(), Some(1), "unknown flag");
    assert!(stderr_of(&out).contains("Usage"), "usage text shown");

    let out = mntkit(&["generate", "--k", "5"]);
    assert_eq!(out.status.code(), Some(1), "unsupported embedding degree");

    let out = mntkit(&["solve-pell", "--g", "4", "--f", "-8"]);
    assert_eq!(out.status.code(), Some(1), "square Pell modulus");
    assert!(stderr_of(&out).contains("perfect square"));

    let out = mntkit(&["search", "--k", "6", "--index", "0", "--d-max", "100"]);
    assert_eq!(out.status.code(), Some(1), "sweep without seed bounds");
    assert!(stderr_of(&out).contains("--x-min"));

    let out = mntkit(&["stats", "--k", "6"]);
    assert_eq!(out.status.code(), Some(1), "ambiguous family selection");
    assert!(stderr_of(&out).contains("--index"));

    let out = mntkit(&[]);
    assert_eq!(out.status.code(), Some(1), "missing subcommand");
}

#[test]
fn help_and_version_exit_zero() {
    for args in [["--help"], ["--version"]] {
        let out = mntkit(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
    }
}
