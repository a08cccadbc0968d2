//! End-to-end tests of the `cm2` binary: output shapes, JSON schema
//! stability, polarization parsing, and exit codes.

use std::process::{Command, Output};

fn cm2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cm2"))
        .args(args)
        .env("CM2_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn polarizations_lists_one_class_per_line() {
    let out = cm2(&["polarizations", "--disc", "79"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "[3,7,w]\n[5,16,2w-1]\n[8,12,2w+3]\n");
}

#[test]
fn polarizations_json_reports_count() {
    let out = cm2(&["polarizations", "--disc", "83", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["disc"], 83);
    assert_eq!(v["count"], 5);
    assert_eq!(v["polarizations"][0]["display"], "[2,11,w]");
    let pol = v["polarizations"][0]["pol"].as_array().unwrap();
    assert_eq!(pol.len(), 4);
}

#[test]
fn gram_prints_three_rows() {
    let out = cm2(&["gram", "--disc", "163", "--pol", "6,7,0,1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3);
    for line in text.lines() {
        assert!(line.starts_with('[') && line.ends_with(']'));
    }
}

#[test]
fn sieve_reports_pre_and_post_counts() {
    let out = cm2(&["sieve", "--disc", "163", "--pol", "6,7,0,1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("pre-congruence extensions: 19"), "{text}");
    assert!(text.contains("post-congruence extensions: 8"), "{text}");
}

#[test]
fn sieve_json_det16_multiset_for_d83() {
    let out = cm2(&["sieve", "--disc", "83", "--pol", "2,11,0,1", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let post: Vec<String> = v["post_det16"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect();
    assert_eq!(post, ["15", "14", "8", "5"]);
    let primes: Vec<i64> = v["candidate_primes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_i64().unwrap())
        .collect();
    assert_eq!(primes, [2, 5]);
}

#[test]
fn pdr_json_schema_for_d35() {
    let out = cm2(&["pdr", "--disc", "35", "--pol", "2,5,0,1", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["disc"], 35);
    assert_eq!(v["pol"], serde_json::json!([2, 5, 0, 1]));
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    // 2 is inert (12·e = 24) and 5 ramified (6·e = 12): e = 2 at both.
    assert_eq!(entries[0]["p"], 2);
    assert_eq!(entries[0]["e"], 2);
    assert_eq!(entries[1]["p"], 5);
    assert_eq!(entries[1]["e"], 2);
    assert_eq!(v["exponents"]["2"], 24);
    assert_eq!(v["exponents"]["5"], 12);
}

#[test]
fn discriminant_prints_factorization() {
    let out = cm2(&["discriminant", "--disc", "35", "--pol", "2,5,0,1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "2^24 5^12");
}

#[test]
fn closed_formula_reports_signed_exponents() {
    let out = cm2(&["closed-formula", "--disc", "55", "--pol", "3,5,0,1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "2^-12 3^48");
}

#[test]
fn closed_formula_even_disc_fails_with_input_error() {
    let out = cm2(&["closed-formula", "--disc", "40", "--pol", "2,6,1,1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("not applicable"), "{err}");
}

#[test]
fn closed_formula_rejects_unknown_convention() {
    let out = cm2(&[
        "closed-formula",
        "--disc",
        "55",
        "--pol",
        "3,5,0,1",
        "--char-convention",
        "bogus",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn closed_formula_alternate_convention_runs() {
    let out = cm2(&[
        "closed-formula",
        "--disc",
        "11",
        "--pol",
        "2,2,0,1",
        "--char-convention",
        "n_over_d",
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["convention"], "n_over_d");
    assert!(v["formula"].is_object());
}

#[test]
fn pol_parsing_rejects_malformed_and_non_unimodular() {
    // Wrong arity.
    let out = cm2(&["pdr", "--disc", "163", "--pol", "6,7,1"]);
    assert_eq!(out.status.code(), Some(1));
    // Not an integer.
    let out = cm2(&["pdr", "--disc", "163", "--pol", "6,7,w,1"]);
    assert_eq!(out.status.code(), Some(1));
    // Determinant ≠ 1.
    let out = cm2(&["pdr", "--disc", "163", "--pol", "6,7,1,1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn non_fundamental_disc_is_an_input_error() {
    let out = cm2(&["polarizations", "--disc", "12"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_1_but_help_exits_0() {
    let out = cm2(&["pdr", "--disc", "163"]); // missing --pol
    assert_eq!(out.status.code(), Some(1));
    let out = cm2(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
    let out = cm2(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let out = cm2(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_tables_small_range_passes_and_diff_exits_2() {
    let out = cm2(&["verify-tables", "--disc-max", "23"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("0 mismatches"), "{text}");

    // A doctored data file must drive exit code 2.
    let doctored = r#"[{"d": 11, "pol": [2,2,0,1],
        "explicit": {"2": 99}, "formula": {"2": 12}, "flags": []}]"#;
    let path = std::env::temp_dir().join("cm2-doctored-tables.json");
    std::fs::write(&path, doctored).unwrap();
    let out = cm2(&[
        "verify-tables",
        "--disc-max",
        "23",
        "--data",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("MISMATCH"));
}

#[test]
fn verify_tables_json_is_schema_stable() {
    let out = cm2(&["verify-tables", "--disc-max", "11", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let outcomes = v["outcomes"].as_array().unwrap();
    assert_eq!(outcomes.len(), 2); // d = 8, 11
    for o in outcomes {
        assert!(o["explicit_ok"].as_bool().unwrap());
        assert!(o["formula_ok"].as_bool().unwrap());
        assert!(o["exponents"].is_object());
    }
}

#[test]
fn conjecture_scan_small_range_is_clean() {
    let out = cm2(&["conjecture-scan", "--disc-max", "20", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["exceptions"].as_array().unwrap().len(), 0);
    assert_eq!(v["errors"].as_array().unwrap().len(), 0);
    assert_eq!(v["gk2_unhandled"], 0);
}
