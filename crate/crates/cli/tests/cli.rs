use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn fsgrp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsgrp")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    fsgrp(args).status.code().expect("exited normally")
}

#[test]
fn check_fsgrp_exit_codes() {
    let cases = [
        ("trivial_fsgrp.json", 0),
        ("z2_over_point.json", 0),
        ("z3_subtraction.json", 1),
        ("missing_pair.json", 2),
        ("extra_pair.json", 2),
        ("partial_projection.json", 2),
        ("duplicate_element.json", 2),
        ("unknown_field.json", 2),
        ("bad_token.json", 2),
        ("truncated.json", 2),
        ("not_json.txt", 2),
        ("wrong_type.json", 2),
        ("array.json", 2),
        ("does_not_exist.json", 2),
    ];
    for (file, expected) in cases {
        assert_eq!(code(&["check-fsgrp", &fixture(file)]), expected, "{file}");
    }
}

#[test]
fn subtraction_reports_an_associativity_witness() {
    let out = fsgrp(&["check-fsgrp", &fixture("z3_subtraction.json"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<_> = v["report"]["records"].as_array().unwrap().iter().filter(|r| r["passed"] == false).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["law"], "associativity");
    assert!(failed[0]["witness"]["element"].is_string());
    assert_eq!(v["rigid"], false);
}

#[test]
fn missing_pair_names_the_location() {
    let out = fsgrp(&["check-fsgrp", &fixture("missing_pair.json")]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("mul.pairs"));
    let out = fsgrp(&["check-fsgrp", &fixture("truncated.json")]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1 column"));
}

#[test]
fn check_bimodule_exit_codes() {
    let cases = [
        ("identity_bimodule.json", 0),
        ("z2_regular.json", 0),
        ("bad_action.json", 1),
        ("bimodule_missing_pair.json", 2),
        ("bimodule_bad_source.json", 2),
        ("trivial_fsgrp.json", 2),
        ("not_json.txt", 2),
    ];
    for (file, expected) in cases {
        assert_eq!(code(&["check-bimodule", &fixture(file)]), expected, "{file}");
    }
}

#[test]
fn check_theory_exit_codes() {
    let small = ["--max-components", "1", "--max-regions", "2"];
    let run = |theory: &str, extra: &[&str]| {
        let mut args = vec!["check-theory", "--theory", theory];
        args.extend_from_slice(&small);
        args.extend_from_slice(extra);
        code(&args)
    };
    assert_eq!(run("constant", &[]), 0);
    assert_eq!(run("constant", &["--set-size", "1"]), 0);
    assert_eq!(run("free_boundary", &[]), 1);
    assert_eq!(run(&fixture("theory_constant.json"), &[]), 0);
    assert_eq!(run(&fixture("theory_free_boundary.json"), &[]), 1);
    assert_eq!(run(&fixture("theory_unknown.json"), &[]), 2);
    assert_eq!(run(&fixture("theory_empty.json"), &[]), 2);
    assert_eq!(run(&fixture("theory_bad_fill.json"), &[]), 2);
    assert_eq!(run("harmonic", &[]), 2);
    assert_eq!(run("constant", &["--set-size", "0"]), 2);
    assert_eq!(run("free_boundary", &["--fill", "7"]), 2);
    assert_eq!(run("constant", &["--format", "yaml"]), 2);
    assert_eq!(code(&["check-theory", "--max-regions", "9"]), 2);
    assert_eq!(code(&["check-theory", "--max-regions", "-1"]), 2);
}

#[test]
fn free_boundary_audit_has_a_diagonal_record() {
    let out = fsgrp(&["check-theory", "--theory", "free_boundary", "--max-components", "1", "--max-regions", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let records = v["audit"]["records"].as_array().unwrap();
    assert!(records.iter().any(|r| r["law"] == "diagonal" && r["passed"] == false));
}

#[test]
fn verify_functor_exit_codes() {
    assert_eq!(code(&["verify-functor", "--max-components", "0", "--max-regions", "0"]), 0);
    assert_eq!(code(&["verify-functor", "--max-components", "1", "--max-regions", "2"]), 0);
    let out = fsgrp(&["verify-functor", "--theory", "free_boundary", "--max-components", "1", "--max-regions", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let first = v["functor"]["records"].as_array().unwrap().iter().find(|r| r["passed"] == false).unwrap();
    assert!(first["detail"].as_str().unwrap().contains("gluing"));
}

#[test]
fn build_outputs() {
    let one = fsgrp(&["build", &fixture("object_one.json")]);
    assert_eq!(one.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["total"].as_array().unwrap().len(), 2);

    let empty: serde_json::Value = serde_json::from_slice(&fsgrp(&["build", &fixture("object_empty.json")]).stdout).unwrap();
    assert_eq!(empty["total"].as_array().unwrap().len(), 1);
    assert_eq!(empty["base"].as_array().unwrap().len(), 1);

    let cylinder = fsgrp(&["build", &fixture("cylinder.json")]);
    let identity = fsgrp(&["build", "--identity", &fixture("object_one.json")]);
    assert_eq!(cylinder.status.code(), Some(0));
    assert_eq!(cylinder.stdout, identity.stdout);

    assert_eq!(code(&["build", &fixture("pants.json")]), 0);
    assert_eq!(code(&["build", &fixture("object_two.json"), "--set-size", "3"]), 0);
    assert_eq!(code(&["build", "--theory", "free_boundary", &fixture("pants.json")]), 1);
    for bad in ["object_bad_sign.json", "cobordism_bad_incidence.json", "neither.json", "trivial_fsgrp.json", "not_json.txt"] {
        assert_eq!(code(&["build", &fixture(bad)]), 2, "{bad}");
    }
    assert_eq!(code(&["build", "--identity", &fixture("cylinder.json")]), 2);
}

#[test]
fn built_files_check_clean() {
    let dir = tempfile::tempdir().unwrap();
    let sgrp = dir.path().join("e.json");
    let bimod = dir.path().join("omega.json");
    assert_eq!(code(&["build", &fixture("object_two.json"), "--out", sgrp.to_str().unwrap()]), 0);
    assert_eq!(code(&["build", &fixture("pants.json"), "--out", bimod.to_str().unwrap()]), 0);
    assert_eq!(code(&["check-fsgrp", sgrp.to_str().unwrap()]), 0);
    assert_eq!(code(&["check-bimodule", bimod.to_str().unwrap()]), 0);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["check-theory", "--max-components", "2", "--max-regions", "2", "--format", "json"],
        vec!["check-theory", "--theory", "free_boundary", "--max-components", "2", "--max-regions", "2", "--format", "json"],
        vec!["verify-functor", "--max-components", "1", "--max-regions", "2", "--format", "json"],
        vec!["verify-functor", "--max-components", "1", "--max-regions", "2"],
        vec!["check-fsgrp", "FIXTURE", "--format", "json"],
    ] {
        let args: Vec<String> =
            args.iter().map(|a| if *a == "FIXTURE" { fixture("z3_subtraction.json") } else { a.to_string() }).collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = fsgrp(&args);
        let second = fsgrp(&args);
        assert!(!first.stdout.is_empty());
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        let out = dir.path().join("report");
        let mut with_out = args.clone();
        with_out.extend(["--out", out.to_str().unwrap()]);
        assert_eq!(fsgrp(&with_out).status.code(), first.status.code());
        assert_eq!(std::fs::read(&out).unwrap(), first.stdout);
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["check-fsgrp"]), 2);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["check-fsgrp", &fixture("trivial_fsgrp.json"), "--out", "/nonexistent/dir/report"]), 2);
}
