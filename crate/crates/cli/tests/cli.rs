use std::fs;

use kropina_cli::cli::run_args;
use kropina_cli::commands::{self, Exit};
use kropina_cli::model_file::{model_to_string, read_model};
use kropina_core::models::builtin;
use serde_json::Value;

fn run(args: &[&str]) -> (Exit, String, String) {
    run_args(std::iter::once("kropina").chain(args.iter().copied()))
}

#[test]
fn validate_examples() {
    assert_eq!(run(&["validate", "u2_central_kropina"]).0, Exit::Success);
    let (exit, out, _) = run(&["validate", "su2_biinvariant", "--x", "1,0,0", "--format", "json"]);
    assert_eq!(exit, Exit::Validation);
    let v: Value = serde_json::from_str(&out).unwrap();
    let hyp = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == commands::HYPOTHESIS)
        .unwrap();
    assert_eq!(hyp["status"], "fail");
    assert!((hyp["residual"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let (exit, out, _) = run(&["validate", "s2_normal"]);
    assert_eq!(exit, Exit::Success);
    assert!(
        out.lines()
            .any(|l| l.starts_with("hypothesis") && l.contains("unchecked")),
        "{out}"
    );
}

#[test]
fn flag_headline_json() {
    let (exit, out, _) = run(&[
        "flag",
        "u2_central_kropina",
        "--y",
        "1,0,1,0",
        "--u",
        "0,1,0,0",
        "--format",
        "json",
    ]);
    assert_eq!(exit, Exit::Success);
    let v: Value = serde_json::from_str(&out).unwrap();
    let r = &v["result"];
    assert!((r["k_direct"].as_f64().unwrap() - 0.0625).abs() < 1e-12);
    assert!((r["k_theorem_consistent"].as_f64().unwrap() - 0.0625).abs() < 1e-12);
    assert!((r["k_theorem_printed"].as_f64().unwrap() - 0.088_388_347_648_318_4).abs() < 1e-12);
    let y = r["y"].as_array().unwrap();
    assert!((y[0].as_f64().unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    assert!(v["bi_invariant"]["chain_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn flag_on_abelian_is_zero() {
    let (exit, out, _) = run(&["flag", "abelian_2", "--y", "1,-1", "--u", "0,1"]);
    assert_eq!(exit, Exit::Success);
    let k = out.lines().find(|l| l.starts_with("k_direct ")).unwrap();
    assert!(k.ends_with("0.000000000000"), "{k}");
}

#[test]
fn exit_codes_are_distinct() {
    let (exit, _, err) = run(&["flag", "u2_central_kropina", "--y", "0,0,1,0", "--u", "0,1,0,0"]);
    assert_eq!(exit, Exit::Degenerate);
    assert!(err.contains("threshold 1e-8"), "{err}");

    assert_eq!(
        run(&["flag", "s2_normal", "--y", "1,0,0", "--u", "0,1,0"]).0,
        Exit::Validation
    );
    assert_eq!(
        run(&["flag", "u2_central_kropina", "--y", "1,0", "--u", "0,1,0,0"]).0,
        Exit::Parse
    );
    assert_eq!(
        run(&["compare", "u2_central_kropina", "--tolerance", "1e-12"]).0,
        Exit::Tolerance
    );
    assert_eq!(run(&["validate", "no_such_model_or_file"]).0, Exit::Io);
    assert_eq!(run(&["frobnicate"]).0, Exit::Usage);
    assert_eq!(run(&["scan", "u2_central_kropina", "--samples", "many"]).0, Exit::Usage);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"dim\": 3,\n \"structure\": []\n}").unwrap();
    let (exit, _, err) = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(exit, Exit::Parse);
    assert!(err.contains("q0") && err.contains("line 3"), "{err}");
}

#[test]
fn compare_defaults_pass_and_name_worst_on_failure() {
    for name in kropina_core::models::CATALOG {
        let (exit, out, _) = run(&["compare", name, "--samples", "30"]);
        assert_eq!(exit, Exit::Success, "{name}: {out}");
    }
    let (_, out, _) = run(&["compare", "su2_biinvariant", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let names: Vec<&str> = v["pairings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "Puttmann vs Koszul",
            "naturally reductive vs Puttmann",
            "bi-invariant vs Puttmann and Koszul"
        ]
    );

    let (_, out, err) = run(&[
        "compare",
        "u2_central_kropina",
        "--tolerance",
        "1e-12",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["worst"], commands::PRINTED_VS_DIRECT);
    assert!(err.contains("worst pairing: printed vs direct"));
}

#[test]
fn scan_rows_do_not_depend_on_sample_count() {
    let spec = builtin("circle_su2_mod_u1").unwrap();
    let short = commands::scan(&spec, 5, 9).unwrap();
    let long = commands::scan(&spec, 12, 9).unwrap();
    assert_eq!(short.rows[..], long.rows[..5]);
    assert!(long.rows.iter().all(|r| r.residual_consistent_vs_direct <= 1e-8));
    assert_eq!(long.rows[3].seed, 12);
}

#[test]
fn scan_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let (exit, out, err) = run(&[
        "scan",
        "u2_central_kropina",
        "--samples",
        "100",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit, Exit::Success, "{err}");
    assert!(out.is_empty());
    assert!(err.contains("100 rows"));
    let text = fs::read_to_string(&path).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap().len(), 1 + 4 + 4 + 6);
    let col = reader
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == "residual_consistent_vs_direct")
        .unwrap();
    let mut rows = 0;
    for rec in reader.records() {
        let r: f64 = rec.unwrap()[col].parse().unwrap();
        assert!(r <= 1e-8);
        rows += 1;
    }
    assert_eq!(rows, 100);

    let (exit, out, _) = run(&["scan", "abelian_2", "--samples", "3", "--format", "json"]);
    assert_eq!(exit, Exit::Success);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["max_residual_consistent_vs_direct"], 0.0);
}

#[test]
fn models_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("circle.json");
    assert_eq!(
        run(&[
            "models",
            "export",
            "circle_su2_mod_u1",
            "--output",
            path.to_str().unwrap()
        ])
        .0,
        Exit::Success
    );
    let spec = read_model(&path).unwrap();
    assert_eq!(spec, builtin("circle_su2_mod_u1").unwrap());
    assert_eq!(model_to_string(&spec), fs::read_to_string(&path).unwrap());
    // a file path takes precedence and the x override applies to it
    let (exit, _, _) = run(&["validate", path.to_str().unwrap(), "--x", "0,0,0,1"]);
    assert_eq!(exit, Exit::Validation);
    let (_, list, _) = run(&["models", "list"]);
    assert_eq!(list.lines().count(), kropina_core::models::CATALOG.len());
}
