use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nabla-dfc"))
        .args(args)
        .env_remove("NABLA_DFC_TOL")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn value(args: &[&str]) -> f64 {
    json(args)["value"].as_f64().unwrap()
}

#[test]
fn dfc_sum_of_constant() {
    assert_eq!(
        value(&["dfc", "sum", "--nu", "0.5", "--base", "0", "--t", "2", "--const", "1"]),
        1.875
    );
    let d = value(&["dfc", "diff", "--nu", "0.5", "--t", "2", "--const", "1"]);
    assert!((d - 0.375).abs() < 1e-12);
}

#[test]
fn dfc_reads_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("u.csv");
    fs::write(&csv, "t,value\n0,1\n1,4\n2,9\n").unwrap();
    let v = value(&[
        "dfc",
        "diff",
        "--nu",
        "2",
        "--t",
        "2",
        "--input",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(v, 2.0);

    let js = dir.path().join("u.json");
    fs::write(&js, r#"{"base": 0, "values": [1, 1, 1]}"#).unwrap();
    let v = value(&[
        "dfc",
        "sum",
        "--nu",
        "0.5",
        "--t",
        "2",
        "--input",
        js.to_str().unwrap(),
    ]);
    assert_eq!(v, 1.875);

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "t,value\n0,1\n2,4\n").unwrap();
    assert_eq!(
        run(&[
            "dfc",
            "sum",
            "--nu",
            "0.5",
            "--t",
            "2",
            "--input",
            bad.to_str().unwrap()
        ])
        .status
        .code(),
        Some(1)
    );
    let mismatch = run(&[
        "dfc",
        "sum",
        "--nu",
        "0.5",
        "--t",
        "2",
        "--base",
        "1",
        "--input",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn dfc_leibniz_product_rule() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.csv");
    fs::write(&t, "t,value\n0,0\n1,1\n2,2\n").unwrap();
    let p = t.to_str().unwrap();
    assert_eq!(
        value(&[
            "dfc",
            "leibniz",
            "--nu",
            "1",
            "--t",
            "2",
            "--input",
            p,
            "--input-y",
            p
        ]),
        3.0
    );
    let with_one = value(&[
        "dfc",
        "leibniz",
        "--nu",
        "0.5",
        "--t",
        "2",
        "--input",
        p,
        "--const-y",
        "1",
    ]);
    let direct = value(&["dfc", "diff", "--nu", "0.5", "--t", "2", "--input", p]);
    assert!((with_one - direct).abs() < 1e-14);
}

#[test]
fn out_of_range_is_a_computation_error() {
    let out = run(&[
        "dfc", "sum", "--nu", "0.5", "--t", "-1", "--base", "0", "--const", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("u.csv");
    fs::write(&csv, "t,value\n0,1\n1,4\n").unwrap();
    let out = run(&[
        "dfc",
        "sum",
        "--nu",
        "0.5",
        "--t",
        "5",
        "--input",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn special_functions() {
    assert_eq!(value(&["special", "gamma", "5"]), 24.0);
    assert!((value(&["special", "1f1", "2.2", "4", "-5"]) - 0.1165806009276832416).abs() < 1e-14);
    assert_eq!(value(&["special", "binom", "0.5", "2"]), -0.125);
    let text = run(&["special", "lgamma", "1", "--format", "text"]);
    assert_eq!(String::from_utf8_lossy(&text.stdout).trim(), "0.0");
    assert_eq!(run(&["special", "gamma", "0"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        run(&["dfc", "sum", "--nu", "0.5", "--t", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["dfc", "sum", "--nu", "0.5", "--t", "2", "--const", "1", "--input", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "solve",
            "--rho",
            "1",
            "--alpha-sq",
            "1",
            "--beta",
            "0",
            "--gamma",
            "0",
            "--delta",
            "0",
            "--branch",
            "I"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "--example", "4"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--example", "1", "--grid", "0:1:3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn rl_closed_form_matches_quadrature() {
    let args = [
        "rl",
        "integrate",
        "--c",
        "-10",
        "--p",
        "1.2",
        "--mu",
        "1.8",
        "--r",
        "0.5",
    ];
    let closed = json(&args);
    assert_eq!(closed["method"], "closed_form");
    assert_eq!(closed["closed_form"]["f1f1"]["b"], 4.0);
    let mut q = args.to_vec();
    q.push("--quadrature");
    let quad = value(&q);
    let c = closed["value"].as_f64().unwrap();
    assert!(((c - quad) / c).abs() < 1e-10);
    assert_eq!(
        run(&[
            "rl",
            "integrate",
            "--c",
            "1",
            "--p",
            "-1.5",
            "--mu",
            "0.5",
            "--r",
            "1"
        ])
        .status
        .code(),
        Some(1)
    );
}

const EXAMPLE_TWO: [&str; 11] = [
    "solve",
    "--rho",
    "-1",
    "--alpha-sq",
    "1",
    "--beta",
    "0",
    "--gamma",
    "2",
    "--delta",
    "2",
];

#[test]
fn solve_example_two() {
    let mut args = EXAMPLE_TWO.to_vec();
    args.extend(["--branch", "I"]);
    let doc = json(&args);
    assert_eq!(doc["branch"], "I");
    assert_eq!(doc["derivation"]["tau"], 3.0);
    assert_eq!(doc["derivation"]["constants"]["a"], -1.0);
    assert!(doc["closed_form"]["f1f1"].is_null());
    let terms = doc["closed_form"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(
        (
            terms[0]["kappa"].as_f64(),
            terms[0]["c"].as_f64(),
            terms[0]["p"].as_f64()
        ),
        (Some(1.0), Some(-1.0), Some(-1.0))
    );

    let physical = json(&[
        "solve",
        "--physical",
        "--m",
        "0.5",
        "--hbar",
        "1",
        "--epsilon",
        "-1",
        "--a",
        "0",
        "--b",
        "0",
        "--c",
        "2",
        "--ell",
        "1",
        "--rho",
        "-1",
        "--branch",
        "I",
    ]);
    assert_eq!(physical["closed_form"], doc["closed_form"]);
    assert_eq!(physical["equation"], doc["equation"]);
}

#[test]
fn solve_csv_samples() {
    let mut args = EXAMPLE_TWO.to_vec();
    args.extend(["--branch", "I", "--grid", "1:2:2", "--format", "csv"]);
    let out = run(&args);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,value");
    let v: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - (-1f64).exp()).abs() < 1e-15);
    assert_eq!(lines.len(), 3);
}

#[test]
fn unavailable_branch_is_reported() {
    let out = run(&[
        "solve",
        "--rho",
        "0",
        "--alpha-sq",
        "1",
        "--beta",
        "5",
        "--gamma",
        "0",
        "--delta",
        "2",
        "--branch",
        "II",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unavailable"));
}

#[test]
fn verify_examples_pass_and_are_reproducible() {
    for id in ["1", "2", "3"] {
        let a = run(&["verify", "--example", id]);
        assert_eq!(
            a.status.code(),
            Some(0),
            "example {id}: {}",
            String::from_utf8_lossy(&a.stdout)
        );
        let b = run(&["verify", "--example", id]);
        assert_eq!(a.stdout, b.stdout);
        let custom = run(&[
            "verify",
            "--example",
            id,
            "--grid",
            "0.5:3:6",
            "--format",
            "text",
        ]);
        assert_eq!(
            custom.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&custom.stdout)
        );
        let report: Value = serde_json::from_slice(&a.stdout).unwrap();
        assert!(report["checks"]
            .as_array()
            .unwrap()
            .iter()
            .all(|c| c["pass"] == true));
    }
}

#[test]
fn verify_example_one_constant() {
    let report = json(&["verify", "--example", "1"]);
    let check = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "branch_I.normalization_vs_printed")
        .unwrap();
    assert!(check["max_error"].as_f64().unwrap() < 5e-6);
}

#[test]
fn solution_document_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (branch, args) in [
        ("II", EXAMPLE_TWO.to_vec()),
        (
            "I",
            vec![
                "solve",
                "--rho",
                "0",
                "--alpha-sq",
                "5",
                "--beta",
                "2",
                "--gamma",
                "0",
                "--delta",
                "2",
                "--rate",
                "5",
            ],
        ),
    ] {
        let path = dir.path().join(format!("{branch}.json"));
        let mut args = args;
        args.extend(["--branch", branch, "--out", path.to_str().unwrap()]);
        assert_eq!(run(&args).status.code(), Some(0));
        let out = run(&["verify", "--solution", path.to_str().unwrap()]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn tampered_solution_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("doc.json");
    let mut args = EXAMPLE_TWO.to_vec();
    args.extend(["--branch", "I", "--out", path.to_str().unwrap()]);
    assert_eq!(run(&args).status.code(), Some(0));
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    doc["closed_form"]["terms"][0]["p"] = serde_json::json!(-1.01);
    fs::write(&path, doc.to_string()).unwrap();
    let out = run(&["verify", "--solution", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    fs::write(&path, "{}").unwrap();
    assert_eq!(
        run(&["verify", "--solution", path.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn identity_suite_via_cli() {
    let report = json(&["verify", "--seed", "42", "--trials", "50"]);
    assert_eq!(report["seed"], 42);
    assert_eq!(report["trials"], 50);
    assert_eq!(report["checks"].as_array().unwrap().len(), 9);
    let out = run(&["verify", "--format", "csv", "--trials", "5"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("name,max_error,tolerance,pass\n"));
}

#[test]
fn tolerance_override() {
    let strict = Command::new(env!("CARGO_BIN_EXE_nabla-dfc"))
        .args(["verify", "--example", "2"])
        .env("NABLA_DFC_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(3));
    let garbage = Command::new(env!("CARGO_BIN_EXE_nabla-dfc"))
        .args(["verify", "--example", "2"])
        .env("NABLA_DFC_TOL", "tight")
        .output()
        .unwrap();
    assert_eq!(garbage.status.code(), Some(2));
}
