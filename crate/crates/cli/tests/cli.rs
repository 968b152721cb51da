use std::fs;
use std::path::Path;

use icowalk_cli::run_cli;
use serde_json::Value;

const HADAMARD_PAIR: &str = r#"{"processes":[
 {"label":"p0","coins":[{"alpha":0,"beta":0,"theta":0.7853981633974483},{"alpha":0,"beta":0,"theta":0.7853981633974483}]},
 {"label":"p1","coins":[{"alpha":0,"beta":0,"theta":0},{"alpha":0,"beta":0,"theta":0}]}]}"#;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("icowalk").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("procs.json");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["verify", "--bogus"]).0, 2);
    assert_eq!(run(&["nope"]).0, 2);
    let (code, _, err) = run(&["verify", "--suite", "everything"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown suite"));
}

#[test]
fn missing_and_malformed_configs() {
    assert_eq!(run(&["switch2", "--config", "missing.json"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"processes":[{"coins":[{"alpha":0,"beta":0}]}]}"#,
    );
    let (code, _, err) = run(&["definite", "--config", &cfg]);
    assert_eq!(code, 2);
    assert!(err.contains("processes[0].coins[0].theta"), "{err}");
}

#[test]
fn switch2_needs_two_processes() {
    let dir = tempfile::tempdir().unwrap();
    let one = r#"{"processes":[{"coins":[{"alpha":0,"beta":0,"theta":1}]}]}"#;
    let cfg = write_config(dir.path(), one);
    assert_eq!(run(&["switch2", "--config", &cfg]).0, 2);
}

#[test]
fn canonical_switch_branch_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), HADAMARD_PAIR);
    let (code, out, _) = run(&[
        "switch2",
        "--config",
        &cfg,
        "--order-outcome",
        "0",
        "--coin-outcome",
        "left",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["origin"], 0);
    assert_eq!(v["positions"], serde_json::json!([-4, -2, 0, 2]));
    assert_eq!(v["normalized"], true);
    assert_eq!(v["branch"]["order_outcome"], 0);
    assert_eq!(v["branch"]["coin_outcome"], "left");
    assert!((v["branch_probability"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    for p in v["probabilities"].as_array().unwrap() {
        assert!((p.as_f64().unwrap() - 0.25).abs() < 1e-10);
    }
}

#[test]
fn empty_branch_only_prints_unnormalized() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), HADAMARD_PAIR);
    let base = [
        "switch2",
        "--config",
        &cfg,
        "--order-outcome",
        "1",
        "--coin-outcome",
        "right",
    ];
    assert_eq!(run(&base).0, 2);
    let mut raw = base.to_vec();
    raw.push("--unnormalized");
    let (code, out, _) = run(&raw);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["positions"], serde_json::json!([]));
    assert_eq!(v["normalized"], false);
}

#[test]
fn definite_ordering_and_initial_position() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), HADAMARD_PAIR);
    let (code, out, _) = run(&[
        "definite",
        "--config",
        &cfg,
        "--order",
        "1",
        "--initial-pos",
        "-3",
        "--coin-outcome",
        "left",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "position,probability\n-3,0.50000000000000000\n-1,0.50000000000000000\n"
    );
}

#[test]
fn nswitch_totals_sum_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let three = r#"{"processes":[
      {"coins":[{"alpha":0.3,"beta":1.1,"theta":0.4}]},
      {"coins":[{"alpha":2.0,"beta":0.2,"theta":1.3},{"alpha":0,"beta":0,"theta":0.7}]},
      {"coins":[{"alpha":1.0,"beta":0.5,"theta":2.9}]}]}"#;
    let cfg = write_config(dir.path(), three);
    let (code, out, _) = run(&["nswitch", "--config", &cfg, "--unnormalized"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let total: f64 = v["probabilities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!((v["branch_probability"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(
        run(&["nswitch", "--config", &cfg, "--order-outcome", "3"]).0,
        2
    );
}

#[test]
fn uniform_csv_has_one_row_per_site() {
    let (code, out, _) = run(&["uniform", "--n", "3", "--sigma", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "position,probability");
    assert_eq!(lines.len(), 7);
    for line in &lines[1..] {
        let p: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((p - 1.0 / 6.0).abs() < 1e-10);
        assert!(line.split(',').nth(1).unwrap().starts_with("0.166666"));
    }
    assert!(!out.contains('\r'));
    assert_eq!(run(&["uniform", "--n", "3", "--sigma", "3"]).0, 2);
}

#[test]
fn verify_report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, _, err) = run(&[
        "verify",
        "--suite",
        "lemma3",
        "--seed",
        "4",
        "--trials",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 1);
    let r = reports[0].as_object().unwrap();
    let mut keys: Vec<&str> = r.keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(
        keys,
        [
            "check",
            "max_deviation",
            "passed",
            "seed",
            "tolerance",
            "trials"
        ]
    );
    assert_eq!(r["check"], "lemma3");
    assert_eq!(r["seed"], 4);
    assert_eq!(r["trials"], 5);
    assert_eq!(r["passed"], true);
}

#[test]
fn figure1_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig");
    let out_str = out.to_str().unwrap();
    assert_eq!(run(&["figure1", "--steps", "16", "--out", out_str]).0, 0);
    let mut names: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["classical_16.csv", "hadamard_16.csv", "ico_16.csv"]);
    let ico = fs::read_to_string(out.join("ico_16.csv")).unwrap();
    let rows: Vec<f64> = ico
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|p| (p - 1.0 / 16.0).abs() < 1e-10));
    for name in ["classical_16.csv", "hadamard_16.csv"] {
        let text = fs::read_to_string(out.join(name)).unwrap();
        assert!(text.starts_with("position,probability\n"));
        let sum: f64 = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
            .sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    assert_eq!(run(&["figure1", "--steps", "15", "--out", out_str]).0, 2);
    assert_eq!(run(&["figure1", "--steps", "16,0", "--out", out_str]).0, 2);
}
