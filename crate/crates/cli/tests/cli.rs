use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn evanslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evanslab")).args(args).env_remove("EVANSLAB_THREADS").output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

#[test]
fn catalog_lists_ten_entries_with_schema() {
    let doc = json_of(&evanslab(&["catalog"]));
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["task"], "catalog");
    assert_eq!(doc["result"]["entries"].as_array().unwrap().len(), 10);
}

#[test]
fn essential_borders_solve_the_travelling_front_relation() {
    let dir = tempfile::tempdir().unwrap();
    let out = evanslab(&["essential", "--example", "6", "--delta", "1", "--gamma", "0.75", "--grid", "401", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("essential.json")).unwrap()).unwrap();
    let c = doc["result"]["c"].as_f64().unwrap();
    let (header, rows) = read_csv(&dir.path().join("borders.csv"));
    assert_eq!(header, ["k", "re_lambda", "im_lambda", "branch", "side"]);
    assert_eq!(rows.len(), 4 * 401);
    for row in rows {
        let [k, re, im]: [f64; 3] = [0, 1, 2].map(|i| row[i].parse().unwrap());
        let a = if row[4] == "+" { 0.75 } else { 0.25 };
        // λ = ick + (-(k² + a) ± √((k² + 2k + a)(k² - 2k + a)))/2
        let disc = (k * k + 2.0 * k + a) * (k * k - 2.0 * k + a);
        let (sr, si) = if disc >= 0.0 { (disc.sqrt(), 0.0) } else { (0.0, (-disc).sqrt()) };
        let err = [1.0, -1.0]
            .iter()
            .map(|s| (-(k * k + a) / 2.0 + s * sr / 2.0 - re).hypot(c * k + s * si / 2.0 - im))
            .fold(f64::INFINITY, f64::min);
        assert!(err < 1e-9 * (1.0 + k * k), "k = {k}: {re}+{im}i");
    }
}

#[test]
fn standing_front_winding_is_minus_two() {
    let doc = json_of(&evanslab(&["winding", "--example", "8", "--D", "1.5"]));
    assert_eq!(doc["result"]["winding"]["winding"], -2);
    assert_eq!(doc["unstable"], false);
}

#[test]
fn located_poles_account_for_the_winding() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.toml");
    std::fs::write(&cfg, "task = \"winding\"\n\n[wave]\nexample = 8\nD = 1.5\n\n[contour]\npole_search = [0.02, 0.3, 1.2, 1.7]\n").unwrap();
    let doc = json_of(&evanslab(&["--config", cfg.to_str().unwrap()]));
    assert_eq!(doc["result"]["poles"].as_array().unwrap().len(), 2);
    assert_eq!(doc["result"]["roots_inside"], 0);
}

#[test]
fn fail_on_unstable_exits_with_two() {
    let args = ["evans-scan", "--example", "5", "--c", "1", "--grid", "60"];
    let plain = evanslab(&args);
    assert_eq!(plain.status.code(), Some(0));
    let doc = json_of(&plain);
    assert_eq!(doc["unstable"], true);
    let roots = doc["result"]["roots"].as_array().unwrap();
    assert!(roots.iter().any(|r| (r["lambda"][0].as_f64().unwrap() - 6.7045).abs() < 1e-3), "{roots:?}");
    let strict = evanslab(&[&args[..], &["--fail-on-unstable"]].concat());
    assert_eq!(strict.status.code(), Some(2));
}

#[test]
fn stable_front_passes_fail_on_unstable() {
    let out = evanslab(&["essential", "--example", "8", "--D", "1.5", "--fail-on-unstable", "--grid", "51"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn invalid_configuration_reports_lines() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[wave]\nexample = 8\n\n[scan]\npoints = 10\nbogus = 1\n").unwrap();
    let out = evanslab(&["evans-scan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.toml:6:"), "{err}");

    std::fs::write(&cfg, "[wave]\nexample = 12\n\n[evans]\nL = -2.0\n").unwrap();
    let out = evanslab(&["winding", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.toml:2:") && err.contains("bad.toml:5:"), "{err}");
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(evanslab(&["winding", "--D", "x"]).status.code(), Some(1));
    assert_eq!(evanslab(&["winding"]).status.code(), Some(1));
    assert_eq!(evanslab(&["essential", "--example", "11"]).status.code(), Some(1));
    assert_eq!(evanslab(&[]).status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_evanslab")).args(["catalog"]).env("EVANSLAB_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn defaults_document_is_a_valid_configuration() {
    let out = evanslab(&["--print-defaults"]);
    assert!(out.status.success());
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("defaults.toml");
    std::fs::write(&cfg, &out.stdout).unwrap();
    let doc = json_of(&evanslab(&["catalog", "--config", cfg.to_str().unwrap()]));
    assert_eq!(doc["config"]["evans"]["L"], 30.0);
}

#[test]
fn help_documents_csv_columns() {
    let out = evanslab(&["--help"]);
    let text = String::from_utf8_lossy(&out.stdout);
    for cols in ["k,re_lambda,im_lambda,branch,side", "re_lambda,im_lambda,count_plus,count_minus,index", "re_lambda,im_lambda,re_e,im_e,phase"] {
        assert!(text.contains(cols), "{cols}");
    }
}

#[test]
fn identical_configuration_gives_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        let out = evanslab(&["evans-scan", "--example", "8", "--D", "0.6", "--interval", "0.05,2", "--grid", "40", "--threads", threads, "--out", dir.path().to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        (std::fs::read(dir.path().join("evans-scan.json")).unwrap(), std::fs::read(dir.path().join("scan.csv")).unwrap())
    };
    let (json_a, csv_a) = run("2");
    let (json_b, csv_b) = run("2");
    assert_eq!(json_a, json_b);
    assert_eq!(csv_a, csv_b);
    // worker count does not change the numbers
    let (_, csv_c) = run("1");
    assert_eq!(csv_a, csv_c);
    let (header, rows) = read_csv(&dir.path().join("scan.csv"));
    assert_eq!(header, ["re_lambda", "im_lambda", "re_e", "im_e", "phase"]);
    assert_eq!(rows.len(), 40);
}

#[test]
fn piecewise_examples_use_the_closed_form() {
    let doc = json_of(&evanslab(&["evans-scan", "--example", "4", "--gamma", "0.3", "--grid", "50"]));
    assert_eq!(doc["result"]["method"], "closed-form");
    assert!(doc["result"]["roots"].as_array().unwrap().is_empty());
    // --L is the plateau half-width for the piecewise standing pulse
    let doc = json_of(&evanslab(&["evans-scan", "--example", "3", "--L", "2", "--grid", "50"]));
    assert_eq!(doc["config"]["wave"]["L"], 2.0);
    assert_eq!(doc["config"]["evans"]["L"], 30.0);
    assert_eq!(doc["unstable"], false);
}

#[test]
fn profile_check_accepts_the_catalog() {
    for id in ["1", "2", "3", "5", "8", "10"] {
        let doc = json_of(&evanslab(&["profile-check", "--example", id]));
        assert_eq!(doc["result"]["valid"], true, "example {id}");
    }
}

#[test]
fn summary_tables_match_the_published_verdicts() {
    let doc = json_of(&evanslab(&["summary-tables"]));
    let r = &doc["result"];
    assert_eq!(r["all_match"], true);
    let verdicts: Vec<(String, String)> = r["numerical"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| (row["pulse"]["computed"].as_str().unwrap().into(), row["front"]["computed"].as_str().unwrap().into()))
        .collect();
    let expected = [("unstable", "stable"), ("unstable", "stable"), ("unstable", "unstable")];
    for (got, want) in verdicts.iter().zip(expected) {
        assert_eq!((got.0.as_str(), got.1.as_str()), want);
    }
    assert_eq!(r["theoretical"][0]["pulse"]["computed"], "unstable");
    assert_eq!(r["theoretical"][2]["pulse"]["computed"], "no-solutions");
}
