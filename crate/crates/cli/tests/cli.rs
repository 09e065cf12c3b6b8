use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn fracvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracvar")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn config(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

#[test]
fn soliton_solve_writes_a_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = fracvar(&["solve", &config("soliton.json"), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let total = v["energy"]["total"].as_f64().unwrap();
    assert!((total + 2.0 / 3.0).abs() < 1e-3 * 2.0 / 3.0, "{total}");
    for file in ["result.json", "profile.csv", "trace.csv", "metadata.json"] {
        assert!(out_dir.join(file).exists(), "{file}");
    }
    let written = std::fs::read_to_string(out_dir.join("result.json")).unwrap();
    assert_eq!(written.as_bytes(), &out.stdout[..]);
    // the config is echoed as written, not re-serialized
    let original = std::fs::read_to_string(configs().join("soliton.json")).unwrap();
    assert!(written.contains(original.trim()));
    assert!(!written.contains("unix_time"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let d = dir.path().join(sub);
        let out = fracvar(&["solve", &config("subcritical.json"), "--out", d.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        ["result.json", "profile.csv", "trace.csv"].map(|f| std::fs::read(d.join(f)).unwrap())
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn supercritical_solve_is_refused_with_a_hint() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracvar(&["solve", &config("supercritical.json"), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("supercritical"), "{err}");
    assert!(err.contains("fracvar scaling"));
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"grid\": ").unwrap();
    assert_eq!(fracvar(&["solve", bad.to_str().unwrap()]).status.code(), Some(1));
    let text = std::fs::read_to_string(configs().join("soliton.json")).unwrap();
    std::fs::write(&bad, text.replace("\"c\": 2.0", "\"c\": 2.0, \"colour\": 1")).unwrap();
    assert_eq!(fracvar(&["solve", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(fracvar(&["solve", dir.path().join("missing.json").to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(fracvar(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(fracvar(&["--help"]).status.code(), Some(0));
}

#[test]
fn unconverged_solve_exits_three_and_still_reports() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("soliton.json")).unwrap();
    let cfg = dir.path().join("short.json");
    std::fs::write(&cfg, text.replace("\"output\"", "\"solver\": {\"max_iters\": 2},\n  \"output\"")).unwrap();
    let out_dir = dir.path().join("run");
    let out = fracvar(&["solve", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["converged"], false);
    assert!(out_dir.join("profile.csv").exists());
}

#[test]
fn regime_examples() {
    for (ell, expected) in [("1", "subcritical"), ("2", "critical"), ("3", "supercritical")] {
        let out = fracvar(&["regime", "--ell", ell, "--s", "1/2", "--N", "1"]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["regime"], expected);
        assert_eq!(v["exact"], true);
    }
    assert_eq!(fracvar(&["regime", "--ell", "1", "--s", "3/2"]).status.code(), Some(1));
}

#[test]
fn verify_exit_codes() {
    let out = fracvar(&["verify", "--suite", "polya-szego", "--trials", "200", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["trials"], 200);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);

    let out = fracvar(&["verify", "--suite", "supermodular", "--adversarial", "--trials", "3", "--seed", "8"]);
    assert_eq!(out.status.code(), Some(4));
    let failure = &json(&out)["failures"][0];
    assert_eq!(failure["seed"], 8);
    assert!(failure["witness"]["quadruple"]["big_a"].is_number());

    assert_eq!(fracvar(&["verify", "--suite", "riesz", "--trials", "0"]).status.code(), Some(1));
    assert_eq!(fracvar(&["verify", "--suite", "nope"]).status.code(), Some(1));
}

#[test]
fn failing_trial_reproduces_from_its_seed() {
    let v = json(&fracvar(&["verify", "--suite", "supermodular", "--adversarial", "--trials", "4", "--seed", "100"]));
    let third = &v["failures"][2];
    let seed = third["seed"].as_u64().unwrap().to_string();
    let single =
        json(&fracvar(&["verify", "--suite", "supermodular", "--adversarial", "--trials", "1", "--seed", &seed]));
    assert_eq!(single["failures"][0]["witness"], third["witness"]);
}

#[test]
fn classical_gn_constant() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracvar(&["gn", "--s", "1", "--alpha", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["j_min"].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-6 * 3f64.sqrt());
    let best = v["best_trial"].as_f64().unwrap();
    assert!(v["j_min"].as_f64().unwrap() <= best);
    assert!(dir.path().join("profile.csv").exists());
}

#[test]
fn supercritical_scaling_demo() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracvar(&[
        "scaling",
        &config("supercritical.json"),
        "--profile",
        "gaussian",
        "--lambda-grid",
        "1:64:10",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("scaling.csv")).unwrap();
    let last: Vec<f64> = csv.lines().last().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(last[0], 64.0);
    assert!(last[3] < -1e3, "{}", last[3]);
}

#[test]
fn zero_scan_fails_but_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        fracvar(&["scan", &config("zero.json"), "--c-grid", "0.5,1,1.5,2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "FAIL");
    let csv = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);

    let pass =
        fracvar(&["scan", &config("subcritical.json"), "--c-grid", "0.5:2:4", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(pass.status.code(), Some(0));
    assert_eq!(json(&pass)["verdict"], "PASS");
    assert_eq!(fracvar(&["scan", &config("zero.json"), "--c-grid", "2,1"]).status.code(), Some(1));
}
