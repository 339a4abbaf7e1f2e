use std::process::{Command, Output};

use serde_json::Value;

fn qcompare(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcompare"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = qcompare(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn swap_test_examples() {
    let same = report(&["swap-test", "--a", "[[1,0],[0,0]]", "--b", "[[1,0],[0,0]]"]);
    assert!((num(&same, "p_yes_circuit") - 1.0).abs() < 1e-12);
    let orth = report(&["swap-test", "--a", "[[1,0],[0,0]]", "--b", "[[0,0],[1,0]]"]);
    assert!((num(&orth, "p_yes_formula") - 0.5).abs() < 1e-12);
    assert!(num(&orth, "max_abs_diff") < 1e-10);
}

#[test]
fn input_errors_exit_with_two() {
    for args in [
        vec!["swap-test", "--a", "[[1,0],[0", "--b", "[[1,0],[0,0]]"],
        vec!["swap-test", "--a", "[[1,0],[1,0]]", "--b", "[[1,0],[0,0]]"],
        vec![
            "verify", "--k", "[[[1,0],[0,0]],[[0,0],[0,0]]]", "--antilinear", "--case", "1",
            "--machine", "always-no",
        ],
        vec!["verify", "--k", "orth", "--case", "1", "--machine", "/no/such/file"],
        vec!["cloning-game", "--cloner", "/no/such/file", "--state", "[[1,0],[0,0]]"],
        vec!["compare", "--k", "orth", "--antilinear", "--phi", "[[1,0],[0,0]]", "--psi", "[[1,0],[0,0]]"],
    ] {
        let out = qcompare(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn compare_accepts_matched_pairs() {
    let v = report(&[
        "compare", "--k", "hadamard", "--phi", "[[1,0],[0,0]]", "--psi",
        "[[0.70710678,0],[0.70710678,0]]",
    ]);
    assert!(num(&v, "p_no") < 1e-12);
}

#[test]
fn verify_examples() {
    let v = report(&["verify", "--k", "orth", "--antilinear", "--case", "2", "--exact-construction"]);
    assert_eq!(v["verdict"], "pass");
    assert!(num(&v["amplitudes"], "b01") <= 1e-10);
    assert!(num(&v["amplitudes"], "b10") <= 1e-10);

    let v = report(&["verify", "--k", "orth", "--antilinear", "--case", "1", "--machine", "always-no"]);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(num(&v, "violation"), 0.0);
    assert_eq!(num(&v, "triviality_gap"), 0.0);
}

#[test]
fn saved_machines_load_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let p = path.to_str().unwrap();
    let first = report(&[
        "verify", "--k", "orth", "--antilinear", "--case", "1", "--exact-construction",
        "--save-machine", p,
    ]);
    let second = report(&["verify", "--k", "orth", "--antilinear", "--case", "1", "--machine", p]);
    assert_eq!(first, second);
    let c = report(&["classify", "--k", "orth", "--antilinear", "--machine", p, "--samples", "100"]);
    assert_eq!(c["class"], "no-certain-on-mismatch");
}

#[test]
fn classify_swap_test() {
    let v = report(&["classify", "--k", "identity", "--machine", "swap-test", "--samples", "200"]);
    assert_eq!(v["class"], "yes-certain-on-match");
}

#[test]
fn search_reports_and_exit_status() {
    let v = report(&["search", "--k", "identity", "--case", "2", "--budget", "1"]);
    assert!(num(&v, "best_nontriviality") >= 0.2);
    assert_eq!(v["seed"], 0);
    for key in ["achieved_violation", "restarts", "feasible_restarts"] {
        assert!(v.get(key).is_some(), "{key}");
    }

    // A threshold the anti-linear search cannot meet forces the loud exit.
    let out = qcompare(&[
        "search", "--k", "orth", "--antilinear", "--case", "2", "--budget", "2", "--tol=-1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["threshold_held"], false);
}

#[test]
fn cloning_game_examples() {
    let v = report(&["cloning-game", "--cloner", "universal", "--state", "[[0.6,0],[0,0.8]]"]);
    assert!((num(&v, "expected_payoff") - 5.0 / 6.0).abs() <= 1e-10);
    let v = report(&["cloning-game", "--cloner", "trivial", "--state", "[[0.6,0],[0,0.8]]"]);
    assert!((num(&v, "expected_payoff") - 1.0).abs() <= 1e-10);
    let v = report(&[
        "cloning-game", "--state", "[[0.6,0],[0,0.8]]", "--clone-index", "2", "--sample", "1000000",
    ]);
    assert!((num(&v, "empirical_payoff") - num(&v, "expected_payoff")).abs() < 0.005);
}

#[test]
fn output_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = qcompare(&[
        "swap-test", "--a", "[[1,0],[0,0]]", "--b", "[[1,0],[0,0]]", "--json-indent", "0",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1);
    serde_json::from_str::<Value>(&text).unwrap();
}
