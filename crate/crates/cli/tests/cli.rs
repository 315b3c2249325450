use std::path::Path;
use std::process::Command;

use qmarket_cli::run;
use serde_json::Value;

fn qmarket(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qmarket")).args(args).output().unwrap()
}

fn run_to(out: &Path, args: &[&str]) -> (i32, String) {
    let mut argv = vec!["qmarket"];
    argv.extend(args);
    argv.extend(["--out", out.to_str().unwrap()]);
    let code = run(argv);
    (code, std::fs::read_to_string(out).unwrap_or_default())
}

#[test]
fn spectrum_example() {
    let out = qmarket(&["spectrum", "--levels", "3", "--hbar-e", "1", "--theta", "6.283185307", "--m", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,eigenvalue"));
    for (n, line) in lines.enumerate() {
        let (idx, e) = line.split_once(',').unwrap();
        assert_eq!(idx.parse::<usize>().unwrap(), n);
        let e: f64 = e.parse().unwrap();
        assert!((e - (n as f64 + 0.5)).abs() < 1e-6 * (n as f64 + 0.5));
    }
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn thermal_json_example() {
    let out = qmarket(&["thermal", "--beta", "1", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["beta", "x", "mean_risk", "entropy", "grid"]);
    let x = v["x"].as_f64().unwrap();
    assert!((v["mean_risk"].as_f64().unwrap() - 1.0 / x).abs() < 1e-5);
}

#[test]
fn empty_zeno_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = run_to(&dir.path().join("z.csv"), &["zeno", "--frequencies"]);
    assert_eq!(code, 0);
    assert_eq!(text, "switch_probability,ticks,transaction_rate,mean_transactions,price_variance,crashed\n");
}

#[test]
fn every_subcommand_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 8] = [
        &["spectrum", "--levels", "4", "--n-points", "256"],
        &["coherent", "--r", "-0.5", "--eta", "0.8"],
        &["wigner", "--level", "3", "--format", "json"],
        &["thermal", "--beta", "0.5"],
        &["zeno", "--ticks", "2000", "--seed", "9"],
        &["zeno", "--ticks", "500", "--seed", "9", "--format", "json"],
        &["monopolist", "--ticks", "2000", "--seed", "4", "--pin-price", "0.3"],
        &["monopolist", "--ticks", "500", "--format", "json"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let a = run_to(&dir.path().join(format!("{i}a")), args);
        let b = run_to(&dir.path().join(format!("{i}b")), args);
        assert_eq!(a.0, 0, "{args:?}");
        assert!(!a.1.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn exit_codes_follow_error_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let cases: [(&[&str], i32); 12] = [
        (&["frobnicate"], 2),
        (&["spectrum", "--levels", "many"], 2),
        (&["spectrum", "--q-min", "3", "--q-max", "-3"], 2),
        (&["spectrum", "--n-points", "4"], 2),
        (&["spectrum", "--levels", "100", "--n-points", "256"], 2),
        (&["thermal", "--beta", "0"], 2),
        (&["thermal", "--beta", "-1"], 2),
        (&["coherent", "--r", "1"], 2),
        (&["zeno", "--frequencies", "1.5"], 2),
        (&["monopolist", "--pin-price", "1e6"], 2),
        // valid parameters the default grid cannot hold
        (&["coherent", "--eta", "3"], 1),
        (&["coherent", "--q-min", "-2", "--q-max", "2"], 1),
    ];
    for (args, code) in cases {
        assert_eq!(run_to(&out, args).0, code, "{args:?}");
    }
    let missing = dir.path().join("no/such/dir/out.csv");
    assert_eq!(run(["qmarket", "spectrum", "--levels", "1", "--out", missing.to_str().unwrap()]), 1);
    assert_eq!(qmarket(&["frobnicate"]).status.code(), Some(2));
    assert!(!qmarket(&["frobnicate"]).stderr.is_empty());
    assert_eq!(qmarket(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_document_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "hbar_e = 2.0\nlevels = 2\nn_points = 512\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = dir.path().join("s.csv");

    let (code, text) = run_to(&out, &["spectrum", "--config", cfg]);
    assert_eq!(code, 0);
    let e: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(e.len(), 2);
    assert!((e[0] - 1.0).abs() < 1e-6);

    let (_, text) = run_to(&out, &["spectrum", "--config", cfg, "--hbar-e", "1"]);
    let e0: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((e0 - 0.5).abs() < 1e-6);

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "hbar = 2.0\n").unwrap();
    assert_eq!(run_to(&out, &["spectrum", "--config", bad.to_str().unwrap()]).0, 2);
    std::fs::write(&bad, "levels = \"three\"\n").unwrap();
    assert_eq!(run_to(&out, &["spectrum", "--config", bad.to_str().unwrap()]).0, 2);
    assert_eq!(run_to(&out, &["spectrum", "--config", "/nonexistent.toml"]).0, 2);
}
