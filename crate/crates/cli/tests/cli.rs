use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gmin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmin")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) {
    let o = gmin(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
}

fn assert_same_tree(a: &Path, b: &Path) {
    let mut names: Vec<_> = fs::read_dir(a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(!names.is_empty());
    for name in names {
        let (x, y) = (fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap());
        assert!(x == y, "{name:?} differs between runs");
    }
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &["run", "--n", "3", "--trials", "150", "--seed", "7"],
        &["run", "--n", "3", "--strategy", "aem", "--t1", "800", "--t2", "900", "--ancilla", "1", "--trials", "40"],
        &["mc", "--n", "9", "--trials", "500", "--seed", "3"],
        &["survey", "--n", "8", "--trials", "200", "--betas", "0.5,0.95", "--gammas", "1.1,1.2"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let runs: Vec<_> = (0..2).map(|k| dir.path().join(format!("{i}-{k}"))).collect();
        for out in &runs {
            let mut full = args.to_vec();
            full.extend(["--out", out.to_str().unwrap()]);
            ok(&full);
        }
        assert_same_tree(&runs[0], &runs[1]);
    }
}

#[test]
fn seed_changes_output_and_manifest_hash() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(&["mc", "--n", "8", "--trials", "300", "--seed", "1", "--out", a.to_str().unwrap()]);
    ok(&["mc", "--n", "8", "--trials", "300", "--seed", "2", "--out", b.to_str().unwrap()]);
    assert_ne!(fs::read(a.join("trials.csv")).unwrap(), fs::read(b.join("trials.csv")).unwrap());
    let hash = |p: &Path| {
        let m: serde_json::Value = serde_json::from_slice(&fs::read(p.join("manifest.json")).unwrap()).unwrap();
        m["config_hash"].as_str().unwrap().to_string()
    };
    assert_ne!(hash(&a), hash(&b));
    assert_eq!(hash(&a).len(), 64);
}

#[test]
fn trials_csv_has_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    ok(&["run", "--n", "3", "--trials", "20", "--out", out.to_str().unwrap()]);
    let first = |f: &str| fs::read_to_string(out.join(f)).unwrap().lines().next().unwrap().to_string();
    assert_eq!(first("trials.csv"), "trial_id,seed,n,strategy,calls_to_solution,c1,c2,runtime_units,succeeded");
    assert_eq!(first("curve.csv"), "T,P,M,N");
    assert_eq!(first("ratefit.csv"), "N,a,a_err,r2,a_eff,a_eff_err");
    assert!(fs::read_to_string(out.join("curve.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn fit_reproduces_stored_rate() {
    let dir = tempfile::tempdir().unwrap();
    let (run, refit) = (dir.path().join("run"), dir.path().join("refit"));
    ok(&["mc", "--n", "10", "--trials", "2000", "--out", run.to_str().unwrap()]);
    ok(&["fit", run.join("curve.csv").to_str().unwrap(), "--out", refit.to_str().unwrap()]);
    assert_eq!(fs::read(run.join("ratefit.csv")).unwrap(), fs::read(refit.join("ratefit.csv")).unwrap());
}

#[test]
fn config_file_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    for (body, field) in [("n = 3\nbeta = \"steep\"\n", "`beta`"), ("n = 3\nbetta = 0.9\n", "betta")] {
        let cfg = dir.path().join("c.toml");
        fs::write(&cfg, body).unwrap();
        let o = gmin(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2));
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(field), "{err}");
    }
    assert!(!out.exists());
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "n = 3\ntrials = 30\nseed = 11\nstrategy = \"sem\"\nt1 = 2000.0\n").unwrap();
    let out = dir.path().join("o");
    ok(&["run", "--config", cfg.to_str().unwrap(), "--trials", "12", "--out", out.to_str().unwrap()]);
    let m: serde_json::Value = serde_json::from_slice(&fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["config"]["trials"], 12);
    assert_eq!(m["config"]["strategy"], "sem");
    assert_eq!(m["config"]["t1"], 2000.0);
    assert_eq!(fs::read_to_string(out.join("trials.csv")).unwrap().lines().count(), 13);
}

#[test]
fn invalid_settings_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let out = out.to_str().unwrap();
    for args in [
        vec!["run", "--t1", "100", "--out", out],
        vec!["run", "--strategy", "aem", "--t1", "100", "--t2", "500", "--out", out],
        vec!["run", "--gamma", "1.5", "--out", out],
        vec!["mc", "--strategy", "aem", "--out", out],
    ] {
        assert_eq!(gmin(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn blocks_match_dense_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    for (model, size) in [("cycle", "4"), ("xy", "5"), ("heisenberg", "6")] {
        let out = dir.path().join(model);
        ok(&["blocks", "--model", model, "--size", size, "--out", out.to_str().unwrap()]);
        let m: serde_json::Value = serde_json::from_slice(&fs::read(out.join("manifest.json")).unwrap()).unwrap();
        assert!(m["notes"]["max_gap"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn reproduce_small_scale() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig9");
    ok(&["reproduce", "fig9", "--scale", "0.05", "--out", out.to_str().unwrap()]);
    let curve = fs::read_to_string(out.join("curve.csv")).unwrap();
    assert!(curve.lines().any(|l| l.ends_with(",16")) && curve.lines().any(|l| l.ends_with(",32")));
    assert!(out.join("ratefit.svg").exists() && out.join("manifest.json").exists());
}
