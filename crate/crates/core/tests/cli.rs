use std::path::{Path, PathBuf};
use std::process::Command;

use orlicz_kit::config::{parse_config, ExperimentConfig};
use serde_json::Value;

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn all_configs() -> Vec<PathBuf> {
    let mut out = Vec::new();
    for dir in [configs_dir(), configs_dir().join("inclusion")] {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.extension().is_some_and(|x| x == "json") {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

fn load(path: &Path) -> ExperimentConfig {
    parse_config(&std::fs::read_to_string(path).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn run(command: &str, config: &Path, out: &Path, extra: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_orlicz-kit"))
        .arg(command)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap();
    (
        o.status.code().unwrap(),
        String::from_utf8_lossy(&o.stdout).into_owned(),
        String::from_utf8_lossy(&o.stderr).into_owned(),
    )
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn shipped_configs_round_trip() {
    let paths = all_configs();
    assert!(paths.len() >= 25);
    for path in paths {
        let cfg = load(&path);
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(parse_config(&text).unwrap(), cfg, "{}", path.display());
    }
}

#[test]
fn passing_run_exits_zero_with_one_report() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, _) = run("verify-holder", &configs_dir().join("verify-holder.json"), dir.path(), &[]);
    assert_eq!(code, 0, "{stdout}");
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let report = read_json(&dir.path().join("holder.json"));
    assert_eq!(report["passed"], true);
    assert_eq!(report["result"]["claim"], "holder");
    assert_eq!(report["seed"], 0);
    assert!(report["timestamp"].is_string());
}

#[test]
fn failing_verification_exits_one_with_reason() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(
        "verify-inclusion",
        &configs_dir().join("verify-inclusion-unmet.json"),
        dir.path(),
        &[],
    );
    assert_eq!(code, 1);
    let report = read_json(&dir.path().join("lebesgue-inclusion.json"));
    assert_eq!(report["passed"], false);
    assert_eq!(report["result"]["precondition"]["status"], "unmet");
}

#[test]
fn failing_inequality_reports_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("coarse.json");
    // no cell centre falls inside the ball
    std::fs::write(
        &cfg,
        r#"{"command":"oracle","phi":{"variant":"power","p":2},"ball":{"a":[0],"r":0.05,"n":1},
            "grid":{"n":1,"R":1,"m":16}}"#,
    )
    .unwrap();
    let (code, stdout, _) = run("oracle", &cfg, &dir.path().join("out"), &[]);
    assert_eq!(code, 1, "{stdout}");
    let report = read_json(&dir.path().join("out/char-norm.json"));
    assert_eq!(report["passed"], false);
    let w = &report["result"]["witnesses"][0];
    assert_eq!(w["lhs"], 0.0);
    assert!(w["rhs"].as_f64().unwrap() > 0.0);
}

#[test]
fn failed_validation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(
        "validate-young",
        &configs_dir().join("validate-young-concave.json"),
        dir.path(),
        &[],
    );
    assert_eq!(code, 1);
    let report = read_json(&dir.path().join("validate-young.json"));
    assert_eq!(report["result"]["validation"]["violation"]["check"], "convexity");
}

#[test]
fn unwritable_output_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "not a directory").unwrap();
    let (code, _, stderr) = run("oracle", &configs_dir().join("oracle.json"), &blocker.join("sub"), &[]);
    assert_eq!(code, 2, "{stderr}");
    assert!(!stderr.is_empty());
}

#[test]
fn config_errors_exit_two_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(
        &cfg,
        r#"{"command":"norm","phi":{"variant":"power","p":-1},"grid":{"n":1,"R":2,"m":64},"f":{"kind":"zero"}}"#,
    )
    .unwrap();
    let (code, _, stderr) = run("norm", &cfg, dir.path(), &[]);
    assert_eq!(code, 2);
    assert!(stderr.contains("phi.p"), "{stderr}");

    std::fs::write(&cfg, "").unwrap();
    assert_eq!(run("norm", &cfg, dir.path(), &[]).0, 2);
    assert_eq!(run("norm", &dir.path().join("missing.json"), dir.path(), &[]).0, 2);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    // command disagrees with the config
    assert_eq!(run("norm", &configs_dir().join("oracle.json"), dir.path(), &[]).0, 2);
    // unknown command
    assert_eq!(run("prove", &configs_dir().join("oracle.json"), dir.path(), &[]).0, 2);
    // bad seed
    assert_eq!(run("oracle", &configs_dir().join("oracle.json"), dir.path(), &["--seed", "x"]).0, 2);
}

#[test]
fn profile_csv_written_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run("norm", &configs_dir().join("norm.json"), dir.path(), &["--profile-csv"]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.path().join("norm_profile.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("value,measure"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (v, m) = l.split_once(',').unwrap();
            (v.parse().unwrap(), m.parse().unwrap())
        })
        .collect();
    assert!(!rows.is_empty());
    assert!(rows.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 > w[1].1));
    let report = read_json(&dir.path().join("norm.json"));
    assert_eq!(report["result"]["norm"]["value"], 2.0);
}

#[test]
fn same_seed_gives_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("norm-orlicz-weighted.json");
    let strip = |p: &Path| {
        let mut v = read_json(p);
        v.as_object_mut().unwrap().remove("timestamp");
        v
    };
    let mut outs = Vec::new();
    for (i, seed) in ["5", "5", "6"].iter().enumerate() {
        let out = dir.path().join(i.to_string());
        assert_eq!(run("norm", &cfg, &out, &["--seed", seed]).0, 0);
        outs.push(strip(&out.join("norm.json")));
    }
    assert_eq!(outs[0], outs[1]);
    assert_ne!(outs[0], outs[2]);
    assert_eq!(outs[0]["seed"], 5);
}

#[test]
fn probe_ratio_table() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(
        "probe-no-inclusion",
        &configs_dir().join("probe-no-inclusion.json"),
        dir.path(),
        &[],
    );
    assert_eq!(code, 0);
    let r = read_json(&dir.path().join("no-global-inclusion.json"));
    let w = r["result"]["witnesses"].as_array().unwrap();
    assert_eq!(w.len(), 21);
    assert!(w[0]["lhs"].as_f64().unwrap() > 20.0);
    assert!(w[20]["lhs"].as_f64().unwrap() < 0.05);
}

#[test]
fn oracle_run_includes_grid_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, _) = run("oracle", &configs_dir().join("oracle.json"), dir.path(), &[]);
    assert_eq!(code, 0);
    assert!(stdout.contains("PASS char-norm"));
    let v = read_json(&dir.path().join("oracle.json"));
    assert!((v["result"]["value"].as_f64().unwrap() - std::f64::consts::SQRT_2).abs() < 1e-12);
}
