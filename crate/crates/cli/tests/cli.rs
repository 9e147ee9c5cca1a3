use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn cmac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmac")).args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> Output {
    let out = cmac(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn config_path(name: &str) -> String {
    configs().join(name).to_str().unwrap().to_string()
}

/// Writes `name` from the shipped configs with `edit` applied.
fn edited_config(dir: &Path, name: &str, edit: impl FnOnce(&mut Value)) -> PathBuf {
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(configs().join(name)).unwrap()).unwrap();
    edit(&mut doc);
    let out = dir.join(name);
    fs::write(&out, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    out
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

/// Vertex rows of a region CSV.
fn vertices(p: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(p)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn max_sum(manifest: &Value, name: &str) -> f64 {
    manifest["entries"].as_array().unwrap().iter().find(|e| e["name"] == name).unwrap()["max_sum_rate"]
        .as_f64()
        .unwrap()
}

#[test]
fn region_writes_one_csv_per_scheme_and_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["region", "--config", &config_path("fig1_body.json"), "--out", path(dir.path())]);
    for scheme in ["outer", "one-round", "two-round", "no-coop"] {
        assert!(dir.path().join(format!("{scheme}.csv")).is_file(), "{scheme}");
    }
    let manifest = read_json(&dir.path().join("manifest.json"));
    assert!((max_sum(&manifest, "no-coop") - 1.2618).abs() < 2e-3);
    assert!((max_sum(&manifest, "outer") - 1.5618).abs() < 2e-3);
    assert_eq!(manifest["clip"].as_f64(), Some(64.0));
    assert_eq!(manifest["grid"]["power_points"].as_u64(), Some(33));
    assert_eq!(manifest["config"]["c12"].as_f64(), Some(0.3));

    let hash = manifest["config_hash"].as_str().unwrap();
    let first = fs::read_to_string(dir.path().join("outer.csv")).unwrap();
    assert_eq!(first.lines().next().unwrap(), format!("# config={hash}"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = edited_config(dir.path(), "fig1_body.json", |d| {
        d["c12"] = 0.0.into();
        d["c21"] = 0.0.into();
        d["r0_mode"] = "full".into();
    });
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        run_ok(&["region", "--config", path(&cfg), "--schemes", "outer", "--grid", "9", "--out", path(out)]);
    }
    for file in ["outer.csv", "manifest.json"] {
        assert_eq!(fs::read(a.join(file)).unwrap(), fs::read(b.join(file)).unwrap(), "{file}");
    }

    let (g1, g2) = (dir.path().join("g1"), dir.path().join("g2"));
    for out in [&g1, &g2] {
        run_ok(&["gap", "--config", &config_path("symmetric.json"), "--samples", "500", "--out", path(out)]);
    }
    assert_eq!(fs::read(g1.join("gap.json")).unwrap(), fs::read(g2.join("gap.json")).unwrap());
}

#[test]
fn seed_flag_changes_the_audit_sample() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let cfg = config_path("broadcast.json");
    run_ok(&["gap", "--config", &cfg, "--samples", "200", "--seed", "1", "--out", path(&a)]);
    run_ok(&["gap", "--config", &cfg, "--samples", "200", "--seed", "2", "--out", path(&b)]);
    let worst = |d: &Path| read_json(&d.join("gap.json"))["audits"][0]["summary"]["worst_gap"].as_f64().unwrap();
    assert_ne!(worst(&a), worst(&b));
}

#[test]
fn encoder_conferencing_writes_three_variants() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["region", "--config", &config_path("region2.json"), "--out", path(dir.path())]);
    let manifest = read_json(&dir.path().join("manifest.json"));
    let encoder = max_sum(&manifest, "cme-outer-encoder");
    let decoder = max_sum(&manifest, "cme-outer-decoder");
    let both = max_sum(&manifest, "cme-outer-both");
    assert!(both >= encoder.max(decoder) - 1e-12);
    // Decoder-side only is the plain outer bound at R0 = 0.
    assert!((decoder - max_sum(&manifest, "outer")).abs() < 1e-12);
    for name in ["cme-outer-encoder", "cme-outer-decoder", "cme-outer-both"] {
        assert!(!vertices(&dir.path().join(format!("{name}.csv"))).is_empty());
    }
}

#[test]
fn sweep_starts_at_no_cooperation_and_saturates() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["sweep", "--config", &config_path("fig2.json"), "--out", path(dir.path())]);
    let text = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next().unwrap(), "sweep_value,outer,one_round,two_round,no_coop");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 21);
    assert!((rows[0][1] - rows[0][4]).abs() < 1e-12);
    assert!((rows[20][1] - 2.396).abs() < 5e-3);
    assert!(rows.windows(2).all(|w| w[1][1] >= w[0][1] - 1e-12));
}

#[test]
fn sweep_flag_overrides_and_leaves_unrequested_columns_empty() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "sweep",
        "--config",
        &config_path("fig3.json"),
        "--schemes",
        "outer",
        "--sweep",
        "c12=0:1:3",
        "--out",
        path(dir.path()),
    ]);
    let text = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",,,")));
}

#[test]
fn gap_modes_report_their_caps() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_ok(&["gap", "--config", &config_path("symmetric.json"), "--out", path(dir.path())]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
    let report = read_json(&dir.path().join("gap.json"));
    let cap = report["symmetric"][0]["delta"].as_f64().unwrap();
    assert!((cap - 0.293).abs() < 1e-3);
    assert_eq!(report["region_form_failures"].as_u64(), Some(0));

    run_ok(&["gap", "--config", &config_path("mux.json"), "--out", path(dir.path())]);
    let mux = read_json(&dir.path().join("gap.json"));
    let rows = mux["mux"].as_array().unwrap();
    assert!(rows.last().unwrap()["gain"].as_f64().unwrap() >= 1.9);

    run_ok(&["gap", "--config", &config_path("broadcast.json"), "--samples", "2000", "--out", path(dir.path())]);
    let bc = read_json(&dir.path().join("gap.json"));
    assert_eq!(bc["pass"], Value::Bool(true));
    assert_eq!(bc["audits"][0]["summary"]["samples"].as_u64(), Some(2000));
}

#[test]
fn noiseless_binary_channel_gives_unit_rates() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["dm", "--config", &config_path("dm_noiseless.json"), "--out", path(dir.path())]);
    for name in ["dm-ccm00", "dm-outer", "dm-one-round", "dm-two-round", "dm-no-coop"] {
        let v = vertices(&dir.path().join(format!("{name}.csv")));
        let max = |k: usize| v.iter().map(|p| p[k]).fold(0.0, f64::max);
        assert!((max(0) - 1.0).abs() < 1e-12 && (max(1) - 1.0).abs() < 1e-12, "{name}");
    }
    let manifest = read_json(&dir.path().join("manifest.json"));
    let compression = &manifest["entries"][0]["compression"];
    assert_eq!(compression["pairs"], compression["feasible"]);
}

#[test]
fn degraded_cascade_ignores_the_backward_link() {
    let dir = tempfile::tempdir().unwrap();
    let run = |c21: f64| {
        let cfg = edited_config(dir.path(), "dm_cascade.json", |d| d["c21"] = c21.into());
        let out = dir.path().join(format!("c21-{c21}"));
        run_ok(&["dm", "--config", path(&cfg), "--schemes", "outer", "--out", path(&out)]);
        (vertices(&out.join("dm-outer.csv")), read_json(&out.join("manifest.json")))
    };
    let (with_link, manifest) = run(0.3);
    let (without, _) = run(0.0);
    assert_eq!(manifest["entries"][0]["physically_degraded"], Value::Bool(true));
    assert_eq!(with_link.len(), without.len());
    for (a, b) in with_link.iter().zip(&without) {
        assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12), "{a:?} vs {b:?}");
    }
}

#[test]
fn oversized_alphabet_is_a_usage_error_naming_the_cap() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = edited_config(dir.path(), "dm_noiseless.json", |d| {
        d["dm"]["channel"]["sizes"] = serde_json::json!([2, 2, 5, 4]);
    });
    let out = cmac(&["dm", "--config", path(&cfg), "--out", path(&dir.path().join("o"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap of 4"));
}

#[test]
fn missing_config_is_an_io_error_naming_the_path() {
    let out = cmac(&["region", "--config", "/nonexistent/scenario.json"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/scenario.json"));
}

#[test]
fn unwritable_output_is_an_io_error_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let target = blocker.join("out");
    let out = cmac(&["region", "--config", &config_path("fig1_body.json"), "--out", path(&target)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains(path(&target)));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["sweep".into(), "--config".into(), config_path("fig2.json"), "--sweep".into(), "gain=0:1:3".into()],
        vec!["sweep".into(), "--config".into(), config_path("fig2.json"), "--sweep".into(), "c21=1:0:3".into()],
        vec!["region".into(), "--config".into(), config_path("fig1_body.json"), "--schemes".into(), "best".into()],
        vec!["gap".into(), "--config".into(), config_path("fig1_body.json"), "--mode".into(), "loose".into()],
        vec!["frobnicate".into()],
    ];
    for args in cases {
        let mut args = args;
        args.extend(["--out".into(), path(&dir.path().join("o")).to_string()]);
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = cmac(&refs);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn unknown_config_fields_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = edited_config(dir.path(), "fig1_body.json", |d| d["power"] = 5.into());
    let out = cmac(&["region", "--config", path(&cfg), "--out", path(&dir.path().join("o"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("power"));
}
