//! End-to-end runs of the binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use resolvent_decay::transforms::{predict, EnvelopeKind, EnvelopeParams};
use resolvent_decay::GrowthFunction;
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_resolvent-decay"));
    c.arg("--quiet");
    c
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn envelope_rows(path: PathBuf) -> Vec<(f64, f64)> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[0].parse().unwrap(), rec[1].parse().unwrap())
        })
        .collect()
}

const P2: &str = r#"{"kind":"power","alpha":2}"#;
const LOG: &str = r#"{"kind":"log_power","alpha":1}"#;

fn wave_config(damping: f64, cfl: f64) -> String {
    format!(
        r#"{{"kernel":{{"atoms":[{{"tau":1.0,"w":{damping}}}],"epsilon":1.0}},
            "grid_points":100,"cfl":{cfl},"t_final":3.0,
            "initial_displacement":{{"profile":"bump","center":0.5,"radius":0.3}},
            "record_stride":5}}"#
    )
}

#[test]
fn analyze_detects_positive_increase() {
    let d = TempDir::new().unwrap();
    write(d.path(), "f.json", r#"{"kind":"power","alpha":0.5}"#);
    write(d.path(), "g.json", LOG);
    assert_eq!(run(d.path(), &["analyze", "f.json", "--out", "a"]).status.code(), Some(0));
    assert_eq!(run(d.path(), &["analyze", "g.json", "--out", "b"]).status.code(), Some(0));
    let a = json(d.path().join("a/report.json"));
    assert_eq!(a["positive_increase"]["detected"], true);
    assert!((a["regular_variation"]["index"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert_eq!(json(d.path().join("b/report.json"))["positive_increase"]["detected"], false);
    assert!(d.path().join("a/aux.json").exists());
    let m = json(d.path().join("a/manifest.json"));
    assert_eq!(m["subcommand"], "analyze");
}

#[test]
fn malformed_input_exits_2() {
    let d = TempDir::new().unwrap();
    write(d.path(), "bad.json", "{\"kind\": \"power\", ");
    let out = run(d.path(), &["analyze", "bad.json", "--out", "a"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!d.path().join("a").exists());
    assert_eq!(run(d.path(), &["analyze", "missing.json", "--out", "a"]).status.code(), Some(2));
}

#[test]
fn predict_matches_library() {
    let d = TempDir::new().unwrap();
    write(d.path(), "p2.json", P2);
    let m = GrowthFunction::power(2.0);
    for (kind, t, expect) in [("optimal", "16", 0.25), ("lower", "4", 0.5)] {
        let out = d.path().join(kind);
        let code = run(
            d.path(),
            &["predict", "p2.json", "--kind", kind, "--t-min", t, "--t-max", t, "--points", "1", "--out", kind],
        )
        .status
        .code();
        assert_eq!(code, Some(0));
        let rows = envelope_rows(out.join("envelope.csv"));
        assert_eq!(rows.len(), 1);
        assert!((rows[0].1 - expect).abs() < 1e-12, "{kind}: {}", rows[0].1);
        let lib = predict(&m, kind.parse().unwrap(), EnvelopeParams::default()).unwrap();
        assert_eq!(rows[0].1, lib.value(rows[0].0).unwrap());
    }
}

#[test]
fn predict_exact_normal() {
    let d = TempDir::new().unwrap();
    write(d.path(), "log.json", LOG);
    let out = run(
        d.path(),
        &["predict", "log.json", "--kind", "exact_normal", "--t-min", "100", "--t-max", "100", "--points", "1", "--out", "e"],
    );
    assert_eq!(out.status.code(), Some(0));
    let v = envelope_rows(d.path().join("e/envelope.csv"))[0].1;
    // M_max(s) = (ln s)²/4 for ln on [1, ∞), so the envelope is e^{−2√t}.
    let oracle = (-2.0 * 100f64.sqrt()).exp();
    assert!((v / oracle - 1.0).abs() < 0.01, "{v}");
    let lib = predict(&GrowthFunction::log_power(1.0, 1.0), EnvelopeKind::ExactNormal, EnvelopeParams::default().with_t_range(100.0, 100.0))
        .unwrap();
    assert!((lib.value(100.0).unwrap() / v - 1.0).abs() < 1e-9);
}

#[test]
fn quasi_kinds_need_aux() {
    let d = TempDir::new().unwrap();
    write(d.path(), "e.json", r#"{"kind":"exp_log_power","alpha":0.5}"#);
    let out = run(d.path(), &["predict", "e.json", "--kind", "quasi_full", "--out", "q"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(d.path(), &["analyze", "e.json", "--s-max", "1e20", "--out", "a"]).status.code(), Some(0));
    let out = run(d.path(), &["predict", "e.json", "--kind", "quasi_full", "--aux", "a/aux.json", "--t-min", "10", "--out", "q"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = envelope_rows(d.path().join("q/envelope.csv"));
    assert_eq!(rows.len(), 50);
    assert!(rows.windows(2).all(|w| w[1].1 <= w[0].1));
}

#[test]
fn quasi_kinds_reject_bounded_aux() {
    // For a power the auxiliary function stays below 1, so M_K has no domain.
    let d = TempDir::new().unwrap();
    write(d.path(), "p2.json", P2);
    assert_eq!(run(d.path(), &["analyze", "p2.json", "--out", "a"]).status.code(), Some(0));
    let out = run(d.path(), &["predict", "p2.json", "--kind", "quasi_full", "--aux", "a/aux.json", "--out", "q"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn spectrum_verdicts() {
    let d = TempDir::new().unwrap();
    write(d.path(), "p2.json", P2);
    write(d.path(), "log.json", LOG);
    assert_eq!(run(d.path(), &["spectrum", "p2.json", "--out", "s"]).status.code(), Some(0));
    assert_eq!(run(d.path(), &["spectrum", "log.json", "--out", "l"]).status.code(), Some(0));
    assert_eq!(json(d.path().join("s/diagnostics.json"))["verdict"], "consistent");
    assert_eq!(json(d.path().join("l/diagnostics.json"))["verdict"], "consistent (contrapositive)");
    let out = run(d.path(), &["spectrum", "p2.json", "--beta-min", "10", "--beta-max", "1", "--out", "x"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn wave_runs_and_rejects_bad_cfl() {
    let d = TempDir::new().unwrap();
    write(d.path(), "w.json", &wave_config(1e-8, 0.9));
    write(d.path(), "bad.json", &wave_config(1.0, 1.5));
    let out = run(d.path(), &["wave", "w.json", "--fit-t1", "1", "--fit-t2", "3", "--out", "w"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let fit = json(d.path().join("w/fit.json"));
    assert!(fit["energy_drift"].as_f64().unwrap() < 1e-6);
    assert!(fit["discrete_balance_error"].as_f64().unwrap().abs() < 1e-12);
    let trace = fs::read_to_string(d.path().join("w/trace.csv")).unwrap();
    assert!(trace.starts_with("time,field_energy,memory_energy,dissipation_rate,total_energy"));
    assert_eq!(run(d.path(), &["wave", "bad.json", "--out", "b"]).status.code(), Some(2));
}

#[test]
fn kernel_build_counts_atoms() {
    let d = TempDir::new().unwrap();
    let out = run(d.path(), &["kernel-build", "--alpha", "0.5", "--tau-max", "1e6", "--per-decade", "200", "--out", "k"]);
    assert_eq!(out.status.code(), Some(0));
    let summary = json(d.path().join("k/kernel.json"));
    assert_eq!(summary["atoms"], 1200);
    let csv = fs::read_to_string(d.path().join("k/kernel.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1201);
    assert_eq!(run(d.path(), &["kernel-build", "--alpha", "2.5", "--out", "bad"]).status.code(), Some(3));
}

#[test]
fn existing_output_is_not_clobbered() {
    let d = TempDir::new().unwrap();
    write(d.path(), "p2.json", P2);
    fs::create_dir(d.path().join("o")).unwrap();
    write(&d.path().join("o"), "keep.txt", "x");
    let out = run(d.path(), &["predict", "p2.json", "--kind", "lower", "--out", "o"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(fs::read_to_string(d.path().join("o/keep.txt")).unwrap(), "x");
}

#[test]
fn show_defaults_prints_json() {
    let out = bin().arg("--show-defaults").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["inverse_tol"], 1e-9);
}

#[test]
fn outputs_are_deterministic() {
    let d = TempDir::new().unwrap();
    write(d.path(), "p2.json", P2);
    for o in ["r1", "r2"] {
        assert_eq!(run(d.path(), &["spectrum", "p2.json", "--out", o]).status.code(), Some(0));
    }
    for f in ["spectrum.csv", "decay.csv", "diagnostics.json"] {
        let a = fs::read(d.path().join("r1").join(f)).unwrap();
        let b = fs::read(d.path().join("r2").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs between runs");
    }
}
