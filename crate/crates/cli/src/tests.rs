use std::path::Path;

use serde_json::Value;

use crate::main_with;

struct Output {
    code: i32,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
}

impl Output {
    fn success(&self) -> bool {
        self.code == 0
    }
}

fn run(args: &[&str]) -> Output {
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let code = main_with(std::iter::once("nimkerr").chain(args.iter().copied()), &mut stdout, &mut stderr);
    Output { code, stdout, stderr }
}

fn json(out: &Output) -> Value {
    assert!(out.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn error(out: &Output) -> Value {
    assert_eq!(out.code, 1);
    assert!(out.stdout.is_empty());
    serde_json::from_slice(&out.stderr).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn zero_loss_reports_thz() {
    let doc = json(&run(&["zero-loss"]));
    let r = &doc["result"];
    let w0 = r["omega0"].as_f64().unwrap();
    assert!((w0 - 4.4e14).abs() / 4.4e14 < 0.05);
    assert_eq!(r["omega0_thz"].as_f64().unwrap(), w0 / 1e12);
    assert!(r["im_k_residual"].as_f64().unwrap().abs() < 1.0);
    assert_eq!(doc["metadata"]["tool"], "nimkerr");
    assert_eq!(doc["metadata"]["preset"], "paper-2012");
    assert_eq!(doc["metadata"]["omega0"].as_f64().unwrap(), w0);
}

#[test]
fn zero_loss_without_crossing_fails_with_json() {
    let e = error(&run(&["zero-loss", "--bracket-lo", "500THz", "--bracket-hi", "600THz"]));
    assert_eq!(e["error"], "NoSignChange");
    assert!(e["message"].as_str().unwrap().contains("no sign change"));
}

#[test]
fn fig3_two_points_gives_header_and_two_rows() {
    let out = run(&["fig3", "--points", "2", "--format", "csv"]);
    assert!(out.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "omega,omega_over_omega0,re_k,im_k,xi,v_g_over_c,chi_times_1e4,phi_over_pi,valid");
    for row in &lines[1..] {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 9);
        // 17 significant digits: one leading digit, 16 after the point.
        let mantissa = cells[0].split('e').next().unwrap();
        assert_eq!(mantissa.len(), 18, "{}", cells[0]);
    }
}

#[test]
fn fig3_csv_writes_metadata_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig3.csv");
    let path = out.to_string_lossy().into_owned();
    let r = run(&[
        "fig3",
        "--format",
        "csv",
        "--omega-min",
        "450THz",
        "--omega-max",
        "600THz",
        "--points",
        "4",
        "--out",
        &path,
    ]);
    assert!(r.success());
    assert!(r.stdout.is_empty());
    let meta: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig3.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["command"], "fig3");
    assert_eq!(meta["config"]["grid"]["omega_min"].as_f64().unwrap(), 4.5e14);
    assert_eq!(meta["config"]["grid"]["omega_max"].as_f64().unwrap(), 6e14);
    assert_eq!(meta["config"]["grid"]["points"], 4);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.lines().nth(1).unwrap().starts_with("4.5000000000000000e14,"));
}

#[test]
fn fig3_flags_invalid_rows_instead_of_aborting() {
    // The first row sits exactly on the zero-loss point, where the mode is unbound.
    let w0 = json(&run(&["zero-loss"]))["result"]["omega0"].as_f64().unwrap().to_string();
    let doc = json(&run(&["fig3", "--omega-min", &w0, "--omega-max", "600THz", "--points", "7"]));
    let records = doc["result"]["records"].as_array().unwrap();
    assert_eq!(records.len(), 7);
    assert_eq!(records[0]["valid"], false);
    assert!(records[0]["diagnostic"].as_str().unwrap().starts_with("Unconfined"));
    assert!(records.iter().any(|r| r["valid"] == true));
    for r in records.iter().filter(|r| r["valid"] == true) {
        assert!(r["chi_times_1e4"].as_f64().unwrap().is_finite());
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"grid": {"points": 9, "omega_min": "480 THz", "omega_max": "560 THz"}, "seed": 3}"#,
    );
    let doc = json(&run(&["fig3", "--config", &cfg, "--points", "3"]));
    let grid = &doc["metadata"]["config"]["grid"];
    assert_eq!(grid["points"], 3);
    assert_eq!(grid["omega_min"].as_f64().unwrap(), 4.8e14);
    assert_eq!(doc["metadata"]["seed"], 3);
    assert_eq!(doc["result"]["records"].as_array().unwrap().len(), 3);
}

#[test]
fn schema_errors_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", r#"{"layer": {"n": -2e20}}"#);
    let e = error(&run(&["zero-loss", "--config", &cfg]));
    assert_eq!(e["error"], "ConfigError");
    assert_eq!(e["key"], "layer.n");
    assert!(e["message"].as_str().unwrap().contains("must be > 0"));

    let cfg = write(dir.path(), "unknown.json", r#"{"layers": {}}"#);
    let e = error(&run(&["zero-loss", "--config", &cfg]));
    assert!(e["message"].as_str().unwrap().contains("layers"));

    let e = error(&run(&["zero-loss", "--config", "/nonexistent/config.json"]));
    assert_eq!(e["error"], "IoError");
}

#[test]
fn entangle_coherent_reports() {
    let doc = json(&run(&["entangle-coherent", "--alpha", "2", "--beta", "2", "--phi", "pi"]));
    let r = &doc["result"];
    assert!(r["entropy_bits"].as_f64().unwrap() >= 0.99);
    assert!(r["fidelity_psi_f"].as_f64().unwrap() >= 1.0 - 1e-8);
    assert!(r["tail_mass_alpha"].as_f64().unwrap() < 1e-10);

    let r = json(&run(&["entangle-coherent", "--phi", "0"]));
    assert!(r["result"]["entropy_bits"].as_f64().unwrap().abs() < 1e-10);
    let r = json(&run(&["entangle-coherent", "--alpha", "0", "--phi", "1.3"]));
    assert!(r["result"]["entropy_bits"].as_f64().unwrap().abs() < 1e-10);
}

#[test]
fn entangle_coherent_truncation_suggests_dim() {
    let e = error(&run(&["entangle-coherent", "--alpha", "3", "--dim", "8"]));
    assert_eq!(e["error"], "TruncationTooSevere");
    assert!(e["required_dim"].as_u64().unwrap() > 8);
}

#[test]
fn nemoto_munro_single_shot() {
    let doc = json(&run(&["nemoto-munro", "--shots", "1", "--seed", "5"]));
    assert_eq!(doc["result"]["samples"].as_array().unwrap().len(), 1);
    assert_eq!(doc["result"]["summary"]["shots"], 1);
    let out = run(&["nemoto-munro", "--shots", "1", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 2);
}

#[test]
fn nemoto_munro_rejects_unnormalized_qubits() {
    let e = error(&run(&["nemoto-munro", "--qubit-a", "1,1"]));
    assert_eq!(e["key"], "qubit_a");
    let e = error(&run(&["nemoto-munro", "--shots", "0"]));
    assert_eq!(e["key"], "shots");
}

#[test]
fn same_seed_same_bytes() {
    let a = run(&["nemoto-munro", "--alpha", "2.5", "--shots", "50", "--seed", "42"]);
    let b = run(&["nemoto-munro", "--alpha", "2.5", "--shots", "50", "--seed", "42"]);
    let c = run(&["nemoto-munro", "--alpha", "2.5", "--shots", "50", "--seed", "43"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn dispersion_sweep() {
    let out = run(&["dispersion", "--points", "5", "--format", "csv"]);
    assert!(out.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("omega,omega_over_omega0,re_k,im_k,re_k_perp,im_k_perp,xi,v_g_over_c,valid\n"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn bad_format_is_a_usage_error() {
    let out = run(&["fig3", "--format", "xml"]);
    assert_eq!(out.code, 2);
}
