use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn duffing(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_duffing"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn closed_form_record_has_nulls_where_undefined() {
    let dir = tempfile::tempdir().unwrap();
    let out = duffing(&["closed-form", "--resonance", "1:1", "--forcing", "0.01"], dir.path());
    assert!(out.status.success());
    let v = json(&out);
    assert!((v["omega_p"].as_f64().unwrap() - 1.5f64.sqrt()).abs() < 1e-12);
    let out = duffing(&["closed-form", "--resonance", "7:1", "--forcing", "0.45"], dir.path());
    let v = json(&out);
    assert!(v["omega_a"].is_null());
    assert!(v["phi_p"].is_number());
}

#[test]
fn file_output_writes_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = duffing(
        &[
            "slowflow", "--resonance", "1:1", "--forcing", "0.01", "--omega-min", "1.1", "--omega-max",
            "1.3", "--steps", "5", "--out", "s.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert!(text.starts_with("omega,r,phi,stable,eig_re_1,eig_im_1,eig_re_2,eig_im_2,family\n"));
    let meta: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["command"], "slowflow");
    assert_eq!(meta["parameters"]["resonance"], "1:1");
    assert_eq!(meta["oscillator"]["damping"], 0.01);
}

#[test]
fn nfrc_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = duffing(
        &[
            "nfrc", "--resonance", "1:1", "--forcing", "0.01", "--omega-min", "1.1", "--omega-max", "1.3",
            "--harmonics", "9", "--samples", "64", "--out", "n.csv", "--emit-plot", "n.gp",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("n.gp").exists());
    let out = duffing(&["verify", "--from-csv", "n.csv", "--rows", "0..2"], dir.path());
    assert!(out.status.success());
    let reports = json(&out);
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        assert_eq!(r["verdict"], "Match");
        assert_eq!(r["consistent"], true);
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| duffing(args, dir.path()).status.code();
    assert_eq!(code(&["closed-form", "--resonance", "2:4", "--forcing", "1"]), Some(2));
    assert_eq!(code(&["closed-form", "--resonance", "1:1", "--forcing", "-1"]), Some(2));
    assert_eq!(code(&["prnm-curve", "--resonance", "5:1", "--f-min", "0", "--f-max", "1"]), Some(2));
    assert_eq!(
        code(&["nfrc", "--resonance", "1:3", "--forcing", "0.1", "--omega-min", "2.5", "--omega-max", "4.5"]),
        Some(3)
    );
    let out = duffing(&["existence", "--resonance", "1:2", "--forcing", "0.8", "--out", "e.csv"], dir.path());
    assert_eq!(out.status.code(), Some(4));
    let text = std::fs::read_to_string(dir.path().join("e.csv")).unwrap();
    assert_eq!(text, "resonance,forcing,omega_inf,omega_sup\n1:2,0.8,,\n");
    assert_eq!(code(&["existence", "--resonance", "1:2", "--forcing", "1.0"]), Some(0));
}

#[test]
fn simulate_emits_time_series() {
    let dir = tempfile::tempdir().unwrap();
    let out = duffing(
        &["simulate", "--forcing", "0.01", "--omega", "1.2", "--periods", "2", "--format", "csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x,v"));
    assert_eq!(lines.count(), 2 * 200 + 1);
}

#[test]
fn figure4_writes_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = duffing(&["figure", "fig4", "--out", "f4"], dir.path());
    assert!(out.status.success());
    let report = json(&out);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    for f in ["inequality.csv", "windows.csv", "plot.gp", "meta.json"] {
        assert!(dir.path().join("f4").join(f).exists(), "{f}");
    }
}
