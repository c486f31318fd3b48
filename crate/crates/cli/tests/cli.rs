// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn pnd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pnd"))
        .args(args)
        .output()
        .expect("spawn pnd")
}

struct Run {
    dir: TempDir,
}

impl Run {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn config(&self, name: &str, body: &Value) -> PathBuf {
        let p = self.path(name);
        fs::write(&p, serde_json::to_string_pretty(body).unwrap()).unwrap();
        p
    }

    fn exec(&self, cmd: &str, config: &Path, out: &str, extra: &[&str]) -> (i32, String) {
        let out = self.path(out);
        let mut args = vec![
            cmd,
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ];
        args.extend_from_slice(extra);
        let o = pnd(&args);
        (
            o.status.code().unwrap_or(-1),
            String::from_utf8_lossy(&o.stderr).into_owned(),
        )
    }

    fn read(&self, rel: &str) -> String {
        fs::read_to_string(self.path(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
    }

    fn json(&self, rel: &str) -> Value {
        serde_json::from_str(&self.read(rel)).unwrap()
    }

    /// Data rows of a CSV file, keyed by header name.
    fn csv(&self, rel: &str) -> Vec<std::collections::HashMap<String, f64>> {
        let text = self.read(rel);
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# pnd "));
        let header: Vec<String> = lines.next().unwrap().split(',').map(str::to_string).collect();
        lines
            .map(|l| {
                header
                    .iter()
                    .cloned()
                    .zip(l.split(',').map(|v| v.parse::<f64>().unwrap()))
                    .collect()
            })
            .collect()
    }
}

fn three_photon() -> Value {
    json!({"system": {"chi_mhz": 2.56}, "target": {"kind": "three_photon", "k3_khz": 0.5, "n_max": 6}})
}

#[test]
fn optimize_three_photon_matches_its_row() {
    let r = Run::new();
    let cfg = r.config("opt.json", &three_photon());
    let (code, err) = r.exec("optimize", &cfg, "out", &[]);
    assert_eq!(code, 0, "{err}");
    let rows = r.csv("out/spectrum.csv");
    assert_eq!(rows.len(), 7);
    let target = [0.0, 0.0, 0.0, 3.0, 12.0, 30.0, 60.0];
    for (n, row) in rows.iter().enumerate() {
        assert_eq!(row["n"], n as f64);
        assert_eq!(row["E_target_kHz"], target[n]);
        assert!((row["E_engineered_kHz"] - target[n]).abs() <= 0.5, "n = {n}: {row:?}");
        assert!([0.5, 0.25, -0.5, -0.25].contains(&row["delta_over_chi"]));
        assert!(row["omega_over_chi"].abs() <= 0.2);
    }
    let drive = r.json("out/drive.json");
    assert_eq!(drive["chi_MHz"], 2.56);
    assert_eq!(drive["tones"].as_array().unwrap().len(), 7);
    for key in ["m", "omega_re_over_chi", "omega_im_over_chi", "delta_num", "delta_den"] {
        assert!(drive["tones"][0].get(key).is_some(), "missing {key}");
    }
    assert!(drive.get("envelope").is_some());
    assert!(drive["residual_kHz"].as_f64().unwrap() <= 0.5);
    assert_eq!(drive["provenance"]["tool"], "pnd");
}

#[test]
fn zero_target_gives_silent_tones() {
    let r = Run::new();
    let cfg = r.config(
        "zero.json",
        &json!({"system": {"chi_mhz": 2.56}, "target": {"kind": "custom", "energies_khz": [0, 0, 0, 0], "n_max": 3}}),
    );
    let (code, err) = r.exec("optimize", &cfg, "out", &[]);
    assert_eq!(code, 0, "{err}");
    let drive = r.json("out/drive.json");
    for t in drive["tones"].as_array().unwrap() {
        assert_eq!(t["omega_re_over_chi"], 0.0);
        assert_eq!(t["omega_im_over_chi"], 0.0);
    }
}

#[test]
fn target_above_the_bound_exits_2() {
    let r = Run::new();
    let cfg = r.config(
        "big.json",
        &json!({"system": {"chi_mhz": 2.56}, "target": {"kind": "parity", "p_khz": 500, "n_max": 4}}),
    );
    let (code, err) = r.exec("optimize", &cfg, "out", &[]);
    assert_eq!(code, 2);
    assert!(err.contains("chi/8"), "{err}");
}

#[test]
fn verify_table_v_drive_file() {
    let r = Run::new();
    // Round-trip the published drive through a drive file.
    let t = pnd_core::tables::table("V").unwrap();
    let file = json!({
        "chi_MHz": t.chi_mhz,
        "tones": t.tones(),
        "envelope": pnd_core::Envelope::abrupt(0.0, 3.125),
        "target_kHz": t.target_khz,
    });
    r.config("drive_v.json", &file);
    let cfg = r.config(
        "verify.json",
        &json!({"drive": {"source": "file", "path": "drive_v.json"}}),
    );
    let (code, err) = r.exec("verify", &cfg, "out", &[]);
    assert_eq!(code, 0, "{err}");
    let report = r.json("out/verify.json");
    let chi = 2.0 * std::f64::consts::PI * t.chi_mhz;
    let t_m = report["t_m_us"].as_f64().unwrap();
    assert!((t_m - 8.0 * std::f64::consts::PI / chi).abs() < 1e-12);
    assert!(report["max_residual_khz"].as_f64().unwrap() <= 0.5);
    assert_eq!(report["pass"], true);
    let levels = r.csv("out/verify.csv");
    assert_eq!(levels.len(), 7);
    for l in &levels {
        assert!(l["residual_kHz"] <= 0.5);
        assert!(l["p_e"] > 0.0 && l["p_e"] < 0.2);
    }
    // Symmetric table, zero on the diagonal.
    let gamma = r.csv("out/gamma.csv");
    assert_eq!(gamma.len(), 49);
    for g in &gamma {
        assert!(g["gamma_kHz"] >= 0.0);
        if g["n1"] == g["n2"] {
            assert_eq!(g["gamma_kHz"], 0.0);
        }
    }
}

#[test]
fn verify_table_vii_reproduces_its_engineered_row() {
    let r = Run::new();
    let cfg = r.config("verify.json", &json!({"drive": {"source": "table", "name": "VII"}}));
    let (code, err) = r.exec("verify", &cfg, "out", &[]);
    assert_eq!(code, 0, "{err}");
    let t = pnd_core::tables::table("VII").unwrap();
    let rows = r.csv("out/verify.csv");
    for (n, row) in rows.iter().enumerate() {
        assert!((row["E_order4_kHz"] - t.target_khz[n]).abs() <= 0.5, "target n = {n}");
    }
    for (n, row) in rows.iter().enumerate() {
        let e = t.engineered_khz[n];
        assert!(
            (row["E_order4_kHz"] - e).abs() <= 0.5,
            "engineered n = {n}: {} vs {e}",
            row["E_order4_kHz"]
        );
    }
}

#[test]
fn verify_missed_target_exits_4_after_writing() {
    let r = Run::new();
    let cfg = r.config(
        "verify.json",
        &json!({"drive": {"source": "table", "name": "V"}, "tolerance_khz": 0.001}),
    );
    let (code, err) = r.exec("verify", &cfg, "out", &[]);
    assert_eq!(code, 4, "{err}");
    assert_eq!(r.json("out/verify.json")["pass"], false);
}

#[test]
fn resonant_collision_exits_3() {
    let r = Run::new();
    let tone = json!({"m": 1, "omega_re_over_chi": 0.05, "omega_im_over_chi": 0.0, "delta_num": 1, "delta_den": 1});
    let cfg = r.config(
        "verify.json",
        &json!({"drive": {"source": "inline", "system": {"chi_mhz": 2.56}, "tones": [tone]}}),
    );
    let (code, err) = r.exec("verify", &cfg, "out", &[]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("resonance"), "{err}");
}

#[test]
fn configuration_errors_exit_1() {
    let r = Run::new();
    let unknown = r.config("a.json", &json!({"experiment": "pi8", "bogus": 1}));
    assert_eq!(r.exec("simulate", &unknown, "o1", &[]).0, 1);
    let nested = r.config("b.json", &json!({"experiment": "pi8", "settings": {"periodz": 2}}));
    assert_eq!(r.exec("simulate", &nested, "o2", &[]).0, 1);
    let missing = r.path("absent.json");
    assert_eq!(r.exec("verify", &missing, "o3", &[]).0, 1);
    let table = r.config("c.json", &json!({"drive": {"source": "table", "name": "XII"}}));
    let (code, err) = r.exec("verify", &table, "o4", &[]);
    assert_eq!(code, 1);
    assert!(err.contains("XII"));
}

#[test]
fn pi8_smooth_gate_fidelity() {
    let r = Run::new();
    let cfg = r.config(
        "pi8.json",
        &json!({"experiment": "pi8", "settings": {"shape": "smooth"}}),
    );
    let (code, err) = r.exec("simulate", &cfg, "out", &[]);
    assert_eq!(code, 0, "{err}");
    let report = r.json("out/report.json");
    let f = report["scalars"]["final_fidelity"].as_f64().unwrap();
    assert!((f - 0.99934).abs() < 5e-5, "{f}");
    assert_eq!(report["config_hash"], report["provenance"]["config_sha256"]);
    let series = r.csv("out/series.csv");
    assert!(series.len() > 10);
    assert_eq!(series[0]["time_us"], 0.0);
    assert!(series.iter().all(|p| p.contains_key("lambda")));
    assert!((series.last().unwrap()["fidelity"] - f).abs() < 1e-8);
}

#[test]
fn kerr_cancel_keeps_the_cat_for_100_us() {
    let r = Run::new();
    let cfg = r.config(
        "kerr.json",
        &json!({"experiment": "kerr_cancel", "settings": {
            "duration_us": 100.0,
            "drive_off": false,
            "wigner_times_us": [0.0, 100.0],
            "wigner_grid": {"x_range": [-3.0, 3.0], "p_range": [-3.0, 3.0], "resolution": 7}
        }}),
    );
    let (code, err) = r.exec("simulate", &cfg, "out", &[]);
    assert_eq!(code, 0, "{err}");
    let f = r.json("out/report.json")["scalars"]["final_fidelity"].as_f64().unwrap();
    assert!((f - 0.992).abs() < 1e-3, "{f}");
    for k in 0..2 {
        let grid = r.csv(&format!("out/wigner_t{k}.csv"));
        assert_eq!(grid.len(), 49);
        assert!(grid
            .iter()
            .all(|g| g.contains_key("x") && g.contains_key("p") && g.contains_key("W")));
    }
}

#[test]
fn cphase_fidelity() {
    let r = Run::new();
    let cfg = r.config("cphase.json", &json!({"experiment": "cphase"}));
    let (code, err) = r.exec("simulate", &cfg, "out", &[]);
    assert_eq!(code, 0, "{err}");
    let f = r.json("out/report.json")["scalars"]["final_fidelity"].as_f64().unwrap();
    assert!(f > 0.998, "{f}");
}

#[test]
fn custom_run_with_recovery() {
    let r = Run::new();
    let cfg = r.config(
        "custom.json",
        &json!({"experiment": "custom", "settings": {
            "drive": {"source": "table", "name": "V"},
            "recovery": true,
            "records": 16
        }}),
    );
    let (code, err) = r.exec("simulate", &cfg, "out", &[]);
    assert_eq!(code, 0, "{err}");
    let s = &r.json("out/report.json")["scalars"];
    assert!(s["final_fidelity"].as_f64().unwrap() > 0.999);
    assert!(s["recovered_fidelity"].as_f64().unwrap() > 0.999);
    assert_eq!(r.csv("out/series.csv").len(), 17);
}

#[test]
fn coarse_step_exits_4() {
    let r = Run::new();
    let cfg = r.config(
        "custom.json",
        &json!({"experiment": "custom", "settings": {
            "drive": {"source": "table", "name": "V"},
            "initial": {"kind": "fock", "n": 2},
            "steps_per_period": 100
        }}),
    );
    let (code, err) = r.exec("simulate", &cfg, "out", &[]);
    assert_eq!(code, 4, "{err}");
    assert!(err.contains("stability"), "{err}");
}

#[test]
fn outputs_are_byte_reproducible_across_thread_counts() {
    let r = Run::new();
    let opt = r.config("opt.json", &three_photon());
    assert_eq!(r.exec("optimize", &opt, "a", &["--threads", "1"]).0, 0);
    assert_eq!(r.exec("optimize", &opt, "b", &["--threads", "4"]).0, 0);
    for f in ["drive.json", "spectrum.csv"] {
        assert_eq!(r.read(&format!("a/{f}")), r.read(&format!("b/{f}")), "{f}");
    }
    let scan = r.config(
        "scan.json",
        &json!({"experiment": "pi8", "settings": {"kappa_scan_khz": [0.01, 0.1], "records": 20}}),
    );
    assert_eq!(r.exec("simulate", &scan, "c", &["--threads", "1"]).0, 0);
    assert_eq!(r.exec("simulate", &scan, "d", &["--threads", "3"]).0, 0);
    for f in ["report.json", "series.csv", "kappa_scan.csv"] {
        assert_eq!(r.read(&format!("c/{f}")), r.read(&format!("d/{f}")), "{f}");
    }
}

#[test]
fn seed_flag_changes_the_recorded_configuration() {
    let r = Run::new();
    let opt = r.config("opt.json", &three_photon());
    assert_eq!(r.exec("optimize", &opt, "a", &[]).0, 0);
    assert_eq!(r.exec("optimize", &opt, "b", &["--seed", "99"]).0, 0);
    let a = r.json("a/drive.json");
    let b = r.json("b/drive.json");
    assert_ne!(a["provenance"]["config_sha256"], b["provenance"]["config_sha256"]);
    assert!(b["residual_kHz"].as_f64().unwrap() <= 0.5);
}

#[test]
fn csv_uses_nine_significant_digits() {
    let r = Run::new();
    let cfg = r.config("verify.json", &json!({"drive": {"source": "table", "name": "I"}}));
    assert_eq!(r.exec("verify", &cfg, "out", &[]).0, 0);
    let text = r.read("out/verify.csv");
    let hash = r.json("out/verify.json")["provenance"]["config_sha256"]
        .as_str()
        .unwrap()
        .to_string();
    assert!(text.lines().next().unwrap().ends_with(&format!("config_sha256={hash}")));
    for line in text.lines().skip(2) {
        for cell in line.split(',') {
            let mantissa = cell.split('e').next().unwrap();
            let digits = mantissa.chars().filter(char::is_ascii_digit).collect::<String>();
            let significant = digits.trim_start_matches('0');
            assert!(significant.len() <= 9, "{cell}");
            assert!(!cell.contains(' '));
        }
    }
}
