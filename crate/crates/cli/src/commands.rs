// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use pnd_core::codes::{
    cphase_experiment, error_transparency_check, kerr_cancel_experiment, micromotion_experiment, pi8_gate_experiment,
    theta_scaling_experiment,
};
use pnd_core::effective::{
    dephasing_rates, micromotion_period, micromotion_period_in_chi, qubit_excitation_prob, spectrum_order2,
    spectrum_order4,
};
use pnd_core::optimizer::optimize_drives;
use pnd_core::{ExperimentReport, NoiseParams, C64};
use serde::Serialize;

use crate::config::{DriveFile, Experiment, Loaded, OptimizeConfig, SimulateConfig, VerifyConfig};
use crate::custom::run_custom;
use crate::error::{CliError, CliResult};
use crate::output::OutputDir;

// ---------------------------------------------------------------------------
// optimize

pub fn optimize(loaded: &Loaded, out: &OutputDir) -> CliResult<()> {
    let cfg: OptimizeConfig = loaded.parse()?;
    let params = cfg.system.params(cfg.target.n_max);
    let result = optimize_drives(&cfg.target, &params, &cfg.optimizer)?;
    let achieved = result.achieved.energies_khz();
    let file = DriveFile {
        chi_mhz: cfg.system.chi_mhz,
        kerr_khz: cfg.system.kerr_khz,
        chi_prime_khz: cfg.system.chi_prime_khz,
        tones: result.drive.tones.clone(),
        envelope: result.drive.envelope,
        target_khz: Some(result.target_khz.clone()),
        achieved_khz: Some(achieved.clone()),
        objective: Some(result.objective),
        residual_khz: Some(result.residual_khz),
        provenance: None,
    };
    out.json("drive.json", &file)?;
    let rows: Vec<Vec<f64>> = result
        .drive
        .tones
        .iter()
        .map(|t| {
            vec![
                t.m as f64,
                result.target_khz[t.m],
                achieved[t.m],
                t.delta_f64(),
                signed_amplitude(t.omega),
            ]
        })
        .collect();
    out.csv(
        "spectrum.csv",
        &[
            "n",
            "E_target_kHz",
            "E_engineered_kHz",
            "delta_over_chi",
            "omega_over_chi",
        ],
        &rows,
    )?;
    eprintln!(
        "optimize: objective {:.6}, residual {:.4} kHz ({} of {} assignments feasible)",
        result.objective, result.residual_khz, result.feasible_assignments, result.tried_assignments
    );
    Ok(())
}

/// Real amplitudes keep their sign (the tabulated layout); complex ones
/// report their modulus.
fn signed_amplitude(omega: C64) -> f64 {
    if omega.im == 0.0 {
        omega.re
    } else {
        omega.norm()
    }
}

// ---------------------------------------------------------------------------
// verify

#[derive(Serialize)]
struct LevelReport {
    n: usize,
    target_khz: Option<f64>,
    order2_khz: f64,
    order4_khz: f64,
    residual_khz: Option<f64>,
    p_excited: f64,
    p_excited_with_kick: f64,
}

#[derive(Serialize)]
struct VerifyReport {
    chi_mhz: f64,
    t_m_us: f64,
    t_m_over_pi_per_chi: f64,
    levels: Vec<LevelReport>,
    /// `γ_{n1 n2}` in kHz without and with the initial-kick term.
    gamma_khz: Vec<Vec<f64>>,
    gamma_with_kick_khz: Vec<Vec<f64>>,
    max_residual_khz: Option<f64>,
    tolerance_khz: f64,
    pass: bool,
}

pub fn verify(loaded: &Loaded, out: &OutputDir) -> CliResult<()> {
    let cfg: VerifyConfig = loaded.parse()?;
    let drive = cfg.drive.resolve(loaded)?;
    let addressed = drive.tones.iter().map(|t| t.m).max().unwrap_or(0);
    let n_max = cfg.n_max.unwrap_or(addressed);
    let params = drive.system.params(n_max);
    let target = cfg.target_khz.clone().or(drive.target_khz);
    let e2 = spectrum_order2(&params, &drive.tones)?.energies_khz();
    let e4 = spectrum_order4(&params, &drive.tones)?.energies_khz();
    let noise = NoiseParams::from_khz(cfg.gamma_q_khz, cfg.gamma_phi_khz, 0.0);
    let plain = dephasing_rates(&drive.tones, &params, &noise, n_max, false)?;
    let kicked = dephasing_rates(&drive.tones, &params, &noise, n_max, true)?;
    let t_m = micromotion_period(&drive.tones, params.chi());

    let mut levels = Vec::new();
    let mut max_residual: Option<f64> = None;
    for n in 0..=n_max {
        let t = target.as_ref().and_then(|t| t.get(n).copied());
        let residual = t.map(|t| (e4[n] - t).abs());
        if let Some(r) = residual {
            max_residual = Some(max_residual.map_or(r, |m| m.max(r)));
        }
        levels.push(LevelReport {
            n,
            target_khz: t,
            order2_khz: e2[n],
            order4_khz: e4[n],
            residual_khz: residual,
            p_excited: qubit_excitation_prob(&drive.tones, &params, n, false)?,
            p_excited_with_kick: qubit_excitation_prob(&drive.tones, &params, n, true)?,
        });
    }
    let khz = |g: &[Vec<f64>]| g.iter().map(|row| row.iter().map(|v| v * 1e3).collect()).collect();
    let pass = max_residual.is_none_or(|r| r <= cfg.tolerance_khz);
    let report = VerifyReport {
        chi_mhz: params.chi_mhz,
        t_m_us: t_m,
        t_m_over_pi_per_chi: micromotion_period_in_chi(&drive.tones) / PI,
        levels,
        gamma_khz: khz(&plain.gamma_mhz),
        gamma_with_kick_khz: khz(&kicked.gamma_mhz),
        max_residual_khz: max_residual,
        tolerance_khz: cfg.tolerance_khz,
        pass,
    };
    out.json("verify.json", &report)?;
    let rows: Vec<Vec<f64>> = report
        .levels
        .iter()
        .map(|l| {
            vec![
                l.n as f64,
                l.target_khz.unwrap_or(f64::NAN),
                l.order2_khz,
                l.order4_khz,
                l.residual_khz.unwrap_or(f64::NAN),
                l.p_excited,
                l.p_excited_with_kick,
            ]
        })
        .collect();
    out.csv(
        "verify.csv",
        &[
            "n",
            "E_target_kHz",
            "E_order2_kHz",
            "E_order4_kHz",
            "residual_kHz",
            "p_e",
            "p_e_with_kick",
        ],
        &rows,
    )?;
    let mut gamma_rows = Vec::new();
    for n1 in 0..=n_max {
        for n2 in 0..=n_max {
            gamma_rows.push(vec![
                n1 as f64,
                n2 as f64,
                report.gamma_khz[n1][n2],
                report.gamma_with_kick_khz[n1][n2],
            ]);
        }
    }
    out.csv(
        "gamma.csv",
        &["n1", "n2", "gamma_kHz", "gamma_with_kick_kHz"],
        &gamma_rows,
    )?;
    eprintln!(
        "verify: T_M = {t_m:.6} us, max residual {}",
        max_residual.map_or("n/a".into(), |r| format!("{r:.4} kHz"))
    );
    match max_residual {
        Some(r) if !pass => Err(CliError::Residual {
            residual_khz: r,
            tolerance_khz: cfg.tolerance_khz,
        }),
        _ => Ok(()),
    }
}

// ---------------------------------------------------------------------------
// simulate

pub fn simulate(loaded: &Loaded, out: &OutputDir) -> CliResult<()> {
    let cfg: SimulateConfig = loaded.parse()?;
    let mut report = match cfg.experiment()? {
        Experiment::Pi8(s) => pi8_gate_experiment(&s)?,
        Experiment::ThetaScan(s) => theta_scaling_experiment(&s)?,
        Experiment::TgScan(s) => {
            let mut r = theta_scaling_experiment(&s)?;
            r.name = "tg_scan".into();
            r
        }
        Experiment::KerrCancel(s) => kerr_cancel_experiment(&s)?,
        Experiment::Cphase(s) => cphase_experiment(&s)?,
        Experiment::Micromotion(s) => micromotion_experiment(&s)?,
        Experiment::ErrorTransparency(s) => error_transparency_check(&s)?,
        Experiment::Custom(s) => run_custom(&s, loaded)?,
    };
    report.config_hash = Some(out.provenance().config_sha256.clone());
    out.json("report.json", &report)?;
    write_series(&report, out)?;
    write_scans(&report, out)?;
    for (k, snap) in report.wigner.iter().enumerate() {
        let mut rows = Vec::new();
        for (i, x) in snap.map.xs.iter().enumerate() {
            for (j, p) in snap.map.ps.iter().enumerate() {
                rows.push(vec![*x, *p, snap.map.values[i][j]]);
            }
        }
        out.csv(&format!("wigner_t{k}.csv"), &["x", "p", "W"], &rows)?;
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let headline = [
        "final_fidelity",
        "gate_fidelity",
        "reference_fidelity",
        "theta_fit_slope",
    ]
    .iter()
    .find_map(|k| report.scalar(k).map(|v| format!("{k} = {v:.6}")));
    eprintln!(
        "simulate {}: {}",
        report.name,
        headline.unwrap_or_else(|| "done".into())
    );
    Ok(())
}

fn write_series(report: &ExperimentReport, out: &OutputDir) -> CliResult<()> {
    if report.series.is_empty() {
        return Ok(());
    }
    let with_lambda = report.series.iter().all(|p| p.lambda.is_some());
    let rows: Vec<Vec<f64>> = report
        .series
        .iter()
        .map(|p| {
            let mut row = vec![p.time_us, p.fidelity];
            if with_lambda {
                row.push(p.lambda.unwrap_or(0.0));
            }
            row
        })
        .collect();
    let header: &[&str] = if with_lambda {
        &["time_us", "fidelity", "lambda"]
    } else {
        &["time_us", "fidelity"]
    };
    out.csv("series.csv", header, &rows)?;
    Ok(())
}

/// Indexed scalars `prefix_i` become one table row per `i`.
fn indexed_rows(report: &ExperimentReport, keys: &[&str]) -> Vec<Vec<f64>> {
    (0..)
        .map_while(|i| {
            keys.iter()
                .map(|k| report.scalar(&format!("{k}_{i}")))
                .collect::<Option<Vec<f64>>>()
        })
        .collect()
}

fn write_scans(report: &ExperimentReport, out: &OutputDir) -> CliResult<()> {
    let theta = indexed_rows(
        report,
        &[
            "theta",
            "theta_noiseless_fidelity",
            "theta_infidelity",
            "theta_relaxation_infidelity",
        ],
    );
    if !theta.is_empty() {
        out.csv(
            "theta_scan.csv",
            &["theta", "noiseless_fidelity", "infidelity", "relaxation_infidelity"],
            &theta,
        )?;
    }
    let tg = indexed_rows(report, &["tg_multiplier", "tg_noiseless_fidelity", "tg_infidelity"]);
    if !tg.is_empty() {
        out.csv(
            "tg_scan.csv",
            &["tg_multiplier", "noiseless_fidelity", "infidelity"],
            &tg,
        )?;
    }
    let kappa: Vec<Vec<f64>> = (0..)
        .map_while(|i| {
            Some(vec![
                report.scalar(&format!("kappa_{i}_khz"))?,
                report.scalar(&format!("fidelity_kappa_{i}"))?,
                report.scalar(&format!("fidelity_qubit_noise_kappa_{i}"))?,
            ])
        })
        .collect();
    if !kappa.is_empty() {
        out.csv(
            "kappa_scan.csv",
            &["kappa_kHz", "fidelity", "fidelity_qubit_noise"],
            &kappa,
        )?;
    }
    let injections = indexed_rows(report, &["injection_time", "injected_fidelity"]);
    if !injections.is_empty() {
        out.csv("injections.csv", &["time_us", "fidelity"], &injections)?;
    }
    Ok(())
}
