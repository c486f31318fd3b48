// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{ExperimentReport, WignerSnapshot};
use super::snap::{calibrate_snap, run_snap, time_average, SnapOptions};
use super::LogicalCode;
use crate::dynamics::{
    kitten_recovery, propagate_lindblad_observed, propagate_state, rotate_operator, to_lab_frame, FidelityTrace, Jump,
    JumpSet, OpenSystem, PropagationConfig,
};
use crate::effective::{micromotion_period, spectrum_order4, two_cavity_spectrum};
use crate::error::{PndError, Result};
use crate::models::{
    DiagonalHamiltonian, DriveSpec, DriveTone, Envelope, NoiseParams, RelaxationModel, SystemParams, TwoCavityParams,
};
use crate::quantum::{
    cat_state, root_state_fidelity, wigner, CatParity, CompositeOperator, DensityMatrix, HilbertDims, QuantumState,
    WignerGrid,
};
use crate::tables::{self, PublishedTable};
use crate::units::khz_to_angular;
use crate::{CVector, C64};

/// Drive envelope used for a gate of duration `T_G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateShape {
    Abrupt,
    /// `√2 sin(πt/T_G)` for gates, sinusoidal ramps of width `T_s` for
    /// long Kerr-cancellation runs.
    Smooth,
}

impl GateShape {
    fn gate_envelope(self, t_gate: f64) -> Envelope {
        match self {
            GateShape::Abrupt => Envelope::abrupt(0.0, t_gate),
            GateShape::Smooth => Envelope::sine_gate(t_gate),
        }
    }
}

fn lookup(name: &str) -> Result<&'static PublishedTable> {
    tables::table(name).ok_or_else(|| PndError::InvalidParameter(format!("unknown table `{name}`")))
}

fn padded(values: &[f64], len: usize) -> Vec<f64> {
    (0..len).map(|n| values.get(n).copied().unwrap_or(0.0)).collect()
}

fn scaled_tones(tones: &[DriveTone], scale: f64) -> Vec<DriveTone> {
    tones
        .iter()
        .map(|t| DriveTone {
            omega: t.omega * scale,
            ..*t
        })
        .collect()
}

fn kitten_plus(n_cut: usize) -> Result<QuantumState> {
    LogicalCode::kitten(n_cut)?.plus("a")
}

/// Root fidelity after the kitten recovery on every listed cavity.
fn recovered_fidelity(trace: &FidelityTrace, labels: &[&str]) -> Result<f64> {
    let mut rho = trace.final_cavity.clone();
    for l in labels {
        rho = kitten_recovery(&rho, l)?;
    }
    root_state_fidelity(&rho, &trace.final_target)
}

fn key(value: f64) -> String {
    format!("{value}")
}

// ---------------------------------------------------------------------------
// π/8 gate

/// How the π/8 rotation of the kitten code is implemented.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Pi8Scheme {
    /// Engineered spectrum of table V.
    Pnd,
    /// Calibrated SNAP comb.
    Snap,
    /// `K_4 (a†a)^4` for the gate time; `k4` in rad/µs, defaulting to
    /// `−π/(64 T_G)`.
    QuarticKerr {
        #[serde(default)]
        k4: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Pi8Settings {
    pub scheme: Pi8Scheme,
    pub shape: GateShape,
    pub table: String,
    pub n_cut: usize,
    /// Gate time in micromotion periods.
    pub periods: f64,
    pub gamma_q_khz: f64,
    pub gamma_phi_khz: f64,
    pub relaxation: RelaxationModel,
    pub kappa_scan_khz: Vec<f64>,
    pub steps_per_period: usize,
    pub records: usize,
    pub snap: SnapOptions,
}

impl Default for Pi8Settings {
    fn default() -> Self {
        Self {
            scheme: Pi8Scheme::Pnd,
            shape: GateShape::Abrupt,
            table: "V".into(),
            n_cut: 6,
            periods: 2.0,
            gamma_q_khz: 3.0,
            gamma_phi_khz: 0.0,
            relaxation: RelaxationModel::default(),
            kappa_scan_khz: vec![0.0, 0.005, 0.01, 0.02, 0.05, 0.1],
            steps_per_period: 2000,
            records: 200,
            snap: SnapOptions::default(),
        }
    }
}

/// Single-cavity `K_4 n^4` evolution with photon loss, as a fidelity trace
/// against `e^{−iE_T t}ψ0`.
fn quartic_kerr_trace(
    k4: f64,
    n_cut: usize,
    kappa_mhz: f64,
    psi0: &QuantumState,
    target: &[f64],
    config: &PropagationConfig,
) -> Result<FidelityTrace> {
    let dims = HilbertDims::cavity("a", n_cut);
    let diag: Vec<f64> = (0..=n_cut).map(|n| k4 * (n as f64).powi(4)).collect();
    let h = DiagonalHamiltonian::new(dims, diag)?;
    let mut jumps = JumpSet::empty();
    if kappa_mhz > 0.0 {
        jumps.push(Jump::new(
            CompositeOperator::annihilation_labeled("a", n_cut)?,
            kappa_mhz,
        ));
    }
    let c0 = psi0.amplitudes().clone();
    let mut times = Vec::new();
    let mut fidelity = Vec::new();
    let mut last = None;
    propagate_lindblad_observed(&h, &psi0.to_density(), &jumps, config, |t, rho| {
        let v = CVector::from_fn(c0.len(), |i, _| c0[i] * C64::from_polar(1.0, -target[i] * t));
        let psi_t = QuantumState::new(psi0.dims().clone(), v)?;
        times.push(t);
        fidelity.push(root_state_fidelity(rho, &psi_t)?);
        last = Some((rho.clone(), psi_t));
        Ok(())
    })?;
    let (final_cavity, final_target) = last.ok_or_else(|| PndError::InvalidParameter("no record times".into()))?;
    let count = times.len();
    Ok(FidelityTrace {
        times,
        fidelity,
        lambda: vec![0.0; count],
        excited: vec![0.0; count],
        final_cavity,
        final_target,
    })
}

/// π/8 gate on `(|0_k⟩ + |1_k⟩)/√2` with a κ scan, with and without ancilla
/// noise. Recovered fidelities apply the kitten recovery after the gate.
pub fn pi8_gate_experiment(settings: &Pi8Settings) -> Result<ExperimentReport> {
    let table = lookup(&settings.table)?;
    let params = table.system_params(settings.n_cut);
    let tones = table.tones();
    let t_m = micromotion_period(&tones, params.chi());
    let t_gate = settings.periods * t_m;
    let steps = settings.steps_per_period.max(1) as f64;
    let config = PropagationConfig::new(0.0, t_gate, t_m / steps).with_uniform_records(settings.records);
    let psi0 = kitten_plus(settings.n_cut)?;
    let target_khz = padded(table.target_khz, settings.n_cut + 1);
    let target: Vec<f64> = target_khz.iter().map(|e| khz_to_angular(*e)).collect();

    let snap_gate = match settings.scheme {
        Pi8Scheme::Snap => {
            let phases: BTreeMap<usize, f64> = (0..=4).map(|n| (n, -wrap_phase(target[n] * t_gate))).collect();
            let mut opts = settings.snap;
            opts.records = settings.records;
            Some((calibrate_snap(&phases, t_gate, &params, &opts)?, opts))
        }
        _ => None,
    };
    let k4 = match settings.scheme {
        Pi8Scheme::QuarticKerr { k4 } => Some(k4.unwrap_or(-PI / (64.0 * t_gate))),
        _ => None,
    };

    let run = |kappa_khz: f64, qubit_noise: bool| -> Result<FidelityTrace> {
        let (gq, gphi) = if qubit_noise {
            (settings.gamma_q_khz, settings.gamma_phi_khz)
        } else {
            (0.0, 0.0)
        };
        let noise = NoiseParams::from_khz(gq, gphi, kappa_khz).with_relaxation(settings.relaxation);
        match &settings.scheme {
            Pi8Scheme::Pnd => {
                let drive = table.drive(settings.shape.gate_envelope(t_gate));
                OpenSystem::single_cavity(&params, &drive, &noise)?.run(&psi0, &target, &config)
            }
            Pi8Scheme::Snap => {
                let (gate, opts) = snap_gate.as_ref().expect("calibrated above");
                Ok(run_snap(gate, &params, &noise, &psi0, opts)?.trace)
            }
            Pi8Scheme::QuarticKerr { .. } => quartic_kerr_trace(
                k4.expect("set above"),
                settings.n_cut,
                noise.kappa_a_mhz,
                &psi0,
                &target,
                &config,
            ),
        }
    };

    let mut kappas = vec![0.0];
    for k in &settings.kappa_scan_khz {
        if *k < 0.0 {
            return Err(PndError::InvalidParameter(format!("negative kappa {k} kHz")));
        }
        if !kappas.contains(k) {
            kappas.push(*k);
        }
    }
    let jobs: Vec<(f64, bool)> = kappas.iter().flat_map(|&k| [(k, false), (k, true)]).collect();
    let traces: Vec<FidelityTrace> = jobs.par_iter().map(|&(k, q)| run(k, q)).collect::<Result<Vec<_>>>()?;
    let find = |k: f64, q: bool| {
        let i = jobs.iter().position(|j| *j == (k, q)).expect("job present");
        &traces[i]
    };

    let mut report = ExperimentReport::new("pi8", settings)?;
    report.set("t_gate_us", t_gate);
    report.set("t_m_us", t_m);
    let clean = find(0.0, false);
    let noisy = find(0.0, true);
    report.set("gate_fidelity", clean.final_fidelity());
    report.set("final_fidelity", clean.final_fidelity());
    report.set("gate_fidelity_qubit_noise", noisy.final_fidelity());
    report.set("added_infidelity", clean.final_fidelity() - noisy.final_fidelity());
    report.set("recovered_fidelity", recovered_fidelity(clean, &["a"])?);
    report.set("mean_excitation", time_average(&clean.times, &clean.excited));
    if let Some(k4) = k4 {
        report.set("k4_rad_per_us", k4);
    }
    if let Some((gate, _)) = &snap_gate {
        report.set("snap_max_phase_error", gate.max_phase_error());
    }
    for (i, k) in settings.kappa_scan_khz.iter().enumerate() {
        report.set(format!("kappa_{i}_khz"), *k);
        report.set(
            format!("fidelity_kappa_{i}"),
            recovered_fidelity(find(*k, false), &["a"])?,
        );
        report.set(
            format!("fidelity_qubit_noise_kappa_{i}"),
            recovered_fidelity(find(*k, true), &["a"])?,
        );
    }
    report.set_series(clean, true);
    report.validate()?;
    Ok(report)
}

fn wrap_phase(p: f64) -> f64 {
    C64::from_polar(1.0, p).arg()
}

// ---------------------------------------------------------------------------
// θ and T_G scans

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThetaScanSettings {
    pub table: String,
    pub n_cut: usize,
    pub shape: GateShape,
    /// Rotation angles; `θ = π/4` corresponds to a gate of two micromotion
    /// periods with the table's drive.
    pub thetas: Vec<f64>,
    /// Gate-time multiples for the fixed-angle scan.
    pub tg_multipliers: Vec<f64>,
    pub tg_theta: f64,
    pub gamma_q_khz: f64,
    pub gamma_phi_khz: f64,
    pub relaxation: RelaxationModel,
    pub steps_per_period: usize,
}

impl Default for ThetaScanSettings {
    fn default() -> Self {
        Self {
            table: "V".into(),
            n_cut: 6,
            shape: GateShape::Smooth,
            thetas: vec![PI / 4.0, PI / 2.0, PI, 1.5 * PI, 2.0 * PI],
            tg_multipliers: vec![1.0, 2.0, 4.0],
            tg_theta: PI / 4.0,
            gamma_q_khz: 3.0,
            gamma_phi_khz: 3.0,
            relaxation: RelaxationModel::default(),
            steps_per_period: 2000,
        }
    }
}

/// Fidelities of one gate: (noiseless, full noise, relaxation only).
fn gate_fidelities(
    table: &PublishedTable,
    params: &SystemParams,
    t_gate: f64,
    amp_scale: f64,
    settings: &ThetaScanSettings,
    step: f64,
) -> Result<[f64; 3]> {
    let psi0 = kitten_plus(settings.n_cut)?;
    let tones = scaled_tones(&table.tones(), amp_scale);
    let drive = DriveSpec::new(tones, settings.shape.gate_envelope(t_gate)).on(table.channel);
    let target: Vec<f64> = padded(table.target_khz, settings.n_cut + 1)
        .iter()
        .map(|e| khz_to_angular(e * amp_scale * amp_scale))
        .collect();
    let config = PropagationConfig::new(0.0, t_gate, step);
    let noises = [
        NoiseParams::none(),
        NoiseParams::from_khz(settings.gamma_q_khz, settings.gamma_phi_khz, 0.0).with_relaxation(settings.relaxation),
        NoiseParams::from_khz(settings.gamma_q_khz, 0.0, 0.0).with_relaxation(settings.relaxation),
    ];
    let f: Vec<f64> = noises
        .par_iter()
        .map(|noise| {
            OpenSystem::single_cavity(params, &drive, noise)?
                .run(&psi0, &target, &config)
                .map(|t| t.final_fidelity())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok([f[0], f[1], f[2]])
}

/// Ancilla-induced infidelity of the `R_θ` gate versus θ (gate time growing
/// with θ) and versus gate time at fixed θ (amplitudes scaled so the angle is
/// unchanged).
pub fn theta_scaling_experiment(settings: &ThetaScanSettings) -> Result<ExperimentReport> {
    let table = lookup(&settings.table)?;
    let params = table.system_params(settings.n_cut);
    let t_m = micromotion_period(&table.tones(), params.chi());
    let t_star = 2.0 * t_m;
    let step = t_m / settings.steps_per_period.max(1) as f64;
    if settings
        .thetas
        .iter()
        .chain(&settings.tg_multipliers)
        .any(|x| !(*x > 0.0))
    {
        return Err(PndError::InvalidParameter(
            "angles and gate-time multipliers must be positive".into(),
        ));
    }
    let theta_runs: Vec<[f64; 3]> = settings
        .thetas
        .par_iter()
        .map(|th| gate_fidelities(table, &params, 4.0 * th / PI * t_star, 1.0, settings, step))
        .collect::<Result<Vec<_>>>()?;
    let base = 4.0 * settings.tg_theta / PI * t_star;
    let tg_runs: Vec<[f64; 3]> = settings
        .tg_multipliers
        .par_iter()
        .map(|m| gate_fidelities(table, &params, m * base, (1.0 / m).sqrt(), settings, step))
        .collect::<Result<Vec<_>>>()?;

    let mut report = ExperimentReport::new("theta_scan", settings)?;
    report.set("t_m_us", t_m);
    let infid: Vec<f64> = theta_runs.iter().map(|f| f[0] - f[1]).collect();
    for (i, (th, f)) in settings.thetas.iter().zip(&theta_runs).enumerate() {
        report.set(format!("theta_{i}"), *th);
        report.set(format!("theta_noiseless_fidelity_{i}"), f[0]);
        report.set(format!("theta_infidelity_{i}"), f[0] - f[1]);
        report.set(format!("theta_relaxation_infidelity_{i}"), f[0] - f[2]);
    }
    if settings.thetas.len() >= 2 {
        let (slope, intercept) = linear_fit(&settings.thetas, &infid);
        let max = infid.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let resid = settings
            .thetas
            .iter()
            .zip(&infid)
            .map(|(x, y)| (y - slope * x - intercept).abs())
            .fold(0.0, f64::max);
        report.set("theta_fit_slope", slope);
        report.set("theta_fit_intercept", intercept);
        report.set(
            "theta_fit_max_residual_ratio",
            if max > 0.0 { resid / max } else { 0.0 },
        );
    }
    let tg_infid: Vec<f64> = tg_runs.iter().map(|f| f[0] - f[1]).collect();
    for (i, (m, f)) in settings.tg_multipliers.iter().zip(&tg_runs).enumerate() {
        report.set(format!("tg_multiplier_{i}"), *m);
        report.set(format!("tg_noiseless_fidelity_{i}"), f[0]);
        report.set(format!("tg_infidelity_{i}"), f[0] - f[1]);
    }
    if !tg_infid.is_empty() {
        let mean = tg_infid.iter().sum::<f64>() / tg_infid.len() as f64;
        let dev = tg_infid.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
        report.set(
            "tg_max_deviation_ratio",
            if mean != 0.0 { dev / mean.abs() } else { 0.0 },
        );
    }
    report.validate()?;
    Ok(report)
}

/// Least-squares line `y = a x + b`.
fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

// ---------------------------------------------------------------------------
// Kerr cancellation

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KerrCancelSettings {
    pub table: String,
    pub n_cut: usize,
    pub alpha: f64,
    pub duration_us: f64,
    /// `Smooth` ramps the drive up and down over `3 t_s_us`.
    pub shape: GateShape,
    pub t_s_us: f64,
    pub gamma_q_khz: f64,
    pub gamma_phi_khz: f64,
    pub relaxation: RelaxationModel,
    pub kappa_khz: f64,
    pub record_step_us: f64,
    pub steps_per_period: usize,
    pub wigner_times_us: Vec<f64>,
    pub wigner_grid: WignerGrid,
    /// Also run the bare, undriven evolution.
    pub drive_off: bool,
}

impl Default for KerrCancelSettings {
    fn default() -> Self {
        Self {
            table: "VII".into(),
            n_cut: 6,
            alpha: std::f64::consts::SQRT_2,
            duration_us: 100.0,
            shape: GateShape::Abrupt,
            t_s_us: 2.5,
            gamma_q_khz: 0.0,
            gamma_phi_khz: 0.0,
            relaxation: RelaxationModel::default(),
            kappa_khz: 0.0,
            record_step_us: 0.25,
            steps_per_period: 2000,
            wigner_times_us: Vec::new(),
            wigner_grid: WignerGrid::default(),
            drive_off: true,
        }
    }
}

/// Preserves an even cat under the Kerr-cancelling drive; the target is the
/// initial cat itself in the frame rotating at the bare cavity frequency.
pub fn kerr_cancel_experiment(settings: &KerrCancelSettings) -> Result<ExperimentReport> {
    let table = lookup(&settings.table)?;
    let params = table.system_params(settings.n_cut);
    let tones = table.tones();
    let t_m = micromotion_period(&tones, params.chi());
    let t_end = settings.duration_us;
    if !(t_end > 0.0) || !(settings.record_step_us > 0.0) {
        return Err(PndError::InvalidParameter(
            "duration and record step must be positive".into(),
        ));
    }
    let envelope = match settings.shape {
        GateShape::Abrupt => Envelope::abrupt(0.0, t_end),
        GateShape::Smooth => Envelope::ramp(settings.t_s_us, 0.0, t_end),
    };
    let cat = cat_state(C64::new(settings.alpha, 0.0), CatParity::Even, settings.n_cut)?;
    let mut warnings = Vec::new();
    if cat.exceeds_leak_threshold() {
        warnings.push(format!("cat truncation leaks {:.2e} of the norm", cat.leaked_weight));
    }
    let psi0 = cat.state;
    // E_T = (K/2) n(n−1) cancels the bare Kerr phase of the frame.
    let kerr_khz = params.kerr_mhz * 1e3;
    let target: Vec<f64> = (0..=settings.n_cut)
        .map(|n| khz_to_angular(kerr_khz / 2.0 * (n * n.saturating_sub(1)) as f64))
        .collect();
    let count = (t_end / settings.record_step_us).round().max(1.0) as usize;
    let mut records: Vec<f64> = (0..=count).map(|k| t_end * k as f64 / count as f64).collect();
    for t in &settings.wigner_times_us {
        if !(0.0..=t_end).contains(t) {
            return Err(PndError::InvalidParameter(format!(
                "Wigner time {t} us outside the run"
            )));
        }
        records.push(*t);
    }
    let config =
        PropagationConfig::new(0.0, t_end, t_m / settings.steps_per_period.max(1) as f64).with_record_times(records);

    let drive = DriveSpec::new(tones.clone(), envelope).on(table.channel);
    let silent = DriveSpec::new(scaled_tones(&tones, 0.0), envelope).on(table.channel);
    let noise = NoiseParams::from_khz(settings.gamma_q_khz, settings.gamma_phi_khz, settings.kappa_khz)
        .with_relaxation(settings.relaxation);
    let noisy = !noise.is_noiseless();

    let wigner_times = settings.wigner_times_us.clone();
    let grid = settings.wigner_grid;
    let clean_run = || -> Result<(FidelityTrace, Vec<WignerSnapshot>)> {
        let mut snaps = Vec::new();
        let system = OpenSystem::single_cavity(&params, &drive, &NoiseParams::none())?;
        let trace = system.run_with(&psi0, &target, &config, |t, rho| {
            if wigner_times.iter().any(|w| (w - t).abs() < 1e-9)
                && !snaps.iter().any(|s: &WignerSnapshot| s.time_us == t)
            {
                snaps.push(WignerSnapshot {
                    time_us: t,
                    map: wigner(rho, &grid)?,
                });
            }
            Ok(())
        })?;
        Ok((trace, snaps))
    };
    let noisy_run = || -> Result<Option<FidelityTrace>> {
        if !noisy {
            return Ok(None);
        }
        OpenSystem::single_cavity(&params, &drive, &noise)?
            .run(&psi0, &target, &config)
            .map(Some)
    };
    let off_run = || -> Result<Option<FidelityTrace>> {
        if !settings.drive_off {
            return Ok(None);
        }
        let off_noise = NoiseParams::from_khz(0.0, 0.0, settings.kappa_khz);
        OpenSystem::single_cavity(&params, &silent, &off_noise)?
            .run(&psi0, &target, &config)
            .map(Some)
    };
    let (clean, (noisy_trace, off)) = rayon::join(clean_run, || rayon::join(noisy_run, off_run));
    let (clean, snaps) = clean?;
    let noisy_trace = noisy_trace?;
    let off = off?;

    let mut report = ExperimentReport::new("kerr_cancel", settings)?;
    report.warnings = warnings;
    report.set("t_m_us", t_m);
    report.set("cat_leaked_weight", cat.leaked_weight);
    report.set("final_fidelity", clean.final_fidelity());
    report.set("min_fidelity", clean.fidelity.iter().copied().fold(1.0, f64::min));
    if let Some(n) = &noisy_trace {
        report.set("final_fidelity_noisy", n.final_fidelity());
        report.set("added_infidelity", clean.final_fidelity() - n.final_fidelity());
    }
    if let Some(o) = &off {
        report.set("drive_off_final_fidelity", o.final_fidelity());
        report.set("drive_off_min_fidelity", o.fidelity.iter().copied().fold(1.0, f64::min));
    }
    report.set_series(&clean, true);
    report.wigner = snaps;
    report.validate()?;
    Ok(report)
}

// ---------------------------------------------------------------------------
// Micromotion

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MicromotionSettings {
    pub table: String,
    pub n_cut: usize,
    pub alpha: f64,
    /// Drive amplitude multipliers.
    pub scales: Vec<f64>,
    pub periods: usize,
    pub samples_per_period: usize,
    pub steps_per_period: usize,
}

impl Default for MicromotionSettings {
    fn default() -> Self {
        Self {
            table: "VII".into(),
            n_cut: 6,
            alpha: std::f64::consts::SQRT_2,
            scales: vec![0.25, 0.5, 1.0],
            periods: 4,
            samples_per_period: 128,
            steps_per_period: 2000,
        }
    }
}

/// Lag (in samples) over which the series best repeats, or `None` for a
/// flat series. Lags within a small margin of the best mismatch count as
/// equally good, and the shortest of those wins, so a slow beat on top of
/// the periodic part does not push the answer to a multiple of the period.
fn repetition_lag(f: &[f64], min_lag: usize, max_lag: usize) -> Option<usize> {
    let mean = f.iter().sum::<f64>() / f.len() as f64;
    let spread = (f.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / f.len() as f64).sqrt();
    if spread == 0.0 {
        return None;
    }
    let mismatch: Vec<(usize, f64)> = (min_lag.max(1)..=max_lag.min(f.len() / 2))
        .map(|lag| {
            let n = f.len() - lag;
            (
                lag,
                ((0..n).map(|i| (f[i + lag] - f[i]).powi(2)).sum::<f64>() / n as f64).sqrt(),
            )
        })
        .collect();
    let best = mismatch.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
    if !(best < 0.5 * spread) {
        return None;
    }
    mismatch.iter().find(|m| m.1 <= best + 0.05 * spread).map(|m| m.0)
}

/// Fidelity micromotion of a cat under the scaled drive, measured against
/// the drive's own engineered spectrum so only the fast oscillation remains.
pub fn micromotion_experiment(settings: &MicromotionSettings) -> Result<ExperimentReport> {
    let table = lookup(&settings.table)?;
    let params = table.system_params(settings.n_cut);
    let tones = table.tones();
    let t_m = micromotion_period(&tones, params.chi());
    let samples = settings.samples_per_period.max(8);
    let t_end = settings.periods.max(2) as f64 * t_m;
    let count = settings.periods.max(2) * samples;
    let psi0 = cat_state(C64::new(settings.alpha, 0.0), CatParity::Even, settings.n_cut)?.state;
    if settings.scales.iter().any(|s| !(*s > 0.0)) {
        return Err(PndError::InvalidParameter("scales must be positive".into()));
    }
    let runs: Vec<FidelityTrace> = settings
        .scales
        .par_iter()
        .map(|s| {
            let scaled = scaled_tones(&tones, *s);
            let spec = spectrum_order4(&params, &scaled)?;
            let target: Vec<f64> = padded(&spec.energies_khz(), settings.n_cut + 1)
                .iter()
                .map(|e| khz_to_angular(*e))
                .collect();
            let drive = DriveSpec::new(scaled, Envelope::abrupt(0.0, t_end)).on(table.channel);
            let config = PropagationConfig::new(0.0, t_end, t_m / settings.steps_per_period.max(1) as f64)
                .with_uniform_records(count);
            OpenSystem::single_cavity(&params, &drive, &NoiseParams::none())?.run(&psi0, &target, &config)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = ExperimentReport::new("micromotion", settings)?;
    report.set("t_m_us", t_m);
    let mut logs = Vec::new();
    for (i, (s, tr)) in settings.scales.iter().zip(&runs).enumerate() {
        let inf: Vec<f64> = tr.fidelity.iter().map(|f| 1.0 - f).collect();
        let amp = inf.iter().copied().fold(f64::MIN, f64::max) - inf.iter().copied().fold(f64::MAX, f64::min);
        report.set(format!("scale_{i}"), *s);
        report.set(format!("amplitude_{i}"), amp);
        if let Some(lag) = repetition_lag(&inf, samples / 8, 2 * samples) {
            report.set(format!("period_us_{i}"), lag as f64 * t_end / count as f64);
        }
        if amp > 0.0 {
            logs.push((s.ln(), amp.ln()));
        }
    }
    if logs.len() >= 2 {
        let (x, y): (Vec<f64>, Vec<f64>) = logs.into_iter().unzip();
        report.set("amplitude_slope", linear_fit(&x, &y).0);
    }
    if let Some(tr) = runs.last() {
        report.set_series(tr, false);
    }
    report.validate()?;
    Ok(report)
}

// ---------------------------------------------------------------------------
// Two-cavity CPHASE

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CPhaseSettings {
    /// Drives for ancillas a, b and c.
    pub tables: Vec<String>,
    pub n_cut: usize,
    pub periods: f64,
    pub shape: GateShape,
    pub gamma_q_khz: f64,
    pub gamma_phi_khz: f64,
    pub relaxation: RelaxationModel,
    pub kappa_scan_khz: Vec<f64>,
    pub steps_per_period: usize,
    pub records: usize,
}

impl Default for CPhaseSettings {
    fn default() -> Self {
        Self {
            tables: vec!["IX".into(), "X".into(), "XI".into()],
            n_cut: 4,
            periods: 2.0,
            shape: GateShape::Abrupt,
            gamma_q_khz: 3.0,
            gamma_phi_khz: 0.0,
            relaxation: RelaxationModel::default(),
            kappa_scan_khz: vec![0.0],
            steps_per_period: 2000,
            records: 50,
        }
    }
}

/// CPHASE on two kitten-encoded cavities, with recovery on both.
pub fn cphase_experiment(settings: &CPhaseSettings) -> Result<ExperimentReport> {
    let tabs: Vec<&PublishedTable> = settings.tables.iter().map(|n| lookup(n)).collect::<Result<_>>()?;
    let first = tabs
        .first()
        .ok_or_else(|| PndError::InvalidParameter("no drive tables".into()))?;
    let chi_mhz = first.chi_mhz;
    if tabs.iter().any(|t| t.chi_mhz != chi_mhz) {
        return Err(PndError::InvalidParameter("CPHASE tables must share chi".into()));
    }
    let params = TwoCavityParams::symmetric(chi_mhz, settings.n_cut);
    let all_tones: Vec<DriveTone> = tabs.iter().flat_map(|t| t.tones()).collect();
    let t_m = micromotion_period(&all_tones, crate::units::mhz_to_angular(chi_mhz));
    let t_gate = settings.periods * t_m;
    let drives: Vec<DriveSpec> = tabs
        .iter()
        .map(|t| t.drive(settings.shape.gate_envelope(t_gate)))
        .collect();

    let d = settings.n_cut + 1;
    let mut marg = [vec![0.0; 2 * d], vec![0.0; 2 * d], vec![0.0; 2 * d]];
    for t in &tabs {
        let slot = match t.channel {
            crate::models::QubitChannel::A => 0,
            crate::models::QubitChannel::B => 1,
            crate::models::QubitChannel::C => 2,
            other => {
                return Err(PndError::InvalidParameter(format!(
                    "table {} drives channel {other}",
                    t.name
                )))
            }
        };
        marg[slot] = padded(t.target_khz, 2 * d);
    }
    let target_khz = |a: usize, b: usize| marg[0][a] + marg[1][b] + marg[2][a + b];
    let target: Vec<f64> = (0..d * d).map(|i| khz_to_angular(target_khz(i / d, i % d))).collect();

    let code = LogicalCode::kitten(settings.n_cut)?;
    let psi0 = QuantumState::tensor(&[code.plus("a")?, code.plus("b")?])?;
    let config = PropagationConfig::new(0.0, t_gate, t_m / settings.steps_per_period.max(1) as f64)
        .with_uniform_records(settings.records);

    let mut jobs = Vec::new();
    for k in std::iter::once(0.0).chain(settings.kappa_scan_khz.iter().copied()) {
        for q in [false, true] {
            if !jobs.contains(&(key(k), q)) {
                jobs.push((key(k), q));
            }
        }
    }
    let traces: Vec<FidelityTrace> = jobs
        .par_iter()
        .map(|(k, q)| {
            let kappa: f64 = k.parse().expect("formatted above");
            let (gq, gphi) = if *q {
                (settings.gamma_q_khz, settings.gamma_phi_khz)
            } else {
                (0.0, 0.0)
            };
            let noise = NoiseParams::from_khz(gq, gphi, kappa).with_relaxation(settings.relaxation);
            OpenSystem::two_cavity(&params, &drives, &noise)?.run(&psi0, &target, &config)
        })
        .collect::<Result<Vec<_>>>()?;
    let find = |k: f64, q: bool| &traces[jobs.iter().position(|j| *j == (key(k), q)).expect("job present")];

    let mut report = ExperimentReport::new("cphase", settings)?;
    report.set("t_gate_us", t_gate);
    report.set("t_m_us", t_m);
    let clean = find(0.0, false);
    let noisy = find(0.0, true);
    report.set("gate_fidelity", recovered_fidelity(clean, &["a", "b"])?);
    report.set("gate_fidelity_qubit_noise", recovered_fidelity(noisy, &["a", "b"])?);
    report.set("unrecovered_fidelity", clean.final_fidelity());
    report.set("final_fidelity", clean.final_fidelity());
    report.set("unrecovered_fidelity_qubit_noise", noisy.final_fidelity());
    for (i, k) in settings.kappa_scan_khz.iter().enumerate() {
        report.set(format!("kappa_{i}_khz"), *k);
        report.set(
            format!("fidelity_kappa_{i}"),
            recovered_fidelity(find(*k, false), &["a", "b"])?,
        );
        report.set(
            format!("fidelity_qubit_noise_kappa_{i}"),
            recovered_fidelity(find(*k, true), &["a", "b"])?,
        );
    }
    // Logical controlled phase from the engineered two-cavity spectrum.
    let spec = two_cavity_spectrum(&params, &drives)?;
    let joint = spec.energy_khz(2, 2) - spec.energy_khz(0, 2) - spec.energy_khz(2, 0) + spec.energy_khz(0, 0);
    report.set("engineered_joint_shift_khz", joint);
    report.set("cphase_angle", -khz_to_angular(joint) * t_gate);
    report.set_series(clean, false);
    report.validate()?;
    Ok(report)
}

// ---------------------------------------------------------------------------
// Error transparency

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransparencySettings {
    pub table: String,
    pub n_cut: usize,
    pub shape: GateShape,
    pub periods: f64,
    /// Number of loss times, at the midpoints of equal slices of the gate.
    pub injections: usize,
    /// Explicit loss times as fractions of the gate; overrides `injections`.
    pub fractions: Vec<f64>,
    pub steps_per_period: usize,
}

impl Default for TransparencySettings {
    fn default() -> Self {
        Self {
            table: "V".into(),
            n_cut: 6,
            shape: GateShape::Abrupt,
            periods: 2.0,
            injections: 5,
            fractions: Vec::new(),
            steps_per_period: 2000,
        }
    }
}

/// Inserts one photon loss `a` at each of several times during the π/8
/// gate, then applies the kitten recovery. Error transparency means the
/// recovered fidelity matches the loss-free gate.
pub fn error_transparency_check(settings: &TransparencySettings) -> Result<ExperimentReport> {
    let table = lookup(&settings.table)?;
    let params = table.system_params(settings.n_cut);
    let t_m = micromotion_period(&table.tones(), params.chi());
    let t_gate = settings.periods * t_m;
    let step = t_m / settings.steps_per_period.max(1) as f64;
    let drive = table.drive(settings.shape.gate_envelope(t_gate));
    let system = OpenSystem::single_cavity(&params, &drive, &NoiseParams::none())?;
    let cavity = kitten_plus(settings.n_cut)?;
    let target: Vec<f64> = padded(table.target_khz, settings.n_cut + 1)
        .iter()
        .map(|e| khz_to_angular(*e))
        .collect();
    let c0 = cavity.amplitudes().clone();
    let psi_t = QuantumState::new(
        cavity.dims().clone(),
        CVector::from_fn(c0.len(), |i, _| {
            c0[i] * C64::from_polar(1.0, -(system.cavity_frame[i] + target[i]) * t_gate)
        }),
    )?;
    let a = CompositeOperator::annihilation_labeled("a", settings.n_cut)?.embed(system.dims())?;
    let psi0 = system.initial_state(&cavity)?;

    let finish = |psi: &QuantumState, from: f64| -> Result<f64> {
        let end = if from < t_gate {
            propagate_state(&system.hamiltonian, psi, &PropagationConfig::new(from, t_gate, step))?
                .last()
                .cloned()
                .expect("final state")
        } else {
            psi.clone()
        };
        let lab = to_lab_frame(&DensityMatrix::from_pure(&end), &system.frame, t_gate)?;
        let reduced = lab.partial_trace(&["a"])?;
        root_state_fidelity(&kitten_recovery(&reduced, "a")?, &psi_t)
    };
    let reference = finish(&psi0, 0.0)?;
    let times: Vec<f64> = if settings.fractions.is_empty() {
        let n = settings.injections.max(1);
        (0..n).map(|k| t_gate * (k as f64 + 0.5) / n as f64).collect()
    } else {
        if settings.fractions.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(PndError::InvalidParameter("loss fractions must lie in [0, 1]".into()));
        }
        settings.fractions.iter().map(|f| f * t_gate).collect()
    };
    let injected: Vec<f64> = times
        .par_iter()
        .map(|&t| {
            let before = if t > 0.0 {
                propagate_state(&system.hamiltonian, &psi0, &PropagationConfig::new(0.0, t, step))?
                    .last()
                    .cloned()
                    .expect("state at loss time")
            } else {
                psi0.clone()
            };
            let jump = rotate_operator(&a, &system.frame, t)?;
            let after = before.apply(&jump)?.normalized()?;
            finish(&after, t)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = ExperimentReport::new("error_transparency", settings)?;
    report.set("reference_fidelity", reference);
    for (i, (t, f)) in times.iter().zip(&injected).enumerate() {
        report.set(format!("injection_time_{i}"), *t);
        report.set(format!("injected_fidelity_{i}"), *f);
    }
    let worst = injected.iter().copied().fold(1.0, f64::min);
    report.set("min_injected_fidelity", worst);
    report.set("max_fidelity_drop", reference - worst);
    report.validate()?;
    Ok(report)
}
