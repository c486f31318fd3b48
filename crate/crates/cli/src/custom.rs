// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Free-form single-cavity run: any drive, initial state and noise.

use pnd_core::codes::{ExperimentReport, WignerSnapshot};
use pnd_core::dynamics::{kitten_recovery, OpenSystem, PropagationConfig};
use pnd_core::effective::{micromotion_period, spectrum_order4};
use pnd_core::quantum::{cat_state, root_state_fidelity, wigner, CatParity, QuantumState};
use pnd_core::units::khz_to_angular;
use pnd_core::{DriveSpec, Envelope, LogicalCode, NoiseParams, PndError, C64};

use crate::config::{CustomSettings, InitialState, Loaded, TargetChoice};
use crate::error::{CliError, CliResult};

fn initial_state(initial: &InitialState, n_cut: usize, warnings: &mut Vec<String>) -> CliResult<QuantumState> {
    Ok(match initial {
        InitialState::KittenPlus => LogicalCode::kitten(n_cut)?.plus("a")?,
        InitialState::Fock { n } => QuantumState::fock("a", n_cut, *n)?,
        InitialState::Cat {
            alpha_re,
            alpha_im,
            odd,
        } => {
            let parity = if *odd { CatParity::Odd } else { CatParity::Even };
            let cat = cat_state(C64::new(*alpha_re, *alpha_im), parity, n_cut)?;
            if cat.exceeds_leak_threshold() {
                warnings.push(format!("cat truncation leaks {:.2e} of the norm", cat.leaked_weight));
            }
            cat.state
        }
        InitialState::Coefficients { amplitudes } => {
            let coeffs: Vec<(usize, C64)> = amplitudes.iter().map(|&(n, re, im)| (n, C64::new(re, im))).collect();
            QuantumState::from_fock_coefficients("a", n_cut, &coeffs)?.normalized()?
        }
    })
}

fn padded(values: &[f64], len: usize) -> Vec<f64> {
    (0..len).map(|n| values.get(n).copied().unwrap_or(0.0)).collect()
}

pub fn run_custom(settings: &CustomSettings, loaded: &Loaded) -> CliResult<ExperimentReport> {
    let drive = settings.drive.resolve(loaded)?;
    let n_cut = settings.n_cut;
    let params = drive.system.params(n_cut);
    let t_m = micromotion_period(&drive.tones, params.chi());
    let envelope = drive.envelope.unwrap_or_else(|| Envelope::abrupt(0.0, 2.0 * t_m));
    let t_end = settings.duration_us.unwrap_or_else(|| envelope.support().1);
    if !(t_end > 0.0) {
        return Err(CliError::Config("run duration must be positive".into()));
    }

    let target_khz = match &settings.target {
        TargetChoice::Engineered => spectrum_order4(&params, &drive.tones)?.energies_khz(),
        TargetChoice::Declared => drive
            .target_khz
            .clone()
            .ok_or_else(|| CliError::Config("drive source declares no target".into()))?,
        TargetChoice::Energies { energies_khz } => energies_khz.clone(),
    };
    let target: Vec<f64> = padded(&target_khz, n_cut + 1)
        .iter()
        .map(|e| khz_to_angular(*e))
        .collect();

    let mut warnings = Vec::new();
    let psi0 = initial_state(&settings.initial, n_cut, &mut warnings)?;
    let mut records: Vec<f64> = (0..=settings.records.max(1))
        .map(|k| t_end * k as f64 / settings.records.max(1) as f64)
        .collect();
    for t in &settings.wigner_times_us {
        if !(0.0..=t_end).contains(t) {
            return Err(CliError::Config(format!("Wigner time {t} us outside the run")));
        }
        records.push(*t);
    }
    let config =
        PropagationConfig::new(0.0, t_end, t_m / settings.steps_per_period.max(1) as f64).with_record_times(records);
    let noise = NoiseParams::from_khz(settings.gamma_q_khz, settings.gamma_phi_khz, settings.kappa_khz)
        .with_relaxation(settings.relaxation);
    let spec = DriveSpec::new(drive.tones.clone(), envelope);
    let system = OpenSystem::single_cavity(&params, &spec, &noise)?;

    let mut snaps: Vec<WignerSnapshot> = Vec::new();
    let trace = system.run_with(&psi0, &target, &config, |t, rho| {
        if settings.wigner_times_us.iter().any(|w| (w - t).abs() < 1e-9) && !snaps.iter().any(|s| s.time_us == t) {
            snaps.push(WignerSnapshot {
                time_us: t,
                map: wigner(rho, &settings.wigner_grid)?,
            });
        }
        Ok::<(), PndError>(())
    })?;

    let mut report = ExperimentReport::new("custom", settings)?;
    report.warnings = warnings;
    report.set("t_m_us", t_m);
    report.set("duration_us", t_end);
    report.set("final_fidelity", trace.final_fidelity());
    report.set("min_fidelity", trace.fidelity.iter().copied().fold(1.0, f64::min));
    if let Some(p) = trace.excited.iter().copied().reduce(f64::max) {
        report.set("max_excitation", p);
    }
    if settings.recovery {
        let recovered = kitten_recovery(&trace.final_cavity, "a")?;
        report.set(
            "recovered_fidelity",
            root_state_fidelity(&recovered, &trace.final_target)?,
        );
    }
    report.set_series(&trace, true);
    report.wigner = snaps;
    report.validate()?;
    Ok(report)
}
