// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Selective number-dependent phase (SNAP) gate built from a resonant comb.
//!
//! Every addressed Fock level `n` sees a tone resonant with its qubit
//! transition whose amplitude `Ω = π/T_G` drives one full Rabi cycle during
//! the gate. Reversing the drive axis halfway through, by an angle
//! `φ_n − π`, leaves the qubit in `|g⟩` with a geometric phase `φ_n` on
//! `|n, g⟩`. Because the tones of neighbouring levels are only `χ` apart,
//! each tone's detuning, amplitude and mid-gate phase jump are calibrated on
//! the two-level block of its level with the whole comb present.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::dynamics::JumpSet;
use crate::dynamics::{FidelityTrace, OpenSystem, PropagationConfig};
use crate::error::{PndError, Result};
use crate::models::{
    single_cavity_dims, single_cavity_frame, Envelope, NoiseParams, PhaseSwitch, SystemParams, ToneHamiltonian,
    ToneTerm,
};
use crate::quantum::QuantumState;
use crate::C64;

/// Largest `Ω/χ` accepted before the comb stops being number selective.
const MAX_OMEGA_OVER_CHI: f64 = 0.1;
/// Calibrated blocks must return to `|g⟩` with at least this probability.
const MIN_BLOCK_RETURN: f64 = 0.99;

/// Calibration effort.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SnapOptions {
    pub sweeps: usize,
    /// RK4 steps per two-level block evaluation during calibration.
    pub block_steps: usize,
    /// RK4 steps for the final per-level phase check.
    pub check_steps: usize,
    /// RK4 steps of the full system over the gate.
    pub steps: usize,
    pub records: usize,
}

impl Default for SnapOptions {
    fn default() -> Self {
        Self {
            sweeps: 3,
            block_steps: 800,
            check_steps: 4000,
            steps: 4000,
            records: 400,
        }
    }
}

/// A calibrated comb.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapGate {
    pub t_gate: f64,
    /// Nominal tone amplitude `π/T_G`, rad/µs.
    pub omega: f64,
    /// Target phase per addressed level.
    pub phases: BTreeMap<usize, f64>,
    /// Tone detuning from the bare transition of its level, rad/µs.
    pub detuning: BTreeMap<usize, f64>,
    /// Amplitude multiplier of each tone.
    pub amplitude_scale: BTreeMap<usize, f64>,
    /// Drive phase after `T_G/2`.
    pub jump: BTreeMap<usize, f64>,
    /// Return probability `|U_gg|²` of each addressed block.
    pub block_return: BTreeMap<usize, f64>,
    /// Phase `arg U_gg` of each addressed block.
    pub block_phase: BTreeMap<usize, f64>,
}

/// Outcome of running a calibrated SNAP gate on the full system.
#[derive(Debug, Clone)]
pub struct SnapRun {
    pub gate: SnapGate,
    pub trace: FidelityTrace,
    /// Ancilla excitation averaged over the gate.
    pub mean_excitation: f64,
    /// Ancilla ground population at the end of the gate.
    pub final_ground: f64,
}

struct Comb<'a> {
    levels: Vec<usize>,
    omega: f64,
    chi: f64,
    chi_prime: f64,
    t_gate: f64,
    detuning: &'a BTreeMap<usize, f64>,
    amplitude: &'a BTreeMap<usize, f64>,
    jump: &'a BTreeMap<usize, f64>,
}

impl Comb<'_> {
    /// Tone `m` seen by level `n`: amplitude, frequency and post-jump phase.
    fn term(&self, n: usize, m: usize) -> ToneTerm {
        let nn = n as f64;
        let freq = (nn - m as f64) * self.chi + self.detuning[&m] - self.chi_prime * nn * (nn - 1.0).max(0.0) / 2.0;
        ToneTerm {
            amplitude: C64::new(self.omega * self.amplitude[&m], 0.0),
            frequency: freq,
            switch: Some(PhaseSwitch {
                time: self.t_gate / 2.0,
                factor: C64::from_polar(1.0, self.jump[&m]),
            }),
        }
    }

    fn block(&self, n: usize, steps: usize) -> Matrix2<C64> {
        let terms: Vec<ToneTerm> = self.levels.iter().map(|&m| self.term(n, m)).collect();
        let coupling = |t: f64| -> C64 {
            terms
                .iter()
                .map(|tm| {
                    let mut a = tm.amplitude;
                    if let Some(s) = tm.switch {
                        if t >= s.time {
                            a *= s.factor;
                        }
                    }
                    a * C64::from_polar(1.0, tm.frequency * t)
                })
                .sum()
        };
        let mi = C64::new(0.0, -1.0);
        let deriv = |t: f64, u: &Matrix2<C64>| -> Matrix2<C64> {
            let o = coupling(t);
            let h = Matrix2::new(C64::new(0.0, 0.0), o, o.conj(), C64::new(0.0, 0.0));
            h * u * mi
        };
        let dt = self.t_gate / steps as f64;
        let mut u = Matrix2::identity();
        for k in 0..steps {
            let t = k as f64 * dt;
            let k1 = deriv(t, &u);
            let k2 = deriv(t + dt / 2.0, &(u + k1 * C64::new(dt / 2.0, 0.0)));
            let k3 = deriv(t + dt / 2.0, &(u + k2 * C64::new(dt / 2.0, 0.0)));
            let k4 = deriv(t + dt, &(u + k3 * C64::new(dt, 0.0)));
            u += (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(dt / 6.0, 0.0);
        }
        u
    }
}

/// Golden-section maximization of `f` on `[lo, hi]`.
fn maximize(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    (lo + hi) / 2.0
}

fn wrap(phase: f64) -> f64 {
    C64::from_polar(1.0, phase).arg()
}

fn check_inputs(phases: &BTreeMap<usize, f64>, t_gate: f64, params: &SystemParams) -> Result<f64> {
    params.validate()?;
    if phases.is_empty() {
        return Err(PndError::Snap("no addressed Fock levels".into()));
    }
    if !(t_gate > 0.0 && t_gate.is_finite()) {
        return Err(PndError::Snap(format!("gate time {t_gate} must be positive")));
    }
    if let Some(n) = phases.keys().find(|n| **n > params.n_cut) {
        return Err(PndError::Snap(format!("level {n} beyond n_cut = {}", params.n_cut)));
    }
    let omega = PI / t_gate;
    if omega / params.chi() > MAX_OMEGA_OVER_CHI {
        return Err(PndError::Snap(format!(
            "Rabi rate pi/T_G = {:.4} chi is not small against chi; lengthen the gate",
            omega / params.chi()
        )));
    }
    Ok(omega)
}

/// Calibrates a comb imparting `phases[n]` on `|n⟩` in a time `t_gate` (µs).
pub fn calibrate_snap(
    phases: &BTreeMap<usize, f64>,
    t_gate: f64,
    params: &SystemParams,
    options: &SnapOptions,
) -> Result<SnapGate> {
    let omega = check_inputs(phases, t_gate, params)?;
    let chi = params.chi();
    let chi_prime = params.chi_prime();
    let levels: Vec<usize> = phases.keys().copied().collect();
    // Bloch-Siegert-like shift from the other tones of the comb.
    let mut detuning: BTreeMap<usize, f64> = levels
        .iter()
        .map(|&m| {
            let mm = m as f64;
            let shift: f64 = levels
                .iter()
                .filter(|&&k| k != m)
                .map(|&k| 2.0 * omega * omega / ((mm - k as f64) * chi))
                .sum();
            (m, chi_prime * mm * (mm - 1.0).max(0.0) / 2.0 + shift)
        })
        .collect();
    let mut amplitude: BTreeMap<usize, f64> = levels.iter().map(|&m| (m, 1.0)).collect();
    let mut jump: BTreeMap<usize, f64> = phases.iter().map(|(&m, &p)| (m, p - PI)).collect();
    let steps = options.block_steps.max(2) & !1;
    let return_amp = |det: &BTreeMap<usize, f64>, amp: &BTreeMap<usize, f64>, jmp: &BTreeMap<usize, f64>, n: usize| {
        let comb = Comb {
            levels: levels.clone(),
            omega,
            chi,
            chi_prime,
            t_gate,
            detuning: det,
            amplitude: amp,
            jump: jmp,
        };
        comb.block(n, steps)[(0, 0)]
    };
    for _ in 0..options.sweeps {
        for &m in &levels {
            let w = 0.02 * chi;
            let center = detuning[&m];
            let best = maximize(
                |x| {
                    let mut d = detuning.clone();
                    d.insert(m, x);
                    return_amp(&d, &amplitude, &jump, m).norm()
                },
                center - w,
                center + w,
                1e-7 * chi,
            );
            detuning.insert(m, best);
            let center = amplitude[&m];
            let best = maximize(
                |x| {
                    let mut a = amplitude.clone();
                    a.insert(m, x);
                    return_amp(&detuning, &a, &jump, m).norm()
                },
                center - 0.04,
                center + 0.04,
                1e-7,
            );
            amplitude.insert(m, best);
            let u = return_amp(&detuning, &amplitude, &jump, m);
            let j = jump[&m] - wrap(u.arg() - phases[&m]);
            jump.insert(m, j);
        }
    }
    let comb = Comb {
        levels: levels.clone(),
        omega,
        chi,
        chi_prime,
        t_gate,
        detuning: &detuning,
        amplitude: &amplitude,
        jump: &jump,
    };
    let check = options.check_steps.max(2) & !1;
    let mut block_return = BTreeMap::new();
    let mut block_phase = BTreeMap::new();
    for &m in &levels {
        let u = comb.block(m, check)[(0, 0)];
        block_return.insert(m, u.norm_sqr());
        block_phase.insert(m, u.arg());
    }
    if let Some((m, p)) = block_return.iter().find(|(_, p)| **p < MIN_BLOCK_RETURN) {
        return Err(PndError::Snap(format!(
            "calibration left level {m} with ground return {p:.4}"
        )));
    }
    Ok(SnapGate {
        t_gate,
        omega,
        phases: phases.clone(),
        detuning,
        amplitude_scale: amplitude,
        jump,
        block_return,
        block_phase,
    })
}

impl SnapGate {
    /// Full cavity ⊗ qubit Hamiltonian of the comb in the dispersive frame.
    pub fn hamiltonian(&self, params: &SystemParams) -> Result<ToneHamiltonian> {
        let comb = Comb {
            levels: self.phases.keys().copied().collect(),
            omega: self.omega,
            chi: params.chi(),
            chi_prime: params.chi_prime(),
            t_gate: self.t_gate,
            detuning: &self.detuning,
            amplitude: &self.amplitude_scale,
            jump: &self.jump,
        };
        let couplings = (0..=params.n_cut)
            .map(|n| {
                (
                    2 * n,
                    2 * n + 1,
                    0,
                    comb.levels.iter().map(|&m| comb.term(n, m)).collect(),
                )
            })
            .collect();
        ToneHamiltonian::new(
            single_cavity_dims(params.n_cut),
            vec![Envelope::abrupt(0.0, self.t_gate)],
            couplings,
        )
    }

    /// Energies (rad/µs) whose evolution over `T_G` equals the target phases.
    pub fn target_energies(&self, n_cut: usize) -> Vec<f64> {
        (0..=n_cut)
            .map(|n| self.phases.get(&n).map_or(0.0, |p| -p / self.t_gate))
            .collect()
    }

    /// Worst deviation of the calibrated block phases from their targets.
    pub fn max_phase_error(&self) -> f64 {
        self.phases
            .iter()
            .map(|(m, p)| wrap(self.block_phase[m] - p).abs())
            .fold(0.0, f64::max)
    }
}

/// Calibrates and runs a SNAP gate on `psi0 ⊗ |g⟩`.
pub fn snap_gate(
    phases: &BTreeMap<usize, f64>,
    t_gate: f64,
    params: &SystemParams,
    noise: &NoiseParams,
    psi0: &QuantumState,
    options: &SnapOptions,
) -> Result<SnapRun> {
    let gate = calibrate_snap(phases, t_gate, params, options)?;
    run_snap(&gate, params, noise, psi0, options)
}

/// Runs an already calibrated gate.
pub fn run_snap(
    gate: &SnapGate,
    params: &SystemParams,
    noise: &NoiseParams,
    psi0: &QuantumState,
    options: &SnapOptions,
) -> Result<SnapRun> {
    let frame = single_cavity_frame(params);
    let system = OpenSystem {
        hamiltonian: gate.hamiltonian(params)?,
        jumps: JumpSet::single_cavity(params, noise)?,
        cavity_frame: (0..=params.n_cut).map(|n| frame[2 * n]).collect(),
        frame,
        cavity_labels: vec!["a".into()],
        qubit_labels: vec!["q".into()],
    };
    let config = PropagationConfig::new(0.0, gate.t_gate, gate.t_gate / options.steps.max(1) as f64)
        .with_uniform_records(options.records.max(1));
    let trace = system.run(psi0, &gate.target_energies(params.n_cut), &config)?;
    let mean_excitation = time_average(&trace.times, &trace.excited);
    let final_ground = 1.0 - trace.excited.last().copied().unwrap_or(0.0);
    Ok(SnapRun {
        gate: gate.clone(),
        trace,
        mean_excitation,
        final_ground,
    })
}

/// Trapezoidal average of `y` over the span of `t`.
pub(crate) fn time_average(t: &[f64], y: &[f64]) -> f64 {
    if t.len() < 2 {
        return y.first().copied().unwrap_or(0.0);
    }
    let area: f64 = t
        .windows(2)
        .zip(y.windows(2))
        .map(|(tw, yw)| (tw[1] - tw[0]) * (yw[0] + yw[1]) / 2.0)
        .sum();
    area / (t[t.len() - 1] - t[0])
}
