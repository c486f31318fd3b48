// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use super::config::PropagationConfig;
use super::integrate::{propagate_lindblad_observed, propagate_state_observed};
use super::jumps::JumpSet;
use crate::error::{PndError, Result};
use crate::models::{
    single_cavity_frame, two_cavity_frame, DriveSpec, NoiseParams, SystemParams, TimeDependent, ToneHamiltonian,
    TwoCavityParams,
};
use crate::quantum::{root_state_fidelity, CompositeOperator, DensityMatrix, HilbertDims, QuantumState};
use crate::{CMatrix, CVector, C64};

/// Fidelity of the cavity-reduced, lab-frame state against the target
/// evolution at each record time.
#[derive(Debug, Clone)]
pub struct FidelityTrace {
    pub times: Vec<f64>,
    /// Root fidelity `√⟨ψ_T|ρ_c|ψ_T⟩`.
    pub fidelity: Vec<f64>,
    /// Envelope value of the first drive at each record time.
    pub lambda: Vec<f64>,
    /// Total ancilla excitation `Σ_q P(e_q)` at each record time.
    pub excited: Vec<f64>,
    pub final_cavity: DensityMatrix,
    pub final_target: QuantumState,
}

impl FidelityTrace {
    pub fn final_fidelity(&self) -> f64 {
        *self.fidelity.last().expect("at least one record")
    }
}

/// `e^{−iDt} ρ e^{iDt}` for a diagonal frame.
pub fn to_lab_frame(rho: &DensityMatrix, frame: &[f64], t: f64) -> Result<DensityMatrix> {
    let m = rho.matrix();
    if frame.len() != m.nrows() {
        return Err(PndError::DimensionMismatch("frame length does not match state".into()));
    }
    let out = CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        m[(i, j)] * C64::from_polar(1.0, -(frame[i] - frame[j]) * t)
    });
    DensityMatrix::new(rho.dims().clone(), out)
}

/// Driven cavity system together with its noise and interaction frame.
#[derive(Debug, Clone)]
pub struct OpenSystem {
    pub hamiltonian: ToneHamiltonian,
    pub jumps: JumpSet,
    /// Diagonal energies (rad/µs) removed by the interaction picture.
    pub frame: Vec<f64>,
    pub cavity_labels: Vec<String>,
    pub qubit_labels: Vec<String>,
    /// Bare cavity energies (rad/µs) with every ancilla in `|g⟩`, on the
    /// cavity-reduced space.
    pub cavity_frame: Vec<f64>,
}

impl OpenSystem {
    pub fn single_cavity(params: &SystemParams, drive: &DriveSpec, noise: &NoiseParams) -> Result<Self> {
        let hamiltonian = ToneHamiltonian::single_cavity(params, drive)?;
        let jumps = JumpSet::single_cavity(params, noise)?;
        let frame = single_cavity_frame(params);
        let cavity_frame = (0..=params.n_cut).map(|n| frame[2 * n]).collect();
        Ok(Self {
            hamiltonian,
            jumps,
            frame,
            cavity_labels: vec!["a".into()],
            qubit_labels: vec!["q".into()],
            cavity_frame,
        })
    }

    pub fn two_cavity(params: &TwoCavityParams, drives: &[DriveSpec], noise: &NoiseParams) -> Result<Self> {
        let hamiltonian = ToneHamiltonian::two_cavity(params, drives)?;
        let jumps = JumpSet::two_cavity(params, noise)?;
        let frame = two_cavity_frame(params);
        let cavity_dim = (params.n_cut_a + 1) * (params.n_cut_b + 1);
        Ok(Self {
            hamiltonian,
            jumps,
            frame,
            cavity_labels: vec!["a".into(), "b".into()],
            qubit_labels: vec!["qa".into(), "qb".into(), "qc".into()],
            cavity_frame: vec![0.0; cavity_dim],
        })
    }

    pub fn dims(&self) -> &HilbertDims {
        self.hamiltonian.dims()
    }

    /// Cavity state tensored with every ancilla in `|g⟩`.
    pub fn initial_state(&self, cavity: &QuantumState) -> Result<QuantumState> {
        let mut parts = vec![cavity.clone()];
        parts.extend(self.qubit_labels.iter().map(|l| QuantumState::ground(l)));
        let psi = QuantumState::tensor(&parts)?;
        if psi.dims() != self.dims() {
            return Err(PndError::DimensionMismatch(format!(
                "cavity state on {:?} does not match cavities {:?}",
                cavity.dims().labels(),
                self.cavity_labels
            )));
        }
        Ok(psi)
    }

    fn excited_projector(&self) -> Result<CompositeOperator> {
        let mut total = CompositeOperator::zeros(self.dims().clone());
        for l in &self.qubit_labels {
            total = (&total + &CompositeOperator::excited_projector(l).embed(self.dims())?)?;
        }
        Ok(total)
    }

    /// Propagates `cavity ⊗ |g…g⟩` and compares the cavity-reduced lab-frame
    /// state with `e^{−i(D_g + E_T)t}|cavity⟩` where `target` holds `E_T` in
    /// rad/µs on the cavity-reduced space.
    pub fn run(&self, cavity: &QuantumState, target: &[f64], config: &PropagationConfig) -> Result<FidelityTrace> {
        self.run_with(cavity, target, config, |_, _| Ok(()))
    }

    /// Same as [`OpenSystem::run`], additionally handing the cavity-reduced
    /// lab-frame state at every record time to `inspect`.
    pub fn run_with<F>(
        &self,
        cavity: &QuantumState,
        target: &[f64],
        config: &PropagationConfig,
        mut inspect: F,
    ) -> Result<FidelityTrace>
    where
        F: FnMut(f64, &DensityMatrix) -> Result<()>,
    {
        if target.len() != self.cavity_frame.len() {
            return Err(PndError::DimensionMismatch(format!(
                "target lists {} energies for a cavity space of dimension {}",
                target.len(),
                self.cavity_frame.len()
            )));
        }
        let psi0 = self.initial_state(cavity)?;
        let keep: Vec<&str> = self.cavity_labels.iter().map(|s| s.as_str()).collect();
        let excited_op = self.excited_projector()?;
        let c0 = cavity.amplitudes().clone();
        let target_at = |t: f64| -> Result<QuantumState> {
            let v = CVector::from_fn(c0.len(), |i, _| {
                c0[i] * C64::from_polar(1.0, -(self.cavity_frame[i] + target[i]) * t)
            });
            QuantumState::new(cavity.dims().clone(), v)
        };
        let mut times = Vec::new();
        let mut fidelity = Vec::new();
        let mut lambda = Vec::new();
        let mut excited = Vec::new();
        let mut last: Option<(DensityMatrix, QuantumState)> = None;
        let mut observe = |t: f64, rho: &DensityMatrix| -> Result<()> {
            excited.push(rho.expectation(&excited_op)?.re);
            let lab = to_lab_frame(rho, &self.frame, t)?;
            let reduced = lab.partial_trace(&keep)?;
            let psi_t = target_at(t)?;
            times.push(t);
            fidelity.push(root_state_fidelity(&reduced, &psi_t)?);
            inspect(t, &reduced)?;
            lambda.push(self.hamiltonian.envelope_values(t).first().copied().unwrap_or(0.0));
            last = Some((reduced, psi_t));
            Ok(())
        };
        let noisy = self.jumps.operators.iter().any(|j| j.rate_mhz > 0.0);
        if noisy {
            propagate_lindblad_observed(&self.hamiltonian, &psi0.to_density(), &self.jumps, config, |t, rho| {
                observe(t, rho)
            })?;
        } else {
            propagate_state_observed(&self.hamiltonian, &psi0, config, |t, psi| observe(t, &psi.to_density()))?;
        }
        let (final_cavity, final_target) = last.ok_or_else(|| PndError::InvalidParameter("no record times".into()))?;
        Ok(FidelityTrace {
            times,
            fidelity,
            lambda,
            excited,
            final_cavity,
            final_target,
        })
    }
}

/// Single-cavity fidelity trace against the diagonal target `target_khz`
/// (ordinary frequency, one entry per Fock index up to `N_cut`).
pub fn fidelity_trace(
    drive: &DriveSpec,
    params: &SystemParams,
    target_khz: &[f64],
    psi0: &QuantumState,
    noise: &NoiseParams,
    config: &PropagationConfig,
) -> Result<FidelityTrace> {
    let system = OpenSystem::single_cavity(params, drive, noise)?;
    let target: Vec<f64> = target_khz.iter().map(|e| 2.0 * PI * e * 1e-3).collect();
    system.run(psi0, &target, config)
}
