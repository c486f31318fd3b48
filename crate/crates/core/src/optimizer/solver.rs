// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use std::cmp::Ordering;
use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::target::{make_target, TargetEnergies, TargetSpec};
use crate::effective::spectrum_internals::{energies_in_chi, excitation_unchecked};
use crate::effective::{
    check_resonance, denominator, micromotion_period, spectrum_with, EngineeredSpectrum, SpectrumOptions,
    DEFAULT_RESONANCE_GUARD,
};
use crate::error::{PndError, Result};
use crate::models::{DriveSpec, DriveTone, Envelope, SystemParams};
use crate::Rational;

fn default_menu() -> Vec<Rational> {
    vec![
        Rational::new(1, 2),
        Rational::new(-1, 2),
        Rational::new(1, 4),
        Rational::new(-1, 4),
    ]
}

fn default_assignments() -> usize {
    200
}

fn default_seed() -> u64 {
    2026
}

fn default_amp_bound() -> f64 {
    0.2
}

fn default_tol() -> f64 {
    0.25
}

fn default_true() -> bool {
    true
}

fn default_guard() -> f64 {
    DEFAULT_RESONANCE_GUARD
}

fn default_iterations() -> usize {
    40
}

fn default_sign_threshold() -> f64 {
    0.5
}

/// Search and solver settings.
///
/// Detuning assignments are drawn from a ChaCha8 stream seeded with `seed`:
/// for each Fock index in turn one menu entry is picked uniformly among the
/// entries allowed by the sign rule. Duplicated assignments are skipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    /// Detunings in units of χ, serialized as `[numerator, denominator]`.
    #[serde(default = "default_menu")]
    pub detuning_menu: Vec<Rational>,
    #[serde(default = "default_assignments")]
    pub n_assignments: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Largest accepted |Ω/χ|.
    #[serde(default = "default_amp_bound")]
    pub amp_bound: f64,
    #[serde(default = "default_tol")]
    pub solver_tol_khz: f64,
    #[serde(default = "default_true")]
    pub include_order4: bool,
    /// Smallest accepted |denominator| in units of χ.
    #[serde(default = "default_guard")]
    pub resonance_guard: f64,
    #[serde(default = "default_iterations")]
    pub max_iterations: usize,
    /// Indices with `|E_T,n| ≥ sign_threshold · max |E_T|` must use a
    /// detuning of the same sign as `E_T,n`.
    #[serde(default = "default_sign_threshold")]
    pub sign_threshold: f64,
    /// Envelope attached to the returned drive; defaults to an abrupt drive
    /// lasting two micromotion periods.
    #[serde(default)]
    pub envelope: Option<Envelope>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            detuning_menu: default_menu(),
            n_assignments: default_assignments(),
            seed: default_seed(),
            amp_bound: default_amp_bound(),
            solver_tol_khz: default_tol(),
            include_order4: true,
            resonance_guard: default_guard(),
            max_iterations: default_iterations(),
            sign_threshold: default_sign_threshold(),
            envelope: None,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.detuning_menu.is_empty() {
            return Err(PndError::InvalidParameter("detuning menu is empty".into()));
        }
        for d in &self.detuning_menu {
            if *d.numer() == 0 || d.numer().abs() * 2 > *d.denom() {
                return Err(PndError::InvalidParameter(format!(
                    "menu entry {d} must be non-zero with magnitude at most 1/2"
                )));
            }
        }
        if self.n_assignments == 0 {
            return Err(PndError::InvalidParameter("n_assignments must be positive".into()));
        }
        if !(self.amp_bound > 0.0) || !(self.solver_tol_khz > 0.0) || !(self.resonance_guard > 0.0) {
            return Err(PndError::InvalidParameter(
                "amp_bound, solver_tol_khz and resonance_guard must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Amplitudes realizing a target for one detuning assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeSolution {
    /// `Ω_n / χ`, one per Fock index.
    pub omegas: Vec<f64>,
    pub residual_khz: f64,
    pub iterations: usize,
}

/// Best drive found by [`optimize_drives`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizedDrive {
    pub drive: DriveSpec,
    pub achieved: EngineeredSpectrum,
    pub target_khz: Vec<f64>,
    /// `Σ_n p_{n,e}` including the initial-kick contribution.
    pub objective: f64,
    pub residual_khz: f64,
    pub feasible_assignments: usize,
    pub tried_assignments: usize,
}

fn tones_for(assignment: &[Rational], omegas: &[f64]) -> Vec<DriveTone> {
    assignment
        .iter()
        .zip(omegas)
        .enumerate()
        .map(|(m, (d, o))| DriveTone::new(m, *o, *d))
        .collect()
}

fn evaluate(assignment: &[Rational], x: &[f64], cp: f64, order4: bool) -> Vec<f64> {
    let omegas: Vec<f64> = x.iter().map(|v| v.max(0.0).sqrt()).collect();
    energies_in_chi(&tones_for(assignment, &omegas), assignment.len() - 1, cp, order4)
}

/// `Σ_n p_{n,e}` over `n ≤ n_max`, kick term included.
pub fn excitation_objective(tones: &[DriveTone], n_max: usize, chi_prime_over_chi: f64) -> f64 {
    (0..=n_max)
        .map(|n| excitation_unchecked(tones, n, chi_prime_over_chi, true))
        .sum()
}

/// Solves for real amplitudes, one tone per Fock index `n` at detuning
/// `assignment[n]`, so that the engineered spectrum matches `target_khz`.
///
/// Starts from the linear second-order solution in `x_n = Ω_n²` and refines
/// with damped Newton steps on the full residual.
pub fn solve_amplitudes(
    assignment: &[Rational],
    target_khz: &[f64],
    params: &SystemParams,
    config: &OptimizerConfig,
) -> Result<AmplitudeSolution> {
    let n = assignment.len();
    if n == 0 || target_khz.len() != n {
        return Err(PndError::DimensionMismatch(format!(
            "assignment covers {n} indices, target lists {}",
            target_khz.len()
        )));
    }
    let cp = params.chi_prime_over_chi();
    let probe = tones_for(assignment, &vec![0.0; n]);
    check_resonance(&probe, n - 1, cp, config.resonance_guard, "q")?;
    let khz_per_chi = params.chi_mhz * 1e3;
    let target: Vec<f64> = target_khz.iter().map(|e| e / khz_per_chi).collect();
    let tol = config.solver_tol_khz / khz_per_chi;

    let a = DMatrix::from_fn(n, n, |row, col| 1.0 / denominator(&probe[col], row, cp));
    let rhs = DVector::from_column_slice(&target);
    let x0 = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| PndError::Infeasible("second-order system is singular for this assignment".into()))?;
    let mut x: Vec<f64> = x0.iter().map(|v| v.max(0.0)).collect();

    let residual = |x: &[f64]| -> Vec<f64> {
        evaluate(assignment, x, cp, config.include_order4)
            .iter()
            .zip(&target)
            .map(|(e, t)| e - t)
            .collect()
    };
    let norm = |r: &[f64]| r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut r = residual(&x);
    let mut iterations = 0;
    let goal = tol * 1e-3;
    while norm(&r) > goal && iterations < config.max_iterations {
        iterations += 1;
        let mut jac = DMatrix::zeros(n, n);
        for k in 0..n {
            let h = 1e-7 * (1.0 + x[k].abs());
            let mut xp = x.clone();
            xp[k] += h;
            let mut xm = x.clone();
            xm[k] -= h;
            let fp = evaluate_signed(assignment, &xp, cp, config.include_order4);
            let fm = evaluate_signed(assignment, &xm, cp, config.include_order4);
            for row in 0..n {
                jac[(row, k)] = (fp[row] - fm[row]) / (2.0 * h);
            }
        }
        let step = match jac.lu().solve(&DVector::from_column_slice(&r)) {
            Some(s) => s,
            None => break,
        };
        let current = norm(&r);
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let trial: Vec<f64> = x
                .iter()
                .zip(step.iter())
                .map(|(xi, si)| (xi - scale * si).max(0.0))
                .collect();
            let rt = residual(&trial);
            if norm(&rt) < current {
                x = trial;
                r = rt;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let residual_khz = norm(&r) * khz_per_chi;
    if residual_khz > config.solver_tol_khz {
        return Err(PndError::NonConvergence {
            iterations,
            residual_khz,
        });
    }
    let omegas: Vec<f64> = x.iter().map(|v| v.sqrt()).collect();
    if let Some((m, o)) = omegas.iter().enumerate().find(|(_, o)| **o > config.amp_bound) {
        return Err(PndError::Infeasible(format!(
            "amplitude |Omega_{m}/chi| = {o:.4} exceeds the bound {}",
            config.amp_bound
        )));
    }
    Ok(AmplitudeSolution {
        omegas,
        residual_khz,
        iterations,
    })
}

// Energies as an analytic function of x = Ω², continued to x < 0 so that
// finite differences stay smooth at the boundary.
fn evaluate_signed(assignment: &[Rational], x: &[f64], cp: f64, order4: bool) -> Vec<f64> {
    if x.iter().all(|v| *v >= 0.0) {
        return evaluate(assignment, x, cp, order4);
    }
    let n = assignment.len();
    let probe = tones_for(assignment, &vec![0.0; n]);
    let clamped: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
    let mut e = evaluate(assignment, &clamped, cp, order4);
    for (row, e_row) in e.iter_mut().enumerate() {
        for (k, xk) in x.iter().enumerate() {
            if *xk < 0.0 {
                *e_row += xk / denominator(&probe[k], row, cp);
            }
        }
    }
    e
}

fn sample_assignments(target: &[f64], config: &OptimizerConfig) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let max = target.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    let allowed: Vec<Vec<Rational>> = target
        .iter()
        .map(|e| {
            if max > 0.0 && e.abs() >= config.sign_threshold * max {
                let sign = e.signum();
                config
                    .detuning_menu
                    .iter()
                    .copied()
                    .filter(|d| (*d.numer() as f64).signum() == sign)
                    .collect()
            } else {
                config.detuning_menu.clone()
            }
        })
        .collect();
    let space: f64 = allowed.iter().map(|a| a.len() as f64).product();
    let wanted = (config.n_assignments as f64).min(space) as usize;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    if allowed.iter().any(|a| a.is_empty()) {
        return out;
    }
    let mut attempts = 0;
    while out.len() < wanted && attempts < 64 * config.n_assignments {
        attempts += 1;
        let a: Vec<Rational> = allowed
            .iter()
            .map(|opts| opts[rng.random_range(0..opts.len())])
            .collect();
        if seen.insert(a.clone()) {
            out.push(a);
        }
    }
    out
}

fn compare_candidates(a: &(f64, f64, &Vec<Rational>), b: &(f64, f64, &Vec<Rational>)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then_with(|| a.2.cmp(b.2))
}

/// Randomized detuning search: returns the feasible drive with the smallest
/// total excitation `Σ_n p_{n,e}`.
pub fn optimize_drives(target: &TargetSpec, params: &SystemParams, config: &OptimizerConfig) -> Result<OptimizedDrive> {
    config.validate()?;
    let energies = make_target(target)?;
    let target_khz = match energies {
        TargetEnergies::Single(e) => e,
        TargetEnergies::TwoCavity { .. } => {
            return Err(PndError::UnsupportedPattern(
                "two-cavity targets are solved per marginal with optimize_energies".into(),
            ))
        }
    };
    optimize_energies(&target_khz, params, config)
}

/// Same as [`optimize_drives`] for explicit target energies in kHz.
pub fn optimize_energies(
    target_khz: &[f64],
    params: &SystemParams,
    config: &OptimizerConfig,
) -> Result<OptimizedDrive> {
    config.validate()?;
    let chi_khz = params.chi_mhz * 1e3;
    let bound = chi_khz / 8.0;
    let max = target_khz.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    if max > bound {
        return Err(PndError::Infeasible(format!(
            "max |E_T| = {max:.3} kHz exceeds the bound chi/8 = {bound:.3} kHz"
        )));
    }
    let cp = params.chi_prime_over_chi();
    let n_max = target_khz.len() - 1;
    let assignments = sample_assignments(target_khz, config);
    let results: Vec<Result<AmplitudeSolution>> = assignments
        .par_iter()
        .map(|a| solve_amplitudes(a, target_khz, params, config))
        .collect();

    let mut failures = Vec::new();
    let mut candidates = Vec::new();
    for (i, (a, r)) in assignments.iter().zip(&results).enumerate() {
        match r {
            Ok(sol) => {
                let tones = tones_for(a, &sol.omegas);
                candidates.push((excitation_objective(&tones, n_max, cp), sol.residual_khz, a, i));
            }
            Err(e) => {
                let label: Vec<String> = a.iter().map(|d| d.to_string()).collect();
                failures.push(format!("[{}]: {e}", label.join(", ")));
            }
        }
    }
    let best = candidates
        .iter()
        .min_by(|x, y| compare_candidates(&(x.0, x.1, x.2), &(y.0, y.1, y.2)))
        .ok_or(PndError::NoFeasibleAssignment {
            tried: assignments.len(),
            failures: failures.clone(),
        })?;
    let (objective, residual_khz, assignment, index) = *best;
    let solution = results[index].as_ref().expect("candidate came from a successful solve");
    let tones = tones_for(assignment, &solution.omegas);
    let envelope = config
        .envelope
        .unwrap_or_else(|| Envelope::abrupt(0.0, 2.0 * micromotion_period(&tones, params.chi())));
    let order = if config.include_order4 { 4 } else { 2 };
    let achieved = spectrum_with(
        &SystemParams {
            n_cut: n_max,
            ..*params
        },
        &tones,
        SpectrumOptions {
            order,
            guard: config.resonance_guard,
        },
    )?;
    Ok(OptimizedDrive {
        drive: DriveSpec::new(tones, envelope),
        achieved,
        target_khz: target_khz.to_vec(),
        objective,
        residual_khz,
        feasible_assignments: candidates.len(),
        tried_assignments: assignments.len(),
    })
}
