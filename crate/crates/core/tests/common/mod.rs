// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Oracles shared by the integration test targets. Nothing here calls into
//! the code under test for the quantity being checked.

#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use pnd_core::dynamics::{propagate_state, OpenSystem, PropagationConfig};
use pnd_core::effective::{micromotion_period, spectrum_order4};
use pnd_core::models::{DriveSpec, Envelope, NoiseParams, ToneHamiltonian};
use pnd_core::tables::PublishedTable;
use pnd_core::units::khz_to_angular;
use pnd_core::{QuantumState, C64};

/// Dispersive constants (MHz) read off an exact diagonalization of
/// `Δ a†a − (α/2) d†d†dd + g (a†d + a d†)`.
pub fn jc_exact(g: f64, delta: f64, alpha: f64) -> (f64, f64, f64) {
    let (na, nd) = (6usize, 5usize);
    let dim = na * nd;
    let idx = |n: usize, q: usize| n * nd + q;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for n in 0..na {
        for q in 0..nd {
            let i = idx(n, q);
            h[(i, i)] = delta * n as f64 - alpha / 2.0 * (q * q.saturating_sub(1)) as f64;
            if n + 1 < na && q >= 1 {
                // a† d |n, q⟩ = √(n+1) √q |n+1, q−1⟩
                let j = idx(n + 1, q - 1);
                let v = g * ((n + 1) as f64).sqrt() * (q as f64).sqrt();
                h[(j, i)] += v;
                h[(i, j)] += v;
            }
        }
    }
    let eig = h.symmetric_eigen();
    let level = |n: usize, q: usize| {
        let i = idx(n, q);
        let k = (0..dim)
            .max_by(|&a, &b| {
                eig.eigenvectors[(i, a)]
                    .abs()
                    .total_cmp(&eig.eigenvectors[(i, b)].abs())
            })
            .unwrap();
        eig.eigenvalues[k]
    };
    let qubit_gap = |n: usize| level(n, 1) - level(n, 0);
    let chi = -(qubit_gap(1) - qubit_gap(0));
    let kerr = -(level(2, 0) - 2.0 * level(1, 0) + level(0, 0));
    let chi_prime = qubit_gap(2) - 2.0 * qubit_gap(1) + qubit_gap(0);
    (chi, kerr, chi_prime)
}

/// Least-squares slope and intercept.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Worst accumulated phase error (rad) of `|n, g⟩` against the order-4
/// spectrum after `periods` micromotion periods, together with the allowed
/// `2π · 0.5 kHz · t` and the time used.
pub fn phase_drift(table: &PublishedTable, periods: usize) -> (f64, f64, f64) {
    let params = table.system_params(table.n_max());
    let tones = table.tones();
    let t_m = micromotion_period(&tones, params.chi());
    let t_end = periods as f64 * t_m;
    let h = ToneHamiltonian::single_cavity(&params, &DriveSpec::new(tones.clone(), Envelope::abrupt(0.0, t_end)))
        .expect("table drive builds");
    let energies = spectrum_order4(&params, &tones)
        .expect("table drive is off resonance")
        .energies_angular();
    let config = PropagationConfig::new(0.0, t_end, t_m / 2000.0);
    let mut worst = 0.0f64;
    for (n, e) in energies.iter().enumerate() {
        let psi = QuantumState::tensor(&[
            QuantumState::fock("a", table.n_max(), n).unwrap(),
            QuantumState::ground("q"),
        ])
        .unwrap();
        let out = propagate_state(&h, &psi, &config).expect("closed propagation");
        let c = out.last().unwrap().amplitudes()[2 * n] * C64::from_polar(1.0, e * t_end);
        worst = worst.max(c.arg().abs());
    }
    (worst, khz_to_angular(0.5) * t_end, t_end)
}

/// Decay rate (MHz, `|ρ02| ∝ exp(−2π γ t)`) of the `|0⟩`/`|2⟩` coherence under
/// the given drive table and noise. The noiseless run is divided out so the
/// coherent micromotion of `|ρ02|` cancels; the rate is fitted over
/// stroboscopic times `k·T_M`, `from ≤ k ≤ to`.
pub fn coherence_decay_rate(table: &PublishedTable, noise: &NoiseParams, from: usize, to: usize) -> f64 {
    let params = table.system_params(6);
    let tones = table.tones();
    let t_m = micromotion_period(&tones, params.chi());
    let t_end = to as f64 * t_m;
    let drive = DriveSpec::new(tones, Envelope::abrupt(0.0, t_end)).on(table.channel);
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let psi = QuantumState::from_fock_coefficients("a", 6, &[(0, h), (2, h)]).unwrap();
    let records: Vec<f64> = (0..=to).map(|k| k as f64 * t_m).collect();
    let config = PropagationConfig::new(0.0, t_end, t_m / 2000.0).with_record_times(records);
    let coherence = |noise: &NoiseParams| {
        let system = OpenSystem::single_cavity(&params, &drive, noise).expect("system builds");
        let mut out = Vec::new();
        system
            .run_with(&psi, &[0.0; 7], &config, |t, rho| {
                out.push((t, rho.matrix()[(0, 2)].norm()));
                Ok(())
            })
            .expect("propagation");
        out
    };
    let clean = coherence(&NoiseParams::none());
    let noisy = coherence(noise);
    let (xs, ys): (Vec<f64>, Vec<f64>) = noisy
        .iter()
        .zip(&clean)
        .filter(|(p, _)| p.0 >= from as f64 * t_m - 1e-9)
        .map(|(p, c)| (p.0, (p.1 / c.1).ln()))
        .unzip();
    -fit_line(&xs, &ys).0 / (2.0 * PI)
}
