// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::f64::consts::PI;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{check_resonance, denominator, DEFAULT_RESONANCE_GUARD};
use crate::error::{PndError, Result};
use crate::models::{DriveTone, SystemParams};
use crate::{Rational, C64};

/// Engineered cavity energies `E_n` (ordinary frequency, MHz), ground-state
/// projected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineeredSpectrum {
    pub energies_mhz: Vec<f64>,
    pub order: u8,
    pub chi_mhz: f64,
    pub chi_prime_mhz: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl EngineeredSpectrum {
    pub(crate) fn from_chi_units(energies: Vec<f64>, order: u8, chi_mhz: f64, chi_prime_mhz: f64) -> Self {
        let energies_mhz: Vec<f64> = energies.iter().map(|e| e * chi_mhz).collect();
        let warnings = energies
            .iter()
            .enumerate()
            .filter(|(_, e)| e.abs() >= 0.25)
            .map(|(n, e)| format!("E_{n} = {e:.3} chi is outside the perturbative regime"))
            .collect();
        Self {
            energies_mhz,
            order,
            chi_mhz,
            chi_prime_mhz,
            warnings,
        }
    }

    pub fn len(&self) -> usize {
        self.energies_mhz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies_mhz.is_empty()
    }

    pub fn energy_khz(&self, n: usize) -> f64 {
        self.energies_mhz[n] * 1e3
    }

    pub fn energies_khz(&self) -> Vec<f64> {
        self.energies_mhz.iter().map(|e| e * 1e3).collect()
    }

    /// Energies in rad/µs.
    pub fn energies_angular(&self) -> Vec<f64> {
        self.energies_mhz.iter().map(|e| 2.0 * PI * e).collect()
    }

    /// Largest |E_n − target_n| in kHz over the shared index range.
    pub fn max_residual_khz(&self, target_khz: &[f64]) -> f64 {
        self.energies_khz()
            .iter()
            .zip(target_khz)
            .map(|(e, t)| (e - t).abs())
            .fold(0.0, f64::max)
    }
}

/// Evaluation options for [`spectrum_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// 2 or 4.
    pub order: u8,
    /// Smallest accepted |denominator| in units of χ.
    pub guard: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            order: 4,
            guard: DEFAULT_RESONANCE_GUARD,
        }
    }
}

/// Second-order spectrum.
pub fn spectrum_order2(params: &SystemParams, tones: &[DriveTone]) -> Result<EngineeredSpectrum> {
    spectrum_with(
        params,
        tones,
        SpectrumOptions {
            order: 2,
            ..Default::default()
        },
    )
}

/// Second- plus fourth-order spectrum.
pub fn spectrum_order4(params: &SystemParams, tones: &[DriveTone]) -> Result<EngineeredSpectrum> {
    spectrum_with(params, tones, SpectrumOptions::default())
}

/// Spectrum for `n = 0..=N_cut` at the requested order.
pub fn spectrum_with(
    params: &SystemParams,
    tones: &[DriveTone],
    options: SpectrumOptions,
) -> Result<EngineeredSpectrum> {
    if options.order != 2 && options.order != 4 {
        return Err(PndError::InvalidParameter(format!(
            "order must be 2 or 4, got {}",
            options.order
        )));
    }
    let cp = params.chi_prime_over_chi();
    check_resonance(tones, params.n_cut, cp, options.guard, "q")?;
    let energies = energies_in_chi(tones, params.n_cut, cp, options.order == 4);
    Ok(EngineeredSpectrum::from_chi_units(
        energies,
        options.order,
        params.chi_mhz,
        params.chi_prime_mhz,
    ))
}

/// Unchecked evaluation in units of χ.
pub(crate) fn energies_in_chi(tones: &[DriveTone], n_max: usize, cp: f64, order4: bool) -> Vec<f64> {
    let nus: Vec<Rational> = tones.iter().map(|t| t.nu()).collect();
    (0..=n_max)
        .map(|n| {
            let w: Vec<f64> = tones.iter().map(|t| denominator(t, n, cp)).collect();
            let e2 = order2_term(tones, &w);
            if order4 {
                e2 + order4_term(tones, &nus, &w, e2)
            } else {
                e2
            }
        })
        .collect()
}

fn order2_term(tones: &[DriveTone], w: &[f64]) -> f64 {
    tones.iter().zip(w).map(|(t, w)| t.omega.norm_sqr() / w).sum()
}

// Σ Ω1 Ω2* Ω3 Ω4* / (w4 w1 (ν1 − ν2)) over ν1 + ν3 = ν2 + ν4 with ν1 ≠ ν2,
// minus E2 · Σ |Ω|² / w².
fn order4_term(tones: &[DriveTone], nus: &[Rational], w: &[f64], e2: f64) -> f64 {
    let mut pair_sums: HashMap<Rational, C64> = HashMap::new();
    for (i3, t3) in tones.iter().enumerate() {
        for (i4, t4) in tones.iter().enumerate() {
            *pair_sums.entry(nus[i4] - nus[i3]).or_default() += t3.omega * t4.omega.conj() / w[i4];
        }
    }
    let mut acc = C64::new(0.0, 0.0);
    for (i1, t1) in tones.iter().enumerate() {
        for (i2, t2) in tones.iter().enumerate() {
            let diff = nus[i1] - nus[i2];
            if diff == Rational::from_integer(0) {
                continue;
            }
            if let Some(s) = pair_sums.get(&diff) {
                let d = *diff.numer() as f64 / *diff.denom() as f64;
                acc += t1.omega * t2.omega.conj() * s / (w[i1] * d);
            }
        }
    }
    let s2: f64 = tones.iter().zip(w).map(|(t, w)| t.omega.norm_sqr() / (w * w)).sum();
    acc.re - e2 * s2
}

/// `2π / GCD({δ_m}, 1)` in units of 1/χ.
pub fn micromotion_period_in_chi(tones: &[DriveTone]) -> f64 {
    let mut num: i64 = 1;
    let mut den: i64 = 1;
    for t in tones {
        let d = t.delta;
        if *d.numer() == 0 {
            continue;
        }
        num = num.gcd(d.numer());
        den = den.lcm(d.denom());
    }
    2.0 * PI * den as f64 / num as f64
}

/// Micromotion period in µs for `chi` in rad/µs.
pub fn micromotion_period(tones: &[DriveTone], chi: f64) -> f64 {
    micromotion_period_in_chi(tones) / chi
}
