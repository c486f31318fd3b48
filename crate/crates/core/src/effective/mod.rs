// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form perturbation theory for the driven dispersive system.
//!
//! All amplitudes and detunings are handled relative to χ. The denominator
//! `w(n, m) = (n − m) + δ_m − (χ′/χ)·n(n−1)/2` is the (dimensionless)
//! frequency of tone `m` in the interaction picture of Fock state `n`.

mod dephasing;
mod kicks;
mod spectrum;
mod two_cavity;

pub use dephasing::{dephasing_rates, effective_cavity_jumps, qubit_excitation_prob, DephasingRates, EffectiveJump};
pub use kicks::{first_order_excited_amplitude, kick_operators, KickOperators};
pub use spectrum::{
    micromotion_period, micromotion_period_in_chi, spectrum_order2, spectrum_order4, spectrum_with, EngineeredSpectrum,
    SpectrumOptions,
};
pub use two_cavity::{two_cavity_spectrum, two_cavity_spectrum_with, TwoCavitySpectrum};

use crate::error::{PndError, Result};
use crate::models::DriveTone;

pub(crate) mod spectrum_internals {
    pub(crate) use super::dephasing::excitation_unchecked;
    pub(crate) use super::spectrum::energies_in_chi;
}

/// Default smallest accepted |denominator| in units of χ.
pub const DEFAULT_RESONANCE_GUARD: f64 = 0.01;

/// Tone denominator `w(n, m)` in units of χ.
pub fn denominator(tone: &DriveTone, n: usize, chi_prime_over_chi: f64) -> f64 {
    let nf = n as f64;
    (nf - tone.m as f64) + tone.delta_f64() - chi_prime_over_chi * nf * (nf - 1.0) / 2.0
}

/// Rejects tone sets with a denominator below `guard` for any `n ≤ n_max`,
/// or two distinct drive frequencies closer than `guard`.
pub fn check_resonance(
    tones: &[DriveTone],
    n_max: usize,
    chi_prime_over_chi: f64,
    guard: f64,
    channel: &str,
) -> Result<()> {
    for n in 0..=n_max {
        for t in tones {
            let w = denominator(t, n, chi_prime_over_chi);
            if w.abs() < guard {
                return Err(PndError::NearResonance {
                    channel: channel.to_string(),
                    detail: format!(
                        "n = {n}, m = {}: denominator {w:.3e} chi is below the guard {guard:.3e} chi",
                        t.m
                    ),
                });
            }
        }
    }
    for (i, a) in tones.iter().enumerate() {
        for b in &tones[i + 1..] {
            let d = a.nu() - b.nu();
            let df = *d.numer() as f64 / *d.denom() as f64;
            if df != 0.0 && df.abs() < guard {
                return Err(PndError::NearResonance {
                    channel: channel.to_string(),
                    detail: format!(
                        "tones m = {} and m = {} differ in frequency by {df:.3e} chi, below the guard {guard:.3e} chi",
                        a.m, b.m
                    ),
                });
            }
        }
    }
    Ok(())
}
