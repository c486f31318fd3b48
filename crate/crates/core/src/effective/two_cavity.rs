// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::spectrum::energies_in_chi;
use super::{check_resonance, EngineeredSpectrum, SpectrumOptions};
use crate::error::{PndError, Result};
use crate::models::{DriveSpec, QubitChannel, TwoCavityParams};

/// Two-cavity engineered spectrum `E_{na nb} = E_a(na) + E_b(nb) + E_c(na + nb)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoCavitySpectrum {
    /// `grid_mhz[na][nb]`.
    pub grid_mhz: Vec<Vec<f64>>,
    pub marginal_a: EngineeredSpectrum,
    pub marginal_b: EngineeredSpectrum,
    pub marginal_c: EngineeredSpectrum,
}

impl TwoCavitySpectrum {
    pub fn energy_khz(&self, na: usize, nb: usize) -> f64 {
        self.grid_mhz[na][nb] * 1e3
    }

    pub fn marginal(&self, channel: QubitChannel) -> Option<&EngineeredSpectrum> {
        match channel {
            QubitChannel::A => Some(&self.marginal_a),
            QubitChannel::B => Some(&self.marginal_b),
            QubitChannel::C => Some(&self.marginal_c),
            QubitChannel::Q => None,
        }
    }
}

/// Order-4 two-cavity spectrum with the default guard.
pub fn two_cavity_spectrum(params: &TwoCavityParams, specs: &[DriveSpec]) -> Result<TwoCavitySpectrum> {
    two_cavity_spectrum_with(params, specs, SpectrumOptions::default())
}

/// Two-cavity spectrum. Channels without a drive contribute zero.
pub fn two_cavity_spectrum_with(
    params: &TwoCavityParams,
    specs: &[DriveSpec],
    options: SpectrumOptions,
) -> Result<TwoCavitySpectrum> {
    params.validate()?;
    let mut marginals = Vec::new();
    for channel in [QubitChannel::A, QubitChannel::B, QubitChannel::C] {
        let found: Vec<&DriveSpec> = specs.iter().filter(|s| s.target_qubit == channel).collect();
        if found.len() > 1 {
            return Err(PndError::InvalidParameter(format!(
                "more than one drive on qubit {channel}"
            )));
        }
        let n_max = params.max_number(channel);
        let chi_mhz = params.chi_mhz(channel)?;
        let energies = match found.first() {
            Some(spec) => {
                check_resonance(&spec.tones, n_max, 0.0, options.guard, channel.label())?;
                energies_in_chi(&spec.tones, n_max, 0.0, options.order == 4)
            }
            None => vec![0.0; n_max + 1],
        };
        marginals.push(EngineeredSpectrum::from_chi_units(
            energies,
            options.order,
            chi_mhz,
            0.0,
        ));
    }
    if let Some(s) = specs.iter().find(|s| s.target_qubit == QubitChannel::Q) {
        return Err(PndError::InvalidParameter(format!(
            "two-cavity drives target qubit a, b or c, got {}",
            s.target_qubit
        )));
    }
    let marginal_c = marginals.pop().unwrap();
    let marginal_b = marginals.pop().unwrap();
    let marginal_a = marginals.pop().unwrap();
    let grid_mhz = (0..=params.n_cut_a)
        .map(|na| {
            (0..=params.n_cut_b)
                .map(|nb| marginal_a.energies_mhz[na] + marginal_b.energies_mhz[nb] + marginal_c.energies_mhz[na + nb])
                .collect()
        })
        .collect();
    Ok(TwoCavitySpectrum {
        grid_mhz,
        marginal_a,
        marginal_b,
        marginal_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Envelope;
    use crate::tables;

    fn drives() -> Vec<DriveSpec> {
        let env = Envelope::abrupt(0.0, 1.0);
        ["IX", "X", "XI"]
            .iter()
            .map(|n| tables::table(n).unwrap().drive(env))
            .collect()
    }

    #[test]
    fn joint_only_depends_on_total_number() {
        let p = TwoCavityParams::symmetric(2.56, 4);
        let s = two_cavity_spectrum(&p, &drives()[2..]).unwrap();
        for na in 0..=4 {
            for nb in 0..=4 {
                assert_eq!(s.grid_mhz[na][nb], s.marginal_c.energies_mhz[na + nb]);
            }
        }
    }

    #[test]
    fn additivity_for_one_one() {
        let p = TwoCavityParams::symmetric(2.56, 4);
        let s = two_cavity_spectrum(&p, &drives()).unwrap();
        assert!((s.energy_khz(1, 1) + 10.0).abs() < 1.0);
        assert_eq!(s.marginal_c.len(), 9);
    }

    #[test]
    fn rejects_single_cavity_channel() {
        let p = TwoCavityParams::symmetric(2.56, 4);
        let spec = tables::table("V").unwrap().drive(Envelope::abrupt(0.0, 1.0));
        assert!(two_cavity_spectrum(&p, &[spec]).is_err());
    }
}
