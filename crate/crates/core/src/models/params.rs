// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{PndError, Result};
use crate::units::mhz_to_angular;

use super::QubitChannel;

/// Dispersive single-cavity model constants. Frequencies are ω/2π in MHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    pub chi_mhz: f64,
    #[serde(default)]
    pub kerr_mhz: f64,
    #[serde(default)]
    pub chi_prime_mhz: f64,
    #[serde(default = "default_n_cut")]
    pub n_cut: usize,
}

fn default_n_cut() -> usize {
    6
}

impl SystemParams {
    pub fn new(chi_mhz: f64, n_cut: usize) -> Self {
        Self {
            chi_mhz,
            kerr_mhz: 0.0,
            chi_prime_mhz: 0.0,
            n_cut,
        }
    }

    pub fn with_kerr_khz(mut self, kerr_khz: f64) -> Self {
        self.kerr_mhz = kerr_khz * 1e-3;
        self
    }

    pub fn with_chi_prime_khz(mut self, chi_prime_khz: f64) -> Self {
        self.chi_prime_mhz = chi_prime_khz * 1e-3;
        self
    }

    /// χ in rad/µs.
    pub fn chi(&self) -> f64 {
        mhz_to_angular(self.chi_mhz)
    }

    /// K in rad/µs.
    pub fn kerr(&self) -> f64 {
        mhz_to_angular(self.kerr_mhz)
    }

    /// χ′ in rad/µs.
    pub fn chi_prime(&self) -> f64 {
        mhz_to_angular(self.chi_prime_mhz)
    }

    /// χ′/χ, the dimensionless second-order dispersive shift.
    pub fn chi_prime_over_chi(&self) -> f64 {
        self.chi_prime_mhz / self.chi_mhz
    }

    /// Rejects invalid values and returns soft warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        if !(self.chi_mhz > 0.0) || !self.chi_mhz.is_finite() {
            return Err(PndError::InvalidParameter(format!(
                "chi must be positive, got {} MHz",
                self.chi_mhz
            )));
        }
        if self.n_cut < 1 {
            return Err(PndError::InvalidParameter("N_cut must be at least 1".into()));
        }
        let mut warnings = Vec::new();
        if self.kerr_mhz.abs() > self.chi_mhz / 10.0 {
            warnings.push(format!("|K| = {} MHz is not small compared with chi", self.kerr_mhz));
        }
        if self.chi_prime_mhz.abs() > self.chi_mhz / 10.0 {
            warnings.push(format!(
                "|chi'| = {} MHz is not small compared with chi",
                self.chi_prime_mhz
            ));
        }
        Ok(warnings)
    }
}

/// Two cavities, each with its own ancilla (a, b), plus a joint ancilla (c)
/// coupled to both with equal strength χ_c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoCavityParams {
    pub chi_a_mhz: f64,
    pub chi_b_mhz: f64,
    pub chi_c_mhz: f64,
    #[serde(default = "default_two_cavity_cut")]
    pub n_cut_a: usize,
    #[serde(default = "default_two_cavity_cut")]
    pub n_cut_b: usize,
}

fn default_two_cavity_cut() -> usize {
    4
}

impl TwoCavityParams {
    pub fn symmetric(chi_mhz: f64, n_cut: usize) -> Self {
        Self {
            chi_a_mhz: chi_mhz,
            chi_b_mhz: chi_mhz,
            chi_c_mhz: chi_mhz,
            n_cut_a: n_cut,
            n_cut_b: n_cut,
        }
    }

    pub fn chi_mhz(&self, channel: QubitChannel) -> Result<f64> {
        match channel {
            QubitChannel::A => Ok(self.chi_a_mhz),
            QubitChannel::B => Ok(self.chi_b_mhz),
            QubitChannel::C => Ok(self.chi_c_mhz),
            QubitChannel::Q => Err(PndError::InvalidParameter(
                "two-cavity drives target qubit a, b or c".into(),
            )),
        }
    }

    /// Largest photon number seen by the channel (n_a, n_b or n_a + n_b).
    pub fn max_number(&self, channel: QubitChannel) -> usize {
        match channel {
            QubitChannel::A => self.n_cut_a,
            QubitChannel::B => self.n_cut_b,
            _ => self.n_cut_a + self.n_cut_b,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("chi_a", self.chi_a_mhz),
            ("chi_b", self.chi_b_mhz),
            ("chi_c", self.chi_c_mhz),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(PndError::InvalidParameter(format!(
                    "{name} must be positive, got {v} MHz"
                )));
            }
        }
        if self.n_cut_a < 1 || self.n_cut_b < 1 {
            return Err(PndError::InvalidParameter("cavity cut-offs must be at least 1".into()));
        }
        Ok(())
    }
}

/// Relaxation and pure-dephasing rates of one ancilla, ω/2π in MHz.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitNoise {
    #[serde(default)]
    pub gamma_q_mhz: f64,
    #[serde(default)]
    pub gamma_phi_mhz: f64,
}

/// Decoherence rates, ω/2π in MHz. `Γ` enters the Lindblad equation as the
/// coefficient of the dissipator `D[J]` with `J` the bare jump operator, so a
/// single photon decays as `exp(−2π κ t)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseParams {
    #[serde(default)]
    pub gamma_q_mhz: f64,
    #[serde(default)]
    pub gamma_phi_mhz: f64,
    #[serde(default)]
    pub kappa_a_mhz: f64,
    /// Loss rate of the second cavity in two-cavity runs.
    #[serde(default)]
    pub kappa_b_mhz: f64,
    /// Per-ancilla overrides for two-cavity runs.
    #[serde(default)]
    pub per_qubit: Vec<(QubitChannel, QubitNoise)>,
    #[serde(default)]
    pub relaxation: RelaxationModel,
}

/// How ancilla relaxation is written as collapse operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelaxationModel {
    /// One rotating `√Γq σ−` per ancilla. Emissions at different photon
    /// numbers are indistinguishable, so the jump keeps cavity coherences.
    #[default]
    Collective,
    /// One jump per photon number the ancilla couples to, `√Γq σ−|n⟩⟨n|`:
    /// the emitted photon's frequency reveals `n`.
    PerNumber,
}

impl NoiseParams {
    pub fn none() -> Self {
        Self::default()
    }

    /// Convenience constructor from kHz values.
    pub fn from_khz(gamma_q_khz: f64, gamma_phi_khz: f64, kappa_khz: f64) -> Self {
        Self {
            gamma_q_mhz: gamma_q_khz * 1e-3,
            gamma_phi_mhz: gamma_phi_khz * 1e-3,
            kappa_a_mhz: kappa_khz * 1e-3,
            kappa_b_mhz: kappa_khz * 1e-3,
            per_qubit: Vec::new(),
            relaxation: RelaxationModel::default(),
        }
    }

    pub fn with_relaxation(mut self, relaxation: RelaxationModel) -> Self {
        self.relaxation = relaxation;
        self
    }

    /// Rates of a given ancilla, honouring overrides.
    pub fn qubit(&self, channel: QubitChannel) -> QubitNoise {
        self.per_qubit
            .iter()
            .find(|(c, _)| *c == channel)
            .map(|(_, q)| *q)
            .unwrap_or(QubitNoise {
                gamma_q_mhz: self.gamma_q_mhz,
                gamma_phi_mhz: self.gamma_phi_mhz,
            })
    }

    pub fn is_noiseless(&self) -> bool {
        self.gamma_q_mhz == 0.0
            && self.gamma_phi_mhz == 0.0
            && self.kappa_a_mhz == 0.0
            && self.kappa_b_mhz == 0.0
            && self
                .per_qubit
                .iter()
                .all(|(_, q)| q.gamma_q_mhz == 0.0 && q.gamma_phi_mhz == 0.0)
    }

    /// Rejects negative rates; warns when a rate is not small against χ.
    pub fn validate(&self, chi_mhz: f64) -> Result<Vec<String>> {
        let mut all = vec![
            ("gamma_q", self.gamma_q_mhz),
            ("gamma_phi", self.gamma_phi_mhz),
            ("kappa_a", self.kappa_a_mhz),
            ("kappa_b", self.kappa_b_mhz),
        ];
        for (_, q) in &self.per_qubit {
            all.push(("gamma_q", q.gamma_q_mhz));
            all.push(("gamma_phi", q.gamma_phi_mhz));
        }
        let mut warnings = Vec::new();
        for (name, v) in all {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(PndError::InvalidParameter(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
            if v > chi_mhz / 100.0 {
                warnings.push(format!("{name} = {v} MHz is not small compared with chi"));
            }
        }
        Ok(warnings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angular_conversion() {
        let p = SystemParams::new(2.0, 6).with_kerr_khz(3.0).with_chi_prime_khz(6.0);
        assert!((p.chi() - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!((p.kerr_mhz - 0.003).abs() < 1e-15);
        assert!((p.chi_prime_over_chi() - 0.003).abs() < 1e-15);
        assert!(p.validate().unwrap().is_empty());
    }

    #[test]
    fn invalid_chi_rejected() {
        assert!(SystemParams::new(0.0, 6).validate().is_err());
        assert!(SystemParams::new(-1.0, 6).validate().is_err());
        assert!(SystemParams::new(2.0, 0).validate().is_err());
    }

    #[test]
    fn large_kerr_warned() {
        let p = SystemParams::new(2.0, 6).with_kerr_khz(500.0);
        assert_eq!(p.validate().unwrap().len(), 1);
    }

    #[test]
    fn noise_overrides() {
        let mut n = NoiseParams::from_khz(3.0, 0.0, 0.0);
        n.per_qubit.push((
            QubitChannel::C,
            QubitNoise {
                gamma_q_mhz: 0.01,
                gamma_phi_mhz: 0.0,
            },
        ));
        assert_eq!(n.qubit(QubitChannel::A).gamma_q_mhz, 0.003);
        assert_eq!(n.qubit(QubitChannel::C).gamma_q_mhz, 0.01);
        assert!(NoiseParams::none().is_noiseless());
        assert!(!n.is_noiseless());
        assert!(NoiseParams::from_khz(-1.0, 0.0, 0.0).validate(2.0).is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = r#"{"chi_mhz": 2.0, "chi": 3}"#;
        assert!(serde_json::from_str::<SystemParams>(bad).is_err());
        let ok = r#"{"chi_mhz": 2.0}"#;
        let p: SystemParams = serde_json::from_str(ok).unwrap();
        assert_eq!(p.n_cut, 6);
    }
}
