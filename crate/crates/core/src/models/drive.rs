// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{PndError, Result};
use crate::{Rational, C64};

use super::Envelope;

/// Detuning denominators accepted without a warning.
pub const DEFAULT_DENOMINATORS: [i64; 3] = [1, 2, 4];

/// Largest |Ω|/|δ| and |Ω|/|χ−δ| accepted without a warning.
pub const DEFAULT_SAFETY_RATIO: f64 = 0.35;

/// Which ancilla a drive addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QubitChannel {
    /// The single ancilla of a one-cavity setup.
    Q,
    /// Ancilla dispersively coupled to cavity a only.
    A,
    /// Ancilla dispersively coupled to cavity b only.
    B,
    /// Joint ancilla coupled to both cavities.
    C,
}

impl QubitChannel {
    pub fn label(&self) -> &'static str {
        match self {
            QubitChannel::Q => "q",
            QubitChannel::A => "qa",
            QubitChannel::B => "qb",
            QubitChannel::C => "qc",
        }
    }
}

impl fmt::Display for QubitChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One drive component near the `m`-photon qubit line.
///
/// Amplitude and detuning are stored relative to χ: `Ω_m = omega · χ` and
/// `δ_m = delta · χ` with `delta` an exact rational.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "ToneRecord", try_from = "ToneRecord")]
pub struct DriveTone {
    pub m: usize,
    pub omega: C64,
    pub delta: Rational,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ToneRecord {
    m: usize,
    omega_re_over_chi: f64,
    #[serde(default)]
    omega_im_over_chi: f64,
    delta_num: i64,
    delta_den: i64,
}

impl From<DriveTone> for ToneRecord {
    fn from(t: DriveTone) -> Self {
        Self {
            m: t.m,
            omega_re_over_chi: t.omega.re,
            omega_im_over_chi: t.omega.im,
            delta_num: *t.delta.numer(),
            delta_den: *t.delta.denom(),
        }
    }
}

impl TryFrom<ToneRecord> for DriveTone {
    type Error = PndError;
    fn try_from(r: ToneRecord) -> Result<Self> {
        if r.delta_den == 0 {
            return Err(PndError::InvalidParameter("detuning denominator is zero".into()));
        }
        Ok(DriveTone {
            m: r.m,
            omega: C64::new(r.omega_re_over_chi, r.omega_im_over_chi),
            delta: Rational::new(r.delta_num, r.delta_den),
        })
    }
}

impl DriveTone {
    /// Real-amplitude tone.
    pub fn new(m: usize, omega_over_chi: f64, delta: Rational) -> Self {
        Self {
            m,
            omega: C64::new(omega_over_chi, 0.0),
            delta,
        }
    }

    pub fn complex(m: usize, omega_over_chi: C64, delta: Rational) -> Self {
        Self {
            m,
            omega: omega_over_chi,
            delta,
        }
    }

    /// Drive frequency offset `ν_m = δ_m − mχ` in units of χ, measured from
    /// the bare qubit frequency.
    pub fn nu(&self) -> Rational {
        self.delta - Rational::from_integer(self.m as i64)
    }

    /// Detuning as a float in units of χ.
    pub fn delta_f64(&self) -> f64 {
        *self.delta.numer() as f64 / *self.delta.denom() as f64
    }
}

/// Advisory findings about a tone set.
#[derive(Debug, Clone, PartialEq)]
pub enum ToneWarning {
    /// `|Ω|` is not small compared with `|δ|` or `|χ − δ|`.
    Perturbative { m: usize, ratio: f64 },
    /// Detuning denominator outside the default menu.
    Denominator { m: usize, den: i64 },
}

impl fmt::Display for ToneWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToneWarning::Perturbative { m, ratio } => {
                write!(
                    f,
                    "tone m={m}: amplitude-to-detuning ratio {ratio:.3} above safety factor"
                )
            }
            ToneWarning::Denominator { m, den } => write!(f, "tone m={m}: detuning denominator {den} outside menu"),
        }
    }
}

/// A complete drive: tones, envelope and the ancilla they act on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSpec {
    pub tones: Vec<DriveTone>,
    pub envelope: Envelope,
    #[serde(default = "default_channel")]
    pub target_qubit: QubitChannel,
}

fn default_channel() -> QubitChannel {
    QubitChannel::Q
}

impl DriveSpec {
    pub fn new(tones: Vec<DriveTone>, envelope: Envelope) -> Self {
        Self {
            tones,
            envelope,
            target_qubit: QubitChannel::Q,
        }
    }

    pub fn on(mut self, channel: QubitChannel) -> Self {
        self.target_qubit = channel;
        self
    }

    /// One tone per Fock index, `tones[n]` addressing `n`.
    pub fn from_table(deltas: &[Rational], omegas: &[f64], envelope: Envelope) -> Self {
        let tones = deltas
            .iter()
            .zip(omegas)
            .enumerate()
            .map(|(m, (d, o))| DriveTone::new(m, *o, *d))
            .collect();
        Self::new(tones, envelope)
    }

    /// Hard errors: duplicate `(m, δ)` pairs. Soft findings are returned.
    pub fn validate(&self, safety_ratio: f64) -> Result<Vec<ToneWarning>> {
        for (i, t) in self.tones.iter().enumerate() {
            if self.tones[..i].iter().any(|o| o.m == t.m && o.delta == t.delta) {
                return Err(PndError::InvalidParameter(format!(
                    "two tones share m = {} and delta = {}",
                    t.m, t.delta
                )));
            }
        }
        let mut warnings = Vec::new();
        for t in &self.tones {
            let d = t.delta_f64();
            let amp = t.omega.norm();
            let ratio = (amp / d.abs()).max(amp / (1.0 - d).abs());
            if amp > 0.0 && ratio > safety_ratio {
                warnings.push(ToneWarning::Perturbative { m: t.m, ratio });
            }
            if !DEFAULT_DENOMINATORS.contains(t.delta.denom()) {
                warnings.push(ToneWarning::Denominator {
                    m: t.m,
                    den: *t.delta.denom(),
                });
            }
        }
        Ok(warnings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tone_json_round_trip() {
        let t = DriveTone::complex(3, C64::new(0.05, -0.01), Rational::new(-1, 4));
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.contains("\"delta_num\":-1"));
        assert!(s.contains("\"delta_den\":4"));
        let back: DriveTone = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(
            serde_json::from_str::<DriveTone>(r#"{"m":0,"omega_re_over_chi":0.1,"delta_num":1,"delta_den":0}"#)
                .is_err()
        );
    }

    #[test]
    fn nu_is_exact() {
        let t = DriveTone::new(5, 0.07, Rational::new(1, 4));
        assert_eq!(t.nu(), Rational::new(-19, 4));
    }

    #[test]
    fn duplicate_tones_rejected() {
        let t = DriveTone::new(1, 0.05, Rational::new(1, 2));
        let spec = DriveSpec::new(vec![t, t], Envelope::abrupt(0.0, 1.0));
        assert!(spec.validate(DEFAULT_SAFETY_RATIO).is_err());
    }

    #[test]
    fn large_amplitude_flagged() {
        let spec = DriveSpec::new(
            vec![
                DriveTone::new(0, 0.2, Rational::new(1, 4)),
                DriveTone::new(1, 0.05, Rational::new(1, 3)),
            ],
            Envelope::abrupt(0.0, 1.0),
        );
        let w = spec.validate(DEFAULT_SAFETY_RATIO).unwrap();
        assert!(w
            .iter()
            .any(|x| matches!(x, ToneWarning::Perturbative { m: 0, ratio } if (ratio - 0.8).abs() < 1e-12)));
        assert!(w.contains(&ToneWarning::Denominator { m: 1, den: 3 }));
    }
}
