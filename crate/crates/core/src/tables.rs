// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Published drive parameter sets: target row, engineered row, detunings and
//! amplitudes per Fock index. Energies are ω/2π in kHz; detunings and
//! amplitudes are in units of χ.

use crate::models::{DriveSpec, DriveTone, Envelope, QubitChannel, SystemParams};
use crate::Rational;

/// One published table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedTable {
    pub name: &'static str,
    pub description: &'static str,
    pub chi_mhz: f64,
    pub kerr_khz: f64,
    pub chi_prime_khz: f64,
    pub target_khz: &'static [f64],
    pub engineered_khz: &'static [f64],
    pub delta: &'static [(i64, i64)],
    pub omega: &'static [f64],
    pub channel: QubitChannel,
}

const H: (i64, i64) = (1, 2);
const Q: (i64, i64) = (1, 4);
const MH: (i64, i64) = (-1, 2);
const MQ: (i64, i64) = (-1, 4);

static TABLES: [PublishedTable; 11] = [
    PublishedTable {
        name: "I",
        description: "three-photon interaction, K3 = 0.5 kHz",
        chi_mhz: 2.56,
        kerr_khz: 0.0,
        chi_prime_khz: 0.0,
        target_khz: &[0.0, 0.0, 0.0, 3.0, 12.0, 30.0, 60.0],
        engineered_khz: &[0.0, 0.0, 0.0, 3.0, 12.0, 30.0, 60.0],
        delta: &[H, H, H, H, H, Q, H],
        omega: &[0.0946, 0.0694, 0.0637, 0.0640, 0.0661, 0.0704, 0.0859],
        channel: QubitChannel::Q,
    },
    PublishedTable {
        name: "II",
        description: "three-photon interaction, K3 = 1 kHz",
        chi_mhz: 2.56,
        kerr_khz: 0.0,
        chi_prime_khz: 0.0,
        target_khz: &[0.0, 0.0, 0.0, 6.0, 24.0, 60.0, 120.0],
        engineered_khz: &[0.0, 0.0, -1.0, 8.0, 25.0, 61.0, 122.0],
        delta: &[H, H, H, H, Q, H, H],
        omega: &[0.1422, 0.1025, 0.0935, 0.0917, 0.0995, 0.1337, 0.1172],
        channel: QubitChannel::Q,
    },
    PublishedTable {
        name: "III",
        description: "parity-dependent energy, P = 20 kHz",
        chi_mhz: 2.56,
        kerr_khz: 0.0,
        chi_prime_khz: 0.0,
        target_khz: &[-20.0, 20.0, -20.0, 20.0, -20.0, 20.0, -20.0],
        engineered_khz: &[-20.0, 20.0, -20.0, 20.0, -20.0, 20.0, -20.0],
        delta: &[MQ, Q, MH, Q, MQ, Q, MH],
        omega: &[0.00682, 0.0568, 0.0553, 0.0349, 0.0427, 0.0427, 0.0786],
        channel: QubitChannel::Q,
    },
    PublishedTable {
        name: "IV",
        description: "parity-dependent energy, P = 40 kHz",
        chi_mhz: 2.56,
        kerr_khz: 0.0,
        chi_prime_khz: 0.0,
        target_khz: &[-40.0, 40.0, -40.0, 40.0, -40.0, 40.0, -40.0],
        engineered_khz: &[-40.5, 40.5, -40.5, 40.5, -40.5, 40.5, -40.5],
        delta: &[MH, Q, MH, Q, MQ, H, MQ],
        omega: &[0.0232, 0.0799, 0.0826, 0.0463, 0.0469, 0.0820, 0.0816],
        channel: QubitChannel::Q,
    },
    PublishedTable {
        name: "V",
        description: "error-transparent Z rotation, g_R = 20 kHz",
        chi_mhz: 2.56,
        kerr_khz: 0.0,
        chi_prime_khz: 0.0,
        target_khz: &[20.0, -20.0, -20.0, 20.0, 20.0, -20.0, -20.0],
        engineered_khz: &[20.0, -20.0, -20.0, 20.0, 20.0, -20.0, -20.0],
        delta: &[H, MH, MH, Q, H, MQ, MH],
        omega: &[0.0862, 0.0531, 0.0753, 0.0240, 0.0554, 0.0489, 0.0893],
        channel: QubitChannel::Q,
    },
    PublishedTable {
        name: "VI",
        description: "error-transparent Z rotation, g_R = 40 kHz",
        chi_mhz: 2.56,
        kerr_khz: 0.0,
        chi_prime_khz: 0.0,
        target_khz: &[40.0, -40.0, -40.0, 40.0, 40.0, -40.0, -40.0],
        engineered_khz: &[40.0, -41.0, -41.0, 40.0, 40.0, -41.0, -40.0],
        delta: &[H, MQ, MH, Q, Q, MQ, MH],
        omega: &[0.1166, 0.0600, -0.0961, 0.0308, 0.0629, 0.0678, 0.1214],
        channel: QubitChannel::Q,
    },
    PublishedTable {
        name: "VII",
        description: "Kerr cancellation, K = 3 kHz, chi' = 6 kHz",
        chi_mhz: 2.0,
        kerr_khz: 3.0,
        chi_prime_khz: 6.0,
        target_khz: &[0.0, 0.0, 3.0, 9.0, 18.0, 30.0, 45.0],
        engineered_khz: &[0.0, 0.0, 3.0, 9.0, 18.0, 30.25, 46.25],
        delta: &[H, H, H, H, H, Q, Q],
        omega: &[0.0883, 0.0658, 0.0635, 0.0639, 0.0620, 0.0534, 0.0606],
        channel: QubitChannel::Q,
    },
    PublishedTable {
        name: "VIII",
        description: "error-transparent Z rotation with Kerr cancellation",
        chi_mhz: 2.0,
        kerr_khz: 3.0,
        chi_prime_khz: 6.0,
        target_khz: &[20.0, -20.0, -17.0, 29.0, 38.0, 10.0, 25.0],
        engineered_khz: &[20.0, -20.0, -17.0, 29.0, 38.0, 9.0, 24.0],
        delta: &[H, MH, MQ, H, Q, H, H],
        omega: &[0.0949, 0.0659, 0.0344, 0.0838, 0.0588, 0.0257, 0.0527],
        channel: QubitChannel::Q,
    },
    PublishedTable {
        name: "IX",
        description: "controlled Z rotation, drives on ancilla a",
        chi_mhz: 2.56,
        kerr_khz: 0.0,
        chi_prime_khz: 0.0,
        target_khz: &[5.0, -5.0, -5.0, 5.0, 5.0],
        engineered_khz: &[5.0, -5.0, -5.0, 5.0, 5.0],
        delta: &[H, MQ, MH, MH, MH],
        omega: &[0.0393, 0.0212, 0.0365, 0.0243, 0.0175],
        channel: QubitChannel::A,
    },
    PublishedTable {
        name: "X",
        description: "controlled Z rotation, drives on ancilla b",
        chi_mhz: 2.56,
        kerr_khz: 0.0,
        chi_prime_khz: 0.0,
        target_khz: &[5.0, -5.0, -5.0, 5.0, 5.0],
        engineered_khz: &[5.0, -5.0, -5.0, 5.0, 5.0],
        delta: &[H, MQ, MH, MH, MH],
        omega: &[0.0393, 0.0212, 0.0365, 0.0243, 0.0175],
        channel: QubitChannel::B,
    },
    PublishedTable {
        name: "XI",
        description: "controlled Z rotation, drives on the joint ancilla c",
        chi_mhz: 2.56,
        kerr_khz: 0.0,
        chi_prime_khz: 0.0,
        target_khz: &[-10.0, 0.0, 0.0, -10.0, -10.0, 0.0, 0.0, -10.0, -10.0],
        engineered_khz: &[-10.0, 0.0, 0.0, -10.0, -10.0, 0.0, 0.0, -10.0, -10.0],
        delta: &[MH, Q, H, MQ, MH, MQ, MQ, MH, MH],
        omega: &[0.0280, 0.0197, 0.0268, 0.0245, 0.0421, 0.0257, 0.00486, 0.0379, 0.0633],
        channel: QubitChannel::C,
    },
];

/// All published tables in order I–XI.
pub fn all() -> &'static [PublishedTable] {
    &TABLES
}

/// Looks up a table by its roman numeral.
pub fn table(name: &str) -> Option<&'static PublishedTable> {
    TABLES.iter().find(|t| t.name.eq_ignore_ascii_case(name))
}

impl PublishedTable {
    pub fn deltas(&self) -> Vec<Rational> {
        self.delta.iter().map(|&(p, q)| Rational::new(p, q)).collect()
    }

    /// One tone per Fock index.
    pub fn tones(&self) -> Vec<DriveTone> {
        self.deltas()
            .into_iter()
            .zip(self.omega)
            .enumerate()
            .map(|(m, (d, o))| DriveTone::new(m, *o, d))
            .collect()
    }

    /// Drive specification with the given envelope, on the table's ancilla.
    pub fn drive(&self, envelope: Envelope) -> DriveSpec {
        DriveSpec::new(self.tones(), envelope).on(self.channel)
    }

    /// Largest Fock index listed.
    pub fn n_max(&self) -> usize {
        self.omega.len() - 1
    }

    /// Single-cavity parameters with the table's χ, K and χ′.
    pub fn system_params(&self, n_cut: usize) -> SystemParams {
        SystemParams::new(self.chi_mhz, n_cut)
            .with_kerr_khz(self.kerr_khz)
            .with_chi_prime_khz(self.chi_prime_khz)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_have_consistent_lengths() {
        for t in all() {
            let n = t.omega.len();
            assert_eq!(t.delta.len(), n, "{}", t.name);
            assert_eq!(t.target_khz.len(), n, "{}", t.name);
            assert_eq!(t.engineered_khz.len(), n, "{}", t.name);
        }
        assert_eq!(all().len(), 11);
    }

    #[test]
    fn lookup() {
        assert_eq!(table("vii").unwrap().chi_mhz, 2.0);
        assert!(table("XII").is_none());
        assert_eq!(table("VI").unwrap().tones()[2].omega.re, -0.0961);
    }
}
