// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{PndError, Result};

/// Kind of target spectrum. Energies are ordinary frequencies in kHz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetKind {
    /// `E_n = K3 · n(n−1)(n−2)`.
    ThreePhoton {
        k3_khz: f64,
    },
    /// `E_n = P · (−1)^(n+1)`.
    Parity {
        p_khz: f64,
    },
    /// `+g_R` on `n mod 2d ∈ {0, d+1, …, 2d−1}`, `−g_R` on `{1, …, d}`.
    ZRotation {
        g_r_khz: f64,
        d_n: usize,
    },
    /// `E_n = (K/2) · n(n−1)`.
    KerrCancel {
        kerr_khz: f64,
    },
    /// Three marginal patterns for the two-cavity controlled rotation.
    CPhase {
        g_cr_khz: f64,
        d_na: usize,
        d_nb: usize,
    },
    Custom {
        energies_khz: Vec<f64>,
    },
}

/// Target spectrum request for Fock indices `0..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetSpec {
    #[serde(flatten)]
    pub kind: TargetKind,
    pub n_max: usize,
}

impl TargetSpec {
    pub fn new(kind: TargetKind, n_max: usize) -> Self {
        Self { kind, n_max }
    }
}

/// Target energies in kHz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetEnergies {
    Single(Vec<f64>),
    /// Marginals for qubits a, b (indexed by `n_a`, `n_b ≤ n_max`) and c
    /// (indexed by `n_a + n_b ≤ 2 n_max`).
    TwoCavity {
        a: Vec<f64>,
        b: Vec<f64>,
        c: Vec<f64>,
    },
}

impl TargetEnergies {
    pub fn single(&self) -> Option<&[f64]> {
        match self {
            TargetEnergies::Single(e) => Some(e),
            TargetEnergies::TwoCavity { .. } => None,
        }
    }

    pub fn max_abs_khz(&self) -> f64 {
        let max = |v: &[f64]| v.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
        match self {
            TargetEnergies::Single(e) => max(e),
            TargetEnergies::TwoCavity { a, b, c } => max(a).max(max(b)).max(max(c)),
        }
    }
}

fn rotation_sign(n: usize, d: usize) -> f64 {
    let r = n % (2 * d);
    if (1..=d).contains(&r) {
        -1.0
    } else {
        1.0
    }
}

fn joint_pattern(n: usize, d_a: usize, d_b: usize) -> bool {
    let period = d_a + d_b;
    let d = d_a.min(d_b);
    let r = n % period;
    r == 0 || r > period - d
}

/// Builds the target energies for a request.
pub fn make_target(spec: &TargetSpec) -> Result<TargetEnergies> {
    let ns = 0..=spec.n_max;
    let energies = match &spec.kind {
        TargetKind::ThreePhoton { k3_khz } => ns
            .map(|n| {
                let n = n as f64;
                k3_khz * n * (n - 1.0) * (n - 2.0)
            })
            .collect(),
        TargetKind::Parity { p_khz } => ns.map(|n| if n % 2 == 0 { -p_khz } else { *p_khz }).collect(),
        TargetKind::ZRotation { g_r_khz, d_n } => {
            if *d_n == 0 {
                return Err(PndError::UnsupportedPattern("d_n must be at least 1".into()));
            }
            ns.map(|n| g_r_khz * rotation_sign(n, *d_n)).collect()
        }
        TargetKind::KerrCancel { kerr_khz } => ns
            .map(|n| {
                let n = n as f64;
                kerr_khz / 2.0 * n * (n - 1.0)
            })
            .collect(),
        TargetKind::CPhase { g_cr_khz, d_na, d_nb } => {
            if *d_na == 0 || *d_nb == 0 {
                return Err(PndError::UnsupportedPattern("d_na and d_nb must be at least 1".into()));
            }
            let a = (0..=spec.n_max)
                .map(|n| g_cr_khz / 4.0 * rotation_sign(n, *d_na))
                .collect();
            let b = (0..=spec.n_max)
                .map(|n| g_cr_khz / 4.0 * rotation_sign(n, *d_nb))
                .collect();
            let c = (0..=2 * spec.n_max)
                .map(|n| {
                    if joint_pattern(n, *d_na, *d_nb) {
                        -g_cr_khz / 2.0
                    } else {
                        0.0
                    }
                })
                .collect();
            return Ok(TargetEnergies::TwoCavity { a, b, c });
        }
        TargetKind::Custom { energies_khz } => {
            if energies_khz.len() < spec.n_max + 1 {
                return Err(PndError::InvalidParameter(format!(
                    "custom target lists {} energies but n_max = {}",
                    energies_khz.len(),
                    spec.n_max
                )));
            }
            energies_khz[..=spec.n_max].to_vec()
        }
    };
    Ok(TargetEnergies::Single(energies))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(kind: TargetKind) -> Vec<f64> {
        make_target(&TargetSpec::new(kind, 6))
            .unwrap()
            .single()
            .unwrap()
            .to_vec()
    }

    #[test]
    fn published_target_rows() {
        assert_eq!(
            single(TargetKind::ThreePhoton { k3_khz: 0.5 }),
            vec![0.0, 0.0, 0.0, 3.0, 12.0, 30.0, 60.0]
        );
        assert_eq!(
            single(TargetKind::Parity { p_khz: 20.0 }),
            vec![-20.0, 20.0, -20.0, 20.0, -20.0, 20.0, -20.0]
        );
        assert_eq!(
            single(TargetKind::ZRotation { g_r_khz: 20.0, d_n: 2 }),
            vec![20.0, -20.0, -20.0, 20.0, 20.0, -20.0, -20.0]
        );
        assert_eq!(
            single(TargetKind::KerrCancel { kerr_khz: 3.0 }),
            vec![0.0, 0.0, 3.0, 9.0, 18.0, 30.0, 45.0]
        );
    }

    #[test]
    fn cphase_marginals() {
        let t = make_target(&TargetSpec::new(
            TargetKind::CPhase {
                g_cr_khz: 20.0,
                d_na: 2,
                d_nb: 2,
            },
            4,
        ))
        .unwrap();
        match t {
            TargetEnergies::TwoCavity { a, b, c } => {
                assert_eq!(a, vec![5.0, -5.0, -5.0, 5.0, 5.0]);
                assert_eq!(b, a);
                assert_eq!(c, vec![-10.0, 0.0, 0.0, -10.0, -10.0, 0.0, 0.0, -10.0, -10.0]);
            }
            _ => panic!("expected marginals"),
        }
    }

    #[test]
    fn zero_distance_is_unsupported() {
        let r = make_target(&TargetSpec::new(TargetKind::ZRotation { g_r_khz: 1.0, d_n: 0 }, 3));
        assert!(matches!(r, Err(PndError::UnsupportedPattern(_))));
    }

    #[test]
    fn json_round_trip() {
        let s = TargetSpec::new(TargetKind::ThreePhoton { k3_khz: 0.5 }, 6);
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.contains("\"kind\":\"three_photon\""));
        assert_eq!(serde_json::from_str::<TargetSpec>(&j).unwrap(), s);
    }
}
