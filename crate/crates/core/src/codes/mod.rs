// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Bosonic logical codes and the end-to-end gate experiments.

mod experiments;
mod report;
pub mod snap;

pub use experiments::{
    cphase_experiment, error_transparency_check, kerr_cancel_experiment, micromotion_experiment, pi8_gate_experiment,
    theta_scaling_experiment, CPhaseSettings, GateShape, KerrCancelSettings, MicromotionSettings, Pi8Scheme,
    Pi8Settings, ThetaScanSettings, TransparencySettings,
};
pub use report::{ExperimentReport, SeriesPoint, WignerSnapshot};
pub use snap::{calibrate_snap, run_snap, snap_gate, SnapGate, SnapOptions, SnapRun};

use serde::{Deserialize, Serialize};

use crate::error::{PndError, Result};
use crate::quantum::QuantumState;
use crate::C64;

/// Code family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CodeKind {
    /// `|0_k⟩ = (|0⟩ + |4⟩)/√2`, `|1_k⟩ = |2⟩`.
    Kitten,
    /// Code words on the grid `j·d_n`: even `j` build `|0_L⟩`, odd `j` build
    /// `|1_L⟩`, with `f_n[j]` the (unnormalized) coefficient of `|j·d_n⟩`.
    RotationSymmetric { d_n: usize, f_n: Vec<f64> },
}

/// `(n, c_n)` pairs of one codeword.
type FockWeights = Vec<(usize, f64)>;

/// A logical qubit encoded in one cavity truncated at `n_cut`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogicalCode {
    pub kind: CodeKind,
    pub n_cut: usize,
}

impl LogicalCode {
    pub fn kitten(n_cut: usize) -> Result<Self> {
        let code = Self {
            kind: CodeKind::Kitten,
            n_cut,
        };
        code.validate()?;
        Ok(code)
    }

    pub fn rotation_symmetric(d_n: usize, f_n: Vec<f64>, n_cut: usize) -> Result<Self> {
        let code = Self {
            kind: CodeKind::RotationSymmetric { d_n, f_n },
            n_cut,
        };
        code.validate()?;
        Ok(code)
    }

    fn coefficients(&self) -> (FockWeights, FockWeights) {
        match &self.kind {
            CodeKind::Kitten => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                (vec![(0, h), (4, h)], vec![(2, 1.0)])
            }
            CodeKind::RotationSymmetric { d_n, f_n } => {
                let mut zero = Vec::new();
                let mut one = Vec::new();
                for (j, f) in f_n.iter().enumerate() {
                    if *f == 0.0 {
                        continue;
                    }
                    if j % 2 == 0 {
                        zero.push((j * d_n, *f));
                    } else {
                        one.push((j * d_n, *f));
                    }
                }
                let norm = |v: &mut Vec<(usize, f64)>| {
                    let s = v.iter().map(|(_, f)| f * f).sum::<f64>().sqrt();
                    v.iter_mut().for_each(|(_, f)| *f /= s);
                };
                norm(&mut zero);
                norm(&mut one);
                (zero, one)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let CodeKind::RotationSymmetric { d_n, f_n } = &self.kind {
            if *d_n == 0 {
                return Err(PndError::InvalidParameter("d_n must be positive".into()));
            }
            let has = |parity: usize| f_n.iter().enumerate().any(|(j, f)| j % 2 == parity && *f != 0.0);
            if !has(0) || !has(1) {
                return Err(PndError::InvalidParameter(
                    "both code words need a nonzero coefficient".into(),
                ));
            }
            if f_n.iter().any(|f| !f.is_finite()) {
                return Err(PndError::InvalidParameter("non-finite code coefficient".into()));
            }
        }
        let (zero, one) = self.coefficients();
        if let Some(n) = zero.iter().chain(&one).map(|(n, _)| *n).max() {
            if n > self.n_cut {
                return Err(PndError::InvalidParameter(format!(
                    "code word uses |{n}⟩ beyond n_cut = {}",
                    self.n_cut
                )));
            }
        }
        Ok(())
    }

    /// Largest photon number used by the code words.
    pub fn max_photon(&self) -> usize {
        let (zero, one) = self.coefficients();
        zero.iter().chain(&one).map(|(n, _)| *n).max().unwrap_or(0)
    }

    pub fn zero(&self, label: &str) -> Result<QuantumState> {
        self.logical(label, C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn one(&self, label: &str) -> Result<QuantumState> {
        self.logical(label, C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    }

    /// `(|0_L⟩ + |1_L⟩)/√2`.
    pub fn plus(&self, label: &str) -> Result<QuantumState> {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        self.logical(label, h, h)
    }

    /// `α|0_L⟩ + β|1_L⟩`, normalized.
    pub fn logical(&self, label: &str, alpha: C64, beta: C64) -> Result<QuantumState> {
        self.validate()?;
        let (zero, one) = self.coefficients();
        let mut coeffs: Vec<(usize, C64)> = zero.iter().map(|&(n, f)| (n, alpha * f)).collect();
        coeffs.extend(one.iter().map(|&(n, f)| (n, beta * f)));
        QuantumState::from_fock_coefficients(label, self.n_cut, &coeffs)?.normalized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kitten_words_are_orthonormal() {
        let code = LogicalCode::kitten(6).unwrap();
        let z = code.zero("a").unwrap();
        let o = code.one("a").unwrap();
        assert!((z.inner(&z).unwrap().re - 1.0).abs() < 1e-14);
        assert!(z.inner(&o).unwrap().norm() < 1e-14);
        assert!((z.amplitudes()[4].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(o.amplitudes()[2], C64::new(1.0, 0.0));
    }

    #[test]
    fn kitten_is_the_smallest_binomial_code() {
        let a = LogicalCode::kitten(6).unwrap();
        let b = LogicalCode::rotation_symmetric(2, vec![1.0, 1.0, 1.0], 6).unwrap();
        let (pa, pb) = (a.plus("a").unwrap(), b.plus("a").unwrap());
        assert!((pa.amplitudes() - pb.amplitudes()).norm() < 1e-14);
    }

    #[test]
    fn rotation_symmetric_support() {
        let code = LogicalCode::rotation_symmetric(3, vec![1.0, 2.0, 1.0, 0.5], 9).unwrap();
        let z = code.zero("a").unwrap();
        for (n, c) in z.amplitudes().iter().enumerate() {
            if c.norm() > 0.0 {
                assert_eq!(n % 6, 0);
            }
        }
        let o = code.one("a").unwrap();
        for (n, c) in o.amplitudes().iter().enumerate() {
            if c.norm() > 0.0 {
                assert_eq!(n % 6, 3);
            }
        }
        assert_eq!(code.max_photon(), 9);
    }

    #[test]
    fn rejects_words_beyond_cutoff() {
        assert!(LogicalCode::kitten(3).is_err());
        assert!(LogicalCode::rotation_symmetric(2, vec![1.0, 0.0, 1.0], 6).is_err());
        assert!(LogicalCode::rotation_symmetric(3, vec![1.0, 1.0, 1.0], 5).is_err());
    }
}
