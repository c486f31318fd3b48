// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{PndError, Result};

/// One tensor factor of a composite space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subsystem {
    pub label: String,
    pub dim: usize,
}

/// Ordered list of labelled tensor factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertDims {
    subsystems: Vec<Subsystem>,
}

impl HilbertDims {
    /// Builds a composite space. Labels must be unique and dimensions positive.
    pub fn new(subsystems: Vec<Subsystem>) -> Result<Self> {
        if subsystems.is_empty() {
            return Err(PndError::InvalidParameter("empty subsystem list".into()));
        }
        for (i, s) in subsystems.iter().enumerate() {
            if s.dim == 0 {
                return Err(PndError::InvalidParameter(format!(
                    "subsystem `{}` has zero dimension",
                    s.label
                )));
            }
            if subsystems[..i].iter().any(|o| o.label == s.label) {
                return Err(PndError::InvalidParameter(format!(
                    "duplicate subsystem label `{}`",
                    s.label
                )));
            }
        }
        Ok(Self { subsystems })
    }

    /// A single factor of the given dimension.
    pub fn single(label: &str, dim: usize) -> Self {
        Self {
            subsystems: vec![Subsystem {
                label: label.to_string(),
                dim: dim.max(1),
            }],
        }
    }

    /// A cavity truncated at `n_cut` photons (dimension `n_cut + 1`).
    pub fn cavity(label: &str, n_cut: usize) -> Self {
        Self::single(label, n_cut + 1)
    }

    /// A two-level ancilla.
    pub fn qubit(label: &str) -> Self {
        Self::single(label, 2)
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn total_dim(&self) -> usize {
        self.subsystems.iter().map(|s| s.dim).product()
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.subsystems.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| PndError::UnknownLabel(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.subsystems[self.position(label)?].dim)
    }

    /// Tensor-product concatenation `self ⊗ other`.
    pub fn concat(&self, other: &HilbertDims) -> Result<Self> {
        let mut subs = self.subsystems.clone();
        subs.extend(other.subsystems.iter().cloned());
        Self::new(subs)
    }

    /// Sub-space made of the listed labels, in the order they appear in `self`.
    pub fn keep(&self, labels: &[&str]) -> Result<Self> {
        for l in labels {
            self.position(l)?;
        }
        let subs = self
            .subsystems
            .iter()
            .filter(|s| labels.contains(&s.label.as_str()))
            .cloned()
            .collect();
        Self::new(subs)
    }

    /// Row-major strides: the last factor varies fastest.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.subsystems.len()];
        for i in (0..self.subsystems.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.subsystems[i + 1].dim;
        }
        strides
    }

    /// Flat index of a multi-index.
    pub fn index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.subsystems.len() {
            return Err(PndError::DimensionMismatch(format!(
                "expected {} digits, got {}",
                self.subsystems.len(),
                digits.len()
            )));
        }
        let mut idx = 0;
        for (d, s) in digits.iter().zip(&self.subsystems) {
            if *d >= s.dim {
                return Err(PndError::DimensionMismatch(format!(
                    "digit {} out of range for `{}` (dim {})",
                    d, s.label, s.dim
                )));
            }
            idx = idx * s.dim + d;
        }
        Ok(idx)
    }

    /// Multi-index of a flat index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.subsystems.len()];
        for (slot, s) in out.iter_mut().zip(&self.subsystems).rev() {
            *slot = index % s.dim;
            index /= s.dim;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_dim_is_product() {
        let d = HilbertDims::cavity("a", 4)
            .concat(&HilbertDims::cavity("b", 4))
            .unwrap()
            .concat(&HilbertDims::qubit("qa"))
            .unwrap();
        assert_eq!(d.total_dim(), 50);
        assert_eq!(d.strides(), vec![10, 2, 1]);
    }

    #[test]
    fn index_and_digits_round_trip() {
        let d = HilbertDims::cavity("a", 3).concat(&HilbertDims::qubit("q")).unwrap();
        for i in 0..d.total_dim() {
            assert_eq!(d.index(&d.digits(i)).unwrap(), i);
        }
        assert_eq!(d.index(&[2, 1]).unwrap(), 5);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let a = HilbertDims::qubit("q");
        assert!(a.concat(&a).is_err());
    }

    #[test]
    fn unknown_label_reported() {
        let a = HilbertDims::qubit("q");
        assert_eq!(a.position("x"), Err(PndError::UnknownLabel("x".into())));
    }
}
