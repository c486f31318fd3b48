// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::SymmetricEigen;

use crate::error::{PndError, Result};
use crate::{CMatrix, CVector, C64};

use super::{CompositeOperator, HilbertDims};

/// Fock weight beyond the truncation edge above which a cat state is
/// flagged as leaking.
pub const CAT_LEAK_WARNING: f64 = 1e-4;

/// Pure state on a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    dims: HilbertDims,
    amplitudes: CVector,
}

impl QuantumState {
    pub fn new(dims: HilbertDims, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != dims.total_dim() {
            return Err(PndError::DimensionMismatch(format!(
                "{} amplitudes for a space of dimension {}",
                amplitudes.len(),
                dims.total_dim()
            )));
        }
        Ok(Self { dims, amplitudes })
    }

    /// Computational basis state given by one digit per subsystem.
    pub fn basis(dims: HilbertDims, digits: &[usize]) -> Result<Self> {
        let idx = dims.index(digits)?;
        let mut v = CVector::zeros(dims.total_dim());
        v[idx] = C64::new(1.0, 0.0);
        Ok(Self { dims, amplitudes: v })
    }

    /// Fock state `|n⟩` of a cavity truncated at `n_cut`.
    pub fn fock(label: &str, n_cut: usize, n: usize) -> Result<Self> {
        Self::basis(HilbertDims::cavity(label, n_cut), &[n])
    }

    /// Qubit ground state `|g⟩`.
    pub fn ground(label: &str) -> Self {
        Self::basis(HilbertDims::qubit(label), &[0]).expect("valid qubit digit")
    }

    /// Superposition of cavity Fock states with the given coefficients.
    pub fn from_fock_coefficients(label: &str, n_cut: usize, coeffs: &[(usize, C64)]) -> Result<Self> {
        let mut v = CVector::zeros(n_cut + 1);
        for &(n, c) in coeffs {
            if n > n_cut {
                return Err(PndError::InvalidParameter(format!(
                    "Fock index {n} above truncation {n_cut}"
                )));
            }
            v[n] += c;
        }
        Self::new(HilbertDims::cavity(label, n_cut), v)
    }

    /// Tensor product of states in the given order.
    pub fn tensor(states: &[QuantumState]) -> Result<Self> {
        let (first, rest) = states
            .split_first()
            .ok_or_else(|| PndError::DimensionMismatch("tensor of an empty list".into()))?;
        let mut dims = first.dims.clone();
        let mut v = first.amplitudes.clone();
        for s in rest {
            dims = dims.concat(&s.dims)?;
            v = v.kronecker(&s.amplitudes);
        }
        Ok(Self { dims, amplitudes: v })
    }

    pub fn dims(&self) -> &HilbertDims {
        &self.dims
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(PndError::InvalidParameter("cannot normalize the zero vector".into()));
        }
        Ok(Self {
            dims: self.dims.clone(),
            amplitudes: &self.amplitudes / C64::new(n, 0.0),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QuantumState) -> Result<C64> {
        if self.dims != other.dims {
            return Err(PndError::DimensionMismatch(
                "inner product of states on different spaces".into(),
            ));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `op |self⟩` (unnormalized).
    pub fn apply(&self, op: &CompositeOperator) -> Result<Self> {
        if op.dims() != &self.dims {
            return Err(PndError::DimensionMismatch(
                "operator and state on different spaces".into(),
            ));
        }
        Ok(Self {
            dims: self.dims.clone(),
            amplitudes: op.matrix() * &self.amplitudes,
        })
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            dims: self.dims.clone(),
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }

    /// Mean photon number of a single-cavity state.
    pub fn mean_photon_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }
}

/// Density matrix on a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: HilbertDims,
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(dims: HilbertDims, matrix: CMatrix) -> Result<Self> {
        let d = dims.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(PndError::DimensionMismatch(format!(
                "matrix is {}x{}, space has dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                d
            )));
        }
        Ok(Self { dims, matrix })
    }

    pub fn from_pure(psi: &QuantumState) -> Self {
        psi.to_density()
    }

    pub fn dims(&self) -> &HilbertDims {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Frobenius norm of `ρ − ρ†`.
    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        SymmetricEigen::new(h).eigenvalues.min()
    }

    /// Checks Hermiticity, unit trace and positivity within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > tol {
            return Err(PndError::Tolerance(format!(
                "density matrix non-Hermitian by {herm:.3e}"
            )));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol {
            return Err(PndError::Tolerance(format!("trace {tr} deviates from 1")));
        }
        let lmin = self.min_eigenvalue();
        if lmin < -tol {
            return Err(PndError::Tolerance(format!("negative eigenvalue {lmin:.3e}")));
        }
        Ok(())
    }

    /// Reduced state on the listed subsystems (kept in their original order).
    pub fn partial_trace(&self, keep: &[&str]) -> Result<DensityMatrix> {
        let kept = self.dims.keep(keep)?;
        let subs = self.dims.subsystems();
        let keep_mask: Vec<bool> = subs.iter().map(|s| keep.contains(&s.label.as_str())).collect();
        let d = self.dims.total_dim();
        let mut kept_idx = vec![0usize; d];
        let mut traced_idx = vec![0usize; d];
        for i in 0..d {
            let digits = self.dims.digits(i);
            let (mut k, mut t) = (0usize, 0usize);
            for ((dg, s), &is_kept) in digits.iter().zip(subs).zip(&keep_mask) {
                if is_kept {
                    k = k * s.dim + dg;
                } else {
                    t = t * s.dim + dg;
                }
            }
            kept_idx[i] = k;
            traced_idx[i] = t;
        }
        let dk = kept.total_dim();
        let mut out = CMatrix::zeros(dk, dk);
        for j in 0..d {
            for i in 0..d {
                if traced_idx[i] == traced_idx[j] {
                    out[(kept_idx[i], kept_idx[j])] += self.matrix[(i, j)];
                }
            }
        }
        Ok(DensityMatrix {
            dims: kept,
            matrix: out,
        })
    }

    /// `Σ_k K_k ρ K_k†` for Kraus operators on the same space.
    pub fn apply_kraus(&self, kraus: &[CompositeOperator]) -> Result<DensityMatrix> {
        let d = self.dims.total_dim();
        let mut out = CMatrix::zeros(d, d);
        for k in kraus {
            if k.dims() != &self.dims {
                return Err(PndError::DimensionMismatch(
                    "Kraus operator on a different space".into(),
                ));
            }
            out += k.matrix() * &self.matrix * k.matrix().adjoint();
        }
        Ok(DensityMatrix {
            dims: self.dims.clone(),
            matrix: out,
        })
    }

    /// Expectation value `Tr(ρ O)`.
    pub fn expectation(&self, op: &CompositeOperator) -> Result<C64> {
        if op.dims() != &self.dims {
            return Err(PndError::DimensionMismatch(
                "operator and state on different spaces".into(),
            ));
        }
        Ok((&self.matrix * op.matrix()).trace())
    }
}

/// Overlap fidelity `⟨ψ|ρ|ψ⟩`.
pub fn state_fidelity(rho: &DensityMatrix, psi: &QuantumState) -> Result<f64> {
    if rho.dims() != psi.dims() {
        return Err(PndError::DimensionMismatch(format!(
            "state on {:?}, density matrix on {:?}",
            psi.dims().labels(),
            rho.dims().labels()
        )));
    }
    let v = psi.amplitudes();
    let f = v.dotc(&(rho.matrix() * v));
    Ok(f.re.clamp(0.0, 1.0))
}

/// Root fidelity `√⟨ψ|ρ|ψ⟩`, the Uhlmann fidelity against a pure state.
pub fn root_state_fidelity(rho: &DensityMatrix, psi: &QuantumState) -> Result<f64> {
    Ok(state_fidelity(rho, psi)?.sqrt())
}

/// Cat-state parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatParity {
    Even,
    Odd,
}

/// A truncated cat state together with the weight lost to truncation.
#[derive(Debug, Clone)]
pub struct CatState {
    pub state: QuantumState,
    /// Fraction of the untruncated norm sitting above `N_cut`.
    pub leaked_weight: f64,
}

impl CatState {
    pub fn exceeds_leak_threshold(&self) -> bool {
        self.leaked_weight > CAT_LEAK_WARNING
    }
}

/// `(|α⟩ ± |−α⟩)/norm` on a cavity labelled `a`, truncated at `n_cut`.
pub fn cat_state(alpha: C64, parity: CatParity, n_cut: usize) -> Result<CatState> {
    cat_state_labeled("a", alpha, parity, n_cut)
}

/// Same as [`cat_state`] with an explicit cavity label.
pub fn cat_state_labeled(label: &str, alpha: C64, parity: CatParity, n_cut: usize) -> Result<CatState> {
    let a2 = alpha.norm_sqr();
    let sign = match parity {
        CatParity::Even => 1.0,
        CatParity::Odd => -1.0,
    };
    // Untruncated norm² of Σ_n c_n (1 ± (−1)^n)|n⟩ with c_n the coherent amplitudes.
    let full = 2.0 * (1.0 + sign * (-2.0 * a2).exp());
    if full < 1e-300 {
        return Err(PndError::InvalidParameter(
            "odd cat with alpha = 0 has zero norm".into(),
        ));
    }
    let mut v = CVector::zeros(n_cut + 1);
    let mut coherent = C64::new((-a2 / 2.0).exp(), 0.0);
    for n in 0..=n_cut {
        if n > 0 {
            coherent *= alpha / (n as f64).sqrt();
        }
        let par = if n % 2 == 0 { 1.0 } else { -1.0 };
        v[n] = coherent * (1.0 + sign * par);
    }
    let kept = v.norm_squared();
    if kept == 0.0 {
        return Err(PndError::InvalidParameter(
            "cat state has no support below N_cut".into(),
        ));
    }
    let leaked_weight = (1.0 - kept / full).max(0.0);
    v /= C64::new(kept.sqrt(), 0.0);
    Ok(CatState {
        state: QuantumState::new(HilbertDims::cavity(label, n_cut), v)?,
        leaked_weight,
    })
}
