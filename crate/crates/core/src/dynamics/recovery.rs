// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{PndError, Result};
use crate::quantum::{CompositeOperator, DensityMatrix, HilbertDims, QuantumState};
use crate::{CMatrix, CVector, C64};

/// Kitten code words `|0_k⟩ = (|0⟩ + |4⟩)/√2` and `|1_k⟩ = |2⟩`.
pub fn kitten_code_states(label: &str, n_cut: usize) -> Result<(QuantumState, QuantumState)> {
    if n_cut < 4 {
        return Err(PndError::InvalidParameter(format!(
            "kitten code needs n_cut >= 4, got {n_cut}"
        )));
    }
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let zero = QuantumState::from_fock_coefficients(label, n_cut, &[(0, h), (4, h)])?;
    let one = QuantumState::fock(label, n_cut, 2)?;
    Ok((zero, one))
}

fn ket(n_dim: usize, entries: &[(usize, f64)]) -> CVector {
    let mut v = CVector::zeros(n_dim);
    for &(i, x) in entries {
        v[i] = C64::new(x, 0.0);
    }
    v
}

/// Kraus operators of the single-loss recovery for the kitten code on one
/// cavity: identity on the code space, `|3⟩ → |0_k⟩` and `|1⟩ → |1_k⟩` on the
/// error space, and every remaining basis direction sent to the failure
/// state `|1⟩`.
pub fn kitten_recovery_kraus(label: &str, n_cut: usize) -> Result<Vec<CompositeOperator>> {
    let (zero, one) = kitten_code_states(label, n_cut)?;
    let d = n_cut + 1;
    let z = zero.amplitudes().clone();
    let o = one.amplitudes().clone();
    let dims = HilbertDims::cavity(label, n_cut);
    let mut kraus = Vec::new();
    let code = &z * z.adjoint() + &o * o.adjoint();
    kraus.push(CompositeOperator::new(dims.clone(), code)?);
    let e3 = ket(d, &[(3, 1.0)]);
    let e1 = ket(d, &[(1, 1.0)]);
    let correct = &z * e3.adjoint() + &o * e1.adjoint();
    kraus.push(CompositeOperator::new(dims.clone(), correct)?);
    let mut rest = vec![ket(d, &[(0, FRAC_1_SQRT_2), (4, -FRAC_1_SQRT_2)])];
    rest.extend((5..d).map(|n| ket(d, &[(n, 1.0)])));
    for v in rest {
        let m: CMatrix = &e1 * v.adjoint();
        kraus.push(CompositeOperator::new(dims.clone(), m)?);
    }
    Ok(kraus)
}

/// Applies the kitten recovery to cavity `label` of a (possibly composite)
/// density matrix.
pub fn kitten_recovery(rho: &DensityMatrix, label: &str) -> Result<DensityMatrix> {
    let dim = rho.dims().dim_of(label)?;
    if dim < 5 {
        return Err(PndError::InvalidParameter(format!(
            "cavity {label} has dimension {dim} < 5"
        )));
    }
    let local = kitten_recovery_kraus(label, dim - 1)?;
    let embedded = local.iter().map(|k| k.embed(rho.dims())).collect::<Result<Vec<_>>>()?;
    rho.apply_kraus(&embedded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::state_fidelity;

    #[test]
    fn kraus_completeness() {
        for n_cut in [4, 6, 9] {
            let ks = kitten_recovery_kraus("a", n_cut).unwrap();
            let sum = ks.iter().fold(CMatrix::zeros(n_cut + 1, n_cut + 1), |acc, k| {
                acc + k.matrix().adjoint() * k.matrix()
            });
            assert!((sum - CMatrix::identity(n_cut + 1, n_cut + 1)).norm() < 1e-12);
        }
    }

    #[test]
    fn code_states_are_fixed() {
        let (z, o) = kitten_code_states("a", 6).unwrap();
        for s in [z, o] {
            let out = kitten_recovery(&s.to_density(), "a").unwrap();
            assert!((out.matrix() - s.to_density().matrix()).norm() < 1e-14);
        }
    }

    #[test]
    fn single_loss_on_zero_is_corrected() {
        let (z, _) = kitten_code_states("a", 6).unwrap();
        let a = CompositeOperator::annihilation(6).unwrap();
        let err = z.apply(&a).unwrap().normalized().unwrap();
        let out = kitten_recovery(&err.to_density(), "a").unwrap();
        assert!((state_fidelity(&out, &z).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn too_small_cavity() {
        assert!(kitten_code_states("a", 3).is_err());
    }
}
