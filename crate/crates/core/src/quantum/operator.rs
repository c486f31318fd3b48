// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use std::ops::{Add, Mul, Sub};

use crate::error::{PndError, Result};
use crate::{CMatrix, C64};

use super::HilbertDims;

/// Dense operator on a labelled composite space.
///
/// When the operator is a Hamiltonian term it is stored divided by ħ, in
/// rad/µs.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeOperator {
    dims: HilbertDims,
    matrix: CMatrix,
}

impl CompositeOperator {
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

    pub fn zeros(dims: HilbertDims) -> Self {
        let d = dims.total_dim();
        Self {
            dims,
            matrix: CMatrix::zeros(d, d),
        }
    }

    pub fn identity(dims: HilbertDims) -> Self {
        let d = dims.total_dim();
        Self {
            dims,
            matrix: CMatrix::identity(d, d),
        }
    }

    /// Truncated annihilation operator on a cavity labelled `a`.
    pub fn annihilation(n_cut: usize) -> Result<Self> {
        Self::annihilation_labeled("a", n_cut)
    }

    /// Truncated annihilation operator with entries `√n` at `(n−1, n)`.
    pub fn annihilation_labeled(label: &str, n_cut: usize) -> Result<Self> {
        if n_cut < 1 {
            return Err(PndError::InvalidParameter("N_cut must be at least 1".into()));
        }
        let d = n_cut + 1;
        let mut m = CMatrix::zeros(d, d);
        for n in 1..d {
            m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
        }
        Ok(Self {
            dims: HilbertDims::cavity(label, n_cut),
            matrix: m,
        })
    }

    /// Photon-number operator `a†a`.
    pub fn number(label: &str, n_cut: usize) -> Self {
        let d = n_cut + 1;
        let m = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(i as f64, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self {
            dims: HilbertDims::cavity(label, n_cut),
            matrix: m,
        }
    }

    /// Fock projector `|n⟩⟨n|`.
    pub fn fock_projector(label: &str, n_cut: usize, n: usize) -> Result<Self> {
        if n > n_cut {
            return Err(PndError::InvalidParameter(format!(
                "Fock index {n} above truncation {n_cut}"
            )));
        }
        let mut m = CMatrix::zeros(n_cut + 1, n_cut + 1);
        m[(n, n)] = C64::new(1.0, 0.0);
        Ok(Self {
            dims: HilbertDims::cavity(label, n_cut),
            matrix: m,
        })
    }

    /// Qubit lowering operator `σ− = |g⟩⟨e|`.
    pub fn sigma_minus(label: &str) -> Self {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        Self {
            dims: HilbertDims::qubit(label),
            matrix: m,
        }
    }

    /// Qubit raising operator `σ+ = |e⟩⟨g|`.
    pub fn sigma_plus(label: &str) -> Self {
        Self::sigma_minus(label).dagger()
    }

    /// `σz = |e⟩⟨e| − |g⟩⟨g|`.
    pub fn sigma_z(label: &str) -> Self {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = C64::new(-1.0, 0.0);
        m[(1, 1)] = C64::new(1.0, 0.0);
        Self {
            dims: HilbertDims::qubit(label),
            matrix: m,
        }
    }

    /// Excited-state projector `|e⟩⟨e|`.
    pub fn excited_projector(label: &str) -> Self {
        let mut m = CMatrix::zeros(2, 2);
        m[(1, 1)] = C64::new(1.0, 0.0);
        Self {
            dims: HilbertDims::qubit(label),
            matrix: m,
        }
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

    pub fn dagger(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            dims: self.dims.clone(),
            matrix: &self.matrix * c,
        }
    }

    /// Kronecker product in the given order; labels are concatenated.
    pub fn tensor(ops: &[CompositeOperator]) -> Result<Self> {
        let (first, rest) = ops
            .split_first()
            .ok_or_else(|| PndError::DimensionMismatch("tensor of an empty list".into()))?;
        let mut dims = first.dims.clone();
        let mut m = first.matrix.clone();
        for op in rest {
            dims = dims.concat(&op.dims)?;
            m = m.kronecker(&op.matrix);
        }
        Ok(Self { dims, matrix: m })
    }

    /// Embeds an operator acting on a subset of the factors of `target`,
    /// acting as identity on the remaining factors.
    pub fn embed(&self, target: &HilbertDims) -> Result<Self> {
        let local = self.dims.subsystems();
        let mut pos = Vec::with_capacity(local.len());
        for s in local {
            let p = target.position(&s.label)?;
            if target.subsystems()[p].dim != s.dim {
                return Err(PndError::DimensionMismatch(format!(
                    "subsystem `{}` has dim {} in operator and {} in target",
                    s.label,
                    s.dim,
                    target.subsystems()[p].dim
                )));
            }
            pos.push(p);
        }
        let d = target.total_dim();
        let digits: Vec<Vec<usize>> = (0..d).map(|i| target.digits(i)).collect();
        let local_index = |dg: &[usize]| pos.iter().fold(0, |acc, &p| acc * target.subsystems()[p].dim + dg[p]);
        let spectator = |dg: &[usize]| -> Vec<usize> {
            dg.iter()
                .enumerate()
                .filter(|(k, _)| !pos.contains(k))
                .map(|(_, &v)| v)
                .collect()
        };
        let locals: Vec<usize> = digits.iter().map(|dg| local_index(dg)).collect();
        let specs: Vec<Vec<usize>> = digits.iter().map(|dg| spectator(dg)).collect();
        let mut m = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                if specs[i] == specs[j] {
                    m[(i, j)] = self.matrix[(locals[i], locals[j])];
                }
            }
        }
        Ok(Self {
            dims: target.clone(),
            matrix: m,
        })
    }

    /// Operator product `self · other` on matching spaces.
    pub fn compose(&self, other: &CompositeOperator) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            dims: self.dims.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &CompositeOperator) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            dims: self.dims.clone(),
            matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix,
        })
    }

    /// Relative Frobenius norm of the anti-Hermitian part.
    pub fn hermiticity_error(&self) -> f64 {
        let norm = self.matrix.norm();
        let diff = (&self.matrix - self.matrix.adjoint()).norm();
        if norm == 0.0 {
            diff
        } else {
            diff / norm
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    fn check_same(&self, other: &CompositeOperator) -> Result<()> {
        if self.dims != other.dims {
            return Err(PndError::DimensionMismatch(format!(
                "operators on {:?} and {:?}",
                self.dims.labels(),
                other.dims.labels()
            )));
        }
        Ok(())
    }
}

impl Add for &CompositeOperator {
    type Output = Result<CompositeOperator>;
    fn add(self, rhs: &CompositeOperator) -> Self::Output {
        self.check_same(rhs)?;
        Ok(CompositeOperator {
            dims: self.dims.clone(),
            matrix: &self.matrix + &rhs.matrix,
        })
    }
}

impl Sub for &CompositeOperator {
    type Output = Result<CompositeOperator>;
    fn sub(self, rhs: &CompositeOperator) -> Self::Output {
        self.check_same(rhs)?;
        Ok(CompositeOperator {
            dims: self.dims.clone(),
            matrix: &self.matrix - &rhs.matrix,
        })
    }
}

impl Mul for &CompositeOperator {
    type Output = Result<CompositeOperator>;
    fn mul(self, rhs: &CompositeOperator) -> Self::Output {
        self.compose(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn smallest_ladder() {
        let a = CompositeOperator::annihilation(1).unwrap();
        assert_eq!(a.matrix()[(0, 1)], c(1.0));
        assert_eq!(a.matrix()[(0, 0)], c(0.0));
        assert_eq!(a.matrix()[(1, 0)], c(0.0));
        assert_eq!(a.matrix()[(1, 1)], c(0.0));
    }

    #[test]
    fn ladder_element_sqrt_two() {
        let a = CompositeOperator::annihilation(2).unwrap();
        assert!((a.matrix()[(1, 2)] - c(2f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn zero_cutoff_rejected() {
        assert!(CompositeOperator::annihilation(0).is_err());
    }

    #[test]
    fn number_operator_is_adag_a() {
        let a = CompositeOperator::annihilation(5).unwrap();
        let n = (&a.dagger() * &a).unwrap();
        for i in 0..6 {
            assert!((n.matrix()[(i, i)] - c(i as f64)).norm() < 1e-14);
        }
        assert!((n.matrix() - CompositeOperator::number("a", 5).matrix()).norm() < 1e-14);
    }

    #[test]
    fn canonical_commutator_below_edge() {
        let n_cut = 6;
        let a = CompositeOperator::annihilation(n_cut).unwrap();
        let comm = a.commutator(&a.dagger()).unwrap();
        for i in 0..n_cut {
            for j in 0..n_cut {
                let expect = if i == j { c(1.0) } else { c(0.0) };
                assert!((comm.matrix()[(i, j)] - expect).norm() < 1e-14);
            }
        }
        assert!((comm.matrix()[(n_cut, n_cut)] - c(-(n_cut as f64))).norm() < 1e-14);
    }

    #[test]
    fn pauli_algebra() {
        let sm = CompositeOperator::sigma_minus("q");
        let sp = CompositeOperator::sigma_plus("q");
        let sz = CompositeOperator::sigma_z("q");
        let comm = sp.commutator(&sm).unwrap();
        assert!((comm.matrix() - sz.matrix()).norm() < 1e-15);
        let pe = CompositeOperator::excited_projector("q");
        assert!(((&sp * &sm).unwrap().matrix() - pe.matrix()).norm() < 1e-15);
    }

    #[test]
    fn tensor_identities() {
        let i2 = CompositeOperator::identity(HilbertDims::qubit("x"));
        let j2 = CompositeOperator::identity(HilbertDims::qubit("y"));
        let t = CompositeOperator::tensor(&[i2, j2]).unwrap();
        assert_eq!(t.matrix(), &CMatrix::identity(4, 4));
        let a = CompositeOperator::annihilation(1).unwrap();
        let t = CompositeOperator::tensor(&[a, CompositeOperator::sigma_z("q")]).unwrap();
        assert_eq!(t.dims().total_dim(), 4);
    }

    #[test]
    fn tensor_product_rule() {
        let n_cut = 3;
        let a = CompositeOperator::annihilation(n_cut).unwrap();
        let ia = CompositeOperator::identity(HilbertDims::cavity("a", n_cut));
        let iq = CompositeOperator::identity(HilbertDims::qubit("q"));
        let sm = CompositeOperator::sigma_minus("q");
        let left = CompositeOperator::tensor(&[a.clone(), iq]).unwrap();
        let right = CompositeOperator::tensor(&[ia, sm.clone()]).unwrap();
        let prod = (&left * &right).unwrap();
        let direct = CompositeOperator::tensor(&[a.clone(), sm.clone()]).unwrap();
        // Independent element-wise oracle: (a ⊗ σ−)[(i q),(j r)] = a[i,j] σ−[q,r].
        for i in 0..=n_cut {
            for j in 0..=n_cut {
                for q in 0..2 {
                    for r in 0..2 {
                        let e = a.matrix()[(i, j)] * sm.matrix()[(q, r)];
                        assert!((prod.matrix()[(2 * i + q, 2 * j + r)] - e).norm() < 1e-14);
                    }
                }
            }
        }
        assert!((prod.matrix() - direct.matrix()).norm() < 1e-14);
    }

    #[test]
    fn embed_matches_tensor() {
        let dims = HilbertDims::cavity("a", 2)
            .concat(&HilbertDims::cavity("b", 1))
            .unwrap()
            .concat(&HilbertDims::qubit("q"))
            .unwrap();
        let b = CompositeOperator::annihilation_labeled("b", 1).unwrap();
        let embedded = b.embed(&dims).unwrap();
        let direct = CompositeOperator::tensor(&[
            CompositeOperator::identity(HilbertDims::cavity("a", 2)),
            b,
            CompositeOperator::identity(HilbertDims::qubit("q")),
        ])
        .unwrap();
        assert_eq!(embedded.matrix(), direct.matrix());
    }

    #[test]
    fn mismatched_dims_rejected() {
        let a = CompositeOperator::annihilation(2).unwrap();
        let q = CompositeOperator::sigma_z("q");
        assert!(matches!(&a * &q, Err(PndError::DimensionMismatch(_))));
        assert!(CompositeOperator::new(HilbertDims::qubit("q"), CMatrix::zeros(3, 3)).is_err());
    }
}
