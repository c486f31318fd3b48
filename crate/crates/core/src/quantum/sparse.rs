// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Compressed-row sparse matrices used inside the propagators.
//!
//! The public API is dense; the integrators convert Hamiltonians and jump
//! operators to this form once, because the drive and dissipators touch only
//! O(dim) entries and the two-cavity space reaches dimension 200.
//!
//! Dense operands are nalgebra matrices stored column-major.

use crate::{CMatrix, C64};

/// Square complex matrix in compressed-row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl SparseMatrix {
    /// Keeps entries with modulus above `drop_tol`.
    pub fn from_dense(m: &CMatrix, drop_tol: f64) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "sparse matrices are square");
        let dim = m.nrows();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for i in 0..dim {
            for j in 0..dim {
                let v = m[(i, j)];
                if v.norm() > drop_tol {
                    cols.push(j);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(dim: usize, mut entries: Vec<(usize, usize, C64)>) -> Self {
        entries.sort_by_key(|a| (a.0, a.1));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols: Vec<usize> = Vec::with_capacity(entries.len());
        let mut vals: Vec<C64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "triplet outside matrix");
            if last == Some((r, c)) {
                *vals.last_mut().expect("non-empty") += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn values(&self) -> &[C64] {
        &self.vals
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.vals
    }

    /// Position of `(row, col)` in the value array, if stored.
    pub fn position(&self, row: usize, col: usize) -> Option<usize> {
        (self.row_ptr[row]..self.row_ptr[row + 1]).find(|&k| self.cols[k] == col)
    }

    /// Iterates over `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim)
            .flat_map(move |i| (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (i, self.cols[k], self.vals[k])))
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (i, j, v) in self.entries() {
            m[(i, j)] += v;
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let t: Vec<_> = self.entries().map(|(i, j, v)| (j, i, v.conj())).collect();
        Self::from_triplets(self.dim, t)
    }

    /// `y += coef · A x`.
    pub fn mul_vec_acc(&self, x: &[C64], y: &mut [C64], coef: C64) {
        for (i, yi) in y.iter_mut().enumerate().take(self.dim) {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *yi += coef * acc;
        }
    }

    /// `out += coef · A ρ` with `ρ`, `out` dense column-major `dim × dim`.
    pub fn left_mul_acc(&self, rho: &[C64], out: &mut [C64], coef: C64) {
        let n = self.dim;
        for j in 0..n {
            let col = &rho[j * n..(j + 1) * n];
            let dst = &mut out[j * n..(j + 1) * n];
            for (i, d) in dst.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                    acc += self.vals[k] * col[self.cols[k]];
                }
                *d += coef * acc;
            }
        }
    }

    /// `out += coef · ρ A` with `ρ`, `out` dense column-major `dim × dim`.
    pub fn right_mul_acc(&self, rho: &[C64], out: &mut [C64], coef: C64) {
        let n = self.dim;
        for r in 0..n {
            let src = &rho[r * n..(r + 1) * n];
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.cols[k];
                let v = coef * self.vals[k];
                let dst = &mut out[c * n..(c + 1) * n];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += v * s;
                }
            }
        }
    }
}
