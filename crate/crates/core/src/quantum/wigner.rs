// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Wigner quasi-probability on a phase-space grid.
//!
//! Convention: `x = (a + a†)/√2`, `p = (a − a†)/(i√2)`, normalized so that
//! `∫ W dx dp = 1`. The vacuum peaks at `W(0,0) = 1/π` and a coherent state
//! `|α⟩` is centred at `(√2 Re α, √2 Im α)`.

use serde::{Deserialize, Serialize};

use crate::error::{PndError, Result};
use crate::C64;

use super::DensityMatrix;

/// Rectangular sampling grid (inclusive endpoints).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub x_range: (f64, f64),
    pub p_range: (f64, f64),
    /// Points per axis.
    pub resolution: usize,
}

impl Default for WignerGrid {
    fn default() -> Self {
        Self {
            x_range: (-4.0, 4.0),
            p_range: (-4.0, 4.0),
            resolution: 81,
        }
    }
}

impl WignerGrid {
    fn axis(range: (f64, f64), n: usize) -> Vec<f64> {
        if n <= 1 {
            return vec![range.0];
        }
        let h = (range.1 - range.0) / (n - 1) as f64;
        (0..n).map(|k| range.0 + h * k as f64).collect()
    }
}

/// Sampled Wigner function, `values[ix][ip]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerMap {
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl WignerMap {
    /// Trapezoidal estimate of `∫ W dx dp` over the grid.
    pub fn integral(&self) -> f64 {
        let weights = |v: &[f64]| -> Vec<f64> {
            let n = v.len();
            if n < 2 {
                return vec![0.0; n];
            }
            let h = (v[n - 1] - v[0]) / (n - 1) as f64;
            (0..n).map(|k| if k == 0 || k == n - 1 { h / 2.0 } else { h }).collect()
        };
        let wx = weights(&self.xs);
        let wp = weights(&self.ps);
        let mut s = 0.0;
        for (i, row) in self.values.iter().enumerate() {
            for (j, w) in row.iter().enumerate() {
                s += wx[i] * wp[j] * w;
            }
        }
        s
    }
}

/// Samples the Wigner function of a single-mode density matrix.
pub fn wigner(rho: &DensityMatrix, grid: &WignerGrid) -> Result<WignerMap> {
    if rho.dims().len() != 1 {
        return Err(PndError::DimensionMismatch(format!(
            "Wigner function needs a single-mode state, got subsystems {:?}",
            rho.dims().labels()
        )));
    }
    let xs = WignerGrid::axis(grid.x_range, grid.resolution);
    let ps = WignerGrid::axis(grid.p_range, grid.resolution);
    let m = rho.matrix();
    let d = m.nrows();
    // sqrt(m!/n!) for m ≤ n
    let mut log_fact = vec![0.0f64; d + 1];
    for k in 1..=d {
        log_fact[k] = log_fact[k - 1] + (k as f64).ln();
    }
    let values = xs
        .iter()
        .map(|&x| {
            ps.iter()
                .map(|&p| {
                    let a = C64::new(x, p) / 2f64.sqrt();
                    let b = 4.0 * a.norm_sqr();
                    let mut w = 0.0;
                    for mm in 0..d {
                        let sign = if mm % 2 == 0 { 1.0 } else { -1.0 };
                        w += sign * m[(mm, mm)].re * laguerre(mm, 0, b);
                        let mut two_a_pow = C64::new(1.0, 0.0);
                        for n in (mm + 1)..d {
                            two_a_pow *= a * 2.0;
                            let ratio = (0.5 * (log_fact[mm] - log_fact[n])).exp();
                            let term = m[(mm, n)] * two_a_pow * (sign * ratio * laguerre(mm, n - mm, b));
                            w += 2.0 * term.re;
                        }
                    }
                    w * (-b / 2.0).exp() / std::f64::consts::PI
                })
                .collect()
        })
        .collect();
    Ok(WignerMap { xs, ps, values })
}

/// Generalized Laguerre polynomial `L_n^{(k)}(x)` by three-term recurrence.
fn laguerre(n: usize, k: usize, x: f64) -> f64 {
    let k = k as f64;
    let mut l0 = 1.0;
    if n == 0 {
        return l0;
    }
    let mut l1 = 1.0 + k - x;
    for j in 1..n {
        let jf = j as f64;
        let l2 = ((2.0 * jf + 1.0 + k - x) * l1 - (jf + k) * l0) / (jf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}
