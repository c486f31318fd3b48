// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{PndError, Result};
use crate::models::{
    single_cavity_dims, single_cavity_frame, two_cavity_dims, two_cavity_frame, NoiseParams, QubitChannel,
    RelaxationModel, SystemParams, TwoCavityParams,
};
use crate::quantum::{CompositeOperator, HilbertDims};
use crate::{CMatrix, C64};

/// A collapse operator with its rate.
///
/// Rates are ordinary-frequency values in MHz; the dissipator applied is
/// `2π · rate_mhz · (L ρ L† − ½{L†L, ρ})` with time in µs. A single photon
/// under `L = a` therefore survives with probability `exp(−2π κ t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jump {
    pub op: CompositeOperator,
    pub rate_mhz: f64,
    /// When set, the operator is expressed in the interaction picture of the
    /// set's diagonal frame: `L(t) = e^{iDt} L e^{−iDt}`.
    pub rotating: bool,
}

impl Jump {
    pub fn new(op: CompositeOperator, rate_mhz: f64) -> Self {
        Self {
            op,
            rate_mhz,
            rotating: false,
        }
    }

    pub fn rotating(op: CompositeOperator, rate_mhz: f64) -> Self {
        Self {
            op,
            rate_mhz,
            rotating: true,
        }
    }
}

/// Collapse operators plus the diagonal frame (rad/µs) used by rotating jumps.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct JumpSet {
    pub operators: Vec<Jump>,
    pub frame: Option<Vec<f64>>,
}

impl JumpSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(operators: Vec<Jump>, frame: Option<Vec<f64>>) -> Self {
        Self { operators, frame }
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn push(&mut self, jump: Jump) {
        self.operators.push(jump);
    }

    pub fn validate(&self, dims: &HilbertDims) -> Result<()> {
        for j in &self.operators {
            if !(j.rate_mhz >= 0.0) || !j.rate_mhz.is_finite() {
                return Err(PndError::InvalidParameter(format!(
                    "jump rate {} must be non-negative",
                    j.rate_mhz
                )));
            }
            if j.op.dims() != dims {
                return Err(PndError::DimensionMismatch(
                    "jump operator does not act on the system space".into(),
                ));
            }
            if j.rotating {
                match &self.frame {
                    Some(f) if f.len() == dims.total_dim() => {}
                    _ => {
                        return Err(PndError::InvalidParameter(
                            "rotating jump requires a frame matching the system dimension".into(),
                        ))
                    }
                }
            }
        }
        Ok(())
    }

    /// Largest frame frequency difference (rad/µs) seen by rotating jumps.
    /// Fastest phase rotation (rad/µs) among the nonzero elements of the
    /// rotating jumps.
    pub fn max_rate(&self) -> f64 {
        let Some(frame) = &self.frame else {
            return 0.0;
        };
        let mut rate = 0.0f64;
        for j in self.operators.iter().filter(|j| j.rotating) {
            let m = j.op.matrix();
            for (c, col) in m.column_iter().enumerate() {
                for (r, v) in col.iter().enumerate() {
                    if v.norm() > 0.0 && r < frame.len() && c < frame.len() {
                        rate = rate.max((frame[r] - frame[c]).abs());
                    }
                }
            }
        }
        rate
    }

    /// Noise of the single-cavity system.
    ///
    /// Qubit relaxation follows `noise.relaxation`; dephasing is
    /// `√Γφ |e⟩⟨e|`; cavity loss is the rotating `√κ a`.
    pub fn single_cavity(params: &SystemParams, noise: &NoiseParams) -> Result<Self> {
        let dims = single_cavity_dims(params.n_cut);
        let d = dims.total_dim();
        let q = noise.qubit(QubitChannel::Q);
        let mut ops = Vec::new();
        if q.gamma_q_mhz > 0.0 {
            match noise.relaxation {
                RelaxationModel::Collective => {
                    let sm = CompositeOperator::sigma_minus("q").embed(&dims)?;
                    ops.push(Jump::rotating(sm, q.gamma_q_mhz));
                }
                RelaxationModel::PerNumber => {
                    for n in 0..=params.n_cut {
                        let mut m = CMatrix::zeros(d, d);
                        m[(2 * n, 2 * n + 1)] = C64::new(1.0, 0.0);
                        ops.push(Jump::new(CompositeOperator::new(dims.clone(), m)?, q.gamma_q_mhz));
                    }
                }
            }
        }
        if q.gamma_phi_mhz > 0.0 {
            let e = CompositeOperator::excited_projector("q").embed(&dims)?;
            ops.push(Jump::new(e, q.gamma_phi_mhz));
        }
        if noise.kappa_a_mhz > 0.0 {
            let a = CompositeOperator::annihilation_labeled("a", params.n_cut)?.embed(&dims)?;
            ops.push(Jump::rotating(a, noise.kappa_a_mhz));
        }
        Ok(Self::new(ops, Some(single_cavity_frame(params))))
    }

    /// Noise of the two-cavity system: relaxation of each ancilla (per
    /// `noise.relaxation`; the per-number variant resolves the photon number
    /// the ancilla couples to), ancilla dephasing, and rotating loss on both
    /// cavities.
    pub fn two_cavity(params: &TwoCavityParams, noise: &NoiseParams) -> Result<Self> {
        let dims = two_cavity_dims(params);
        let d = dims.total_dim();
        let mut ops = Vec::new();
        for (slot, ch) in [(2usize, QubitChannel::A), (3, QubitChannel::B), (4, QubitChannel::C)] {
            let q = noise.qubit(ch);
            if q.gamma_q_mhz > 0.0 && noise.relaxation == RelaxationModel::Collective {
                let sm = CompositeOperator::sigma_minus(ch.label()).embed(&dims)?;
                ops.push(Jump::rotating(sm, q.gamma_q_mhz));
            } else if q.gamma_q_mhz > 0.0 {
                for number in 0..=params.max_number(ch) {
                    let mut m = CMatrix::zeros(d, d);
                    for i in 0..d {
                        let digits = dims.digits(i);
                        let n = match ch {
                            QubitChannel::A => digits[0],
                            QubitChannel::B => digits[1],
                            _ => digits[0] + digits[1],
                        };
                        if n == number && digits[slot] == 1 {
                            let mut lower = digits.clone();
                            lower[slot] = 0;
                            m[(dims.index(&lower)?, i)] = C64::new(1.0, 0.0);
                        }
                    }
                    if m.iter().any(|v| v.norm() > 0.0) {
                        ops.push(Jump::new(CompositeOperator::new(dims.clone(), m)?, q.gamma_q_mhz));
                    }
                }
            }
            if q.gamma_phi_mhz > 0.0 {
                let e = CompositeOperator::excited_projector(ch.label()).embed(&dims)?;
                ops.push(Jump::new(e, q.gamma_phi_mhz));
            }
        }
        for (label, n_cut, kappa) in [
            ("a", params.n_cut_a, noise.kappa_a_mhz),
            ("b", params.n_cut_b, noise.kappa_b_mhz),
        ] {
            if kappa > 0.0 {
                let a = CompositeOperator::annihilation_labeled(label, n_cut)?.embed(&dims)?;
                ops.push(Jump::rotating(a, kappa));
            }
        }
        Ok(Self::new(ops, Some(two_cavity_frame(params))))
    }
}

/// `e^{iDt} A e^{−iDt}` for a diagonal frame `D`.
pub fn rotate_operator(op: &CompositeOperator, frame: &[f64], t: f64) -> Result<CompositeOperator> {
    let m = op.matrix();
    if frame.len() != m.nrows() {
        return Err(PndError::DimensionMismatch(
            "frame length does not match operator".into(),
        ));
    }
    let rotated = CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        m[(i, j)] * C64::from_polar(1.0, (frame[i] - frame[j]) * t)
    });
    CompositeOperator::new(op.dims().clone(), rotated)
}
