// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use super::config::PropagationConfig;
use super::jumps::JumpSet;
use crate::error::{PndError, Result};
use crate::models::TimeDependent;
use crate::quantum::sparse::SparseMatrix;
use crate::quantum::{DensityMatrix, QuantumState};
use crate::{CMatrix, CVector, C64};

/// Allowed drift of the state norm in closed-system runs.
pub const NORM_TOLERANCE: f64 = 1e-8;
/// Allowed drift of the trace in Lindblad runs.
pub const TRACE_TOLERANCE: f64 = 1e-6;
/// Most negative eigenvalue tolerated in Lindblad runs.
pub const POSITIVITY_TOLERANCE: f64 = 1e-6;

/// States reported at the record times.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
}

impl<S> Trajectory<S> {
    pub fn last(&self) -> Option<&S> {
        self.states.last()
    }
}

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const MINUS_I: C64 = C64 { re: 0.0, im: -1.0 };

// Splits [t0, t1] into equal steps no longer than `step`.
fn substeps(t0: f64, t1: f64, step: f64) -> (usize, f64) {
    let span = t1 - t0;
    if span <= 0.0 {
        return (0, 0.0);
    }
    let n = (span / step * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    (n, span / n as f64)
}

// Merges record times with Hamiltonian breakpoints. Each node carries
// (time, observe, left_limit): at a breakpoint the last stage of the step
// ending there uses the value just before it.
fn nodes(t_start: f64, records: &[f64], breakpoints: &[f64]) -> Vec<(f64, bool, bool)> {
    let t_end = records.last().copied().unwrap_or(t_start);
    let mut out: Vec<(f64, bool, bool)> = records.iter().map(|&t| (t, true, false)).collect();
    for &b in breakpoints {
        if b <= t_start || b > t_end {
            continue;
        }
        match out.iter_mut().find(|n| (n.0 - b).abs() < 1e-12) {
            Some(n) => {
                n.0 = b;
                n.2 = true;
            }
            None => out.push((b, false, true)),
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

// Classical RK4 driver over the record segments. `deriv(t, y, dy)` writes dy.
#[allow(clippy::too_many_arguments)]
fn run_rk4<F, O>(
    y: &mut [C64],
    t_start: f64,
    records: &[f64],
    breakpoints: &[f64],
    step: f64,
    mut deriv: F,
    mut post_step: impl FnMut(&mut [C64]),
    mut observe: O,
) -> Result<()>
where
    F: FnMut(f64, &[C64], &mut [C64]),
    O: FnMut(f64, &[C64]) -> Result<()>,
{
    let len = y.len();
    let mut k1 = vec![ZERO; len];
    let mut k2 = vec![ZERO; len];
    let mut k3 = vec![ZERO; len];
    let mut k4 = vec![ZERO; len];
    let mut tmp = vec![ZERO; len];
    let mut t = t_start;
    for (target, record, left_limit) in nodes(t_start, records, breakpoints) {
        let (n, _) = substeps(t, target, step);
        let t0 = t;
        for k in 0..n {
            // Node times are computed directly so the last stage lands on
            // `target` exactly.
            t = t0 + (target - t0) * k as f64 / n as f64;
            let t_next = if k + 1 == n {
                target
            } else {
                t0 + (target - t0) * (k + 1) as f64 / n as f64
            };
            let h = t_next - t;
            let t_last = if k + 1 == n && left_limit {
                t_next - 1e-9 * h
            } else {
                t_next
            };
            deriv(t, y, &mut k1);
            for i in 0..len {
                tmp[i] = y[i] + k1[i] * (h / 2.0);
            }
            deriv(t + h / 2.0, &tmp, &mut k2);
            for i in 0..len {
                tmp[i] = y[i] + k2[i] * (h / 2.0);
            }
            deriv(t + h / 2.0, &tmp, &mut k3);
            for i in 0..len {
                tmp[i] = y[i] + k3[i] * h;
            }
            deriv(t_last, &tmp, &mut k4);
            for i in 0..len {
                y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
            }
            post_step(y);
        }
        t = target;
        if record {
            observe(t, y)?;
        }
    }
    Ok(())
}

/// Schrödinger propagation, calling `observer` at every record time.
/// Returns the final state.
pub fn propagate_state_observed<H, O>(
    h: &H,
    psi0: &QuantumState,
    config: &PropagationConfig,
    mut observer: O,
) -> Result<QuantumState>
where
    H: TimeDependent + ?Sized,
    O: FnMut(f64, &QuantumState) -> Result<()>,
{
    if psi0.dims() != h.dims() {
        return Err(PndError::DimensionMismatch(
            "initial state and Hamiltonian act on different spaces".into(),
        ));
    }
    if (psi0.norm() - 1.0).abs() > NORM_TOLERANCE {
        return Err(PndError::InvalidParameter(format!(
            "initial state norm {} is not 1",
            psi0.norm()
        )));
    }
    let records = config.checked_records(h.max_phase_rate())?;
    let dims = psi0.dims().clone();
    let mut hm = h.pattern().clone();
    let mut y: Vec<C64> = psi0.amplitudes().iter().copied().collect();
    run_rk4(
        &mut y,
        config.t_start,
        &records,
        &h.breakpoints(),
        config.step,
        |t, psi, out| {
            h.fill(t, hm.values_mut());
            out.iter_mut().for_each(|v| *v = ZERO);
            hm.mul_vec_acc(psi, out, MINUS_I);
        },
        |_| {},
        |t, psi| {
            let state = QuantumState::new(dims.clone(), CVector::from_column_slice(psi))?;
            let drift = (state.norm() - 1.0).abs();
            if drift > NORM_TOLERANCE {
                return Err(PndError::Tolerance(format!("norm drift {drift:.3e} at t = {t} us")));
            }
            observer(t, &state)
        },
    )?;
    QuantumState::new(dims, CVector::from_vec(y))
}

/// Schrödinger propagation returning the states at the record times.
pub fn propagate_state<H: TimeDependent + ?Sized>(
    h: &H,
    psi0: &QuantumState,
    config: &PropagationConfig,
) -> Result<Trajectory<QuantumState>> {
    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
    };
    propagate_state_observed(h, psi0, config, |t, s| {
        traj.times.push(t);
        traj.states.push(s.clone());
        Ok(())
    })?;
    Ok(traj)
}

struct RotEntry {
    pos: usize,
    base: C64,
    freq: f64,
}

struct JumpTerm {
    coef: f64,
    entries: Vec<(usize, usize, C64, f64)>,
    rotating: bool,
    current: Vec<(usize, usize, C64)>,
}

impl JumpTerm {
    fn update(&mut self, t: f64) {
        if !self.rotating {
            return;
        }
        for (cur, (_, _, base, freq)) in self.current.iter_mut().zip(&self.entries) {
            cur.2 = base * C64::from_polar(1.0, freq * t);
        }
    }
}

// Precomputed pieces of dρ/dt = Kρ + ρK† + Σ γ LρL† with K = −iH − ½Σγ L†L.
struct Lindbladian<'a, H: TimeDependent + ?Sized> {
    h: &'a H,
    dim: usize,
    h_vals: Vec<C64>,
    h_pos: Vec<usize>,
    k: SparseMatrix,
    k_static: Vec<C64>,
    k_rot: Vec<RotEntry>,
    jumps: Vec<JumpTerm>,
    scratch: Vec<C64>,
}

fn sparse_entries(m: &CMatrix) -> Vec<(usize, usize, C64)> {
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v != ZERO {
                out.push((i, j, v));
            }
        }
    }
    out
}

impl<'a, H: TimeDependent + ?Sized> Lindbladian<'a, H> {
    fn new(h: &'a H, jumps: &JumpSet) -> Result<Self> {
        let dim = h.dims().total_dim();
        jumps.validate(h.dims())?;
        let frame = jumps.frame.clone().unwrap_or_else(|| vec![0.0; dim]);
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut triplets: Vec<(usize, usize, C64)> = h.pattern().entries().map(|(i, j, _)| (i, j, ZERO)).collect();
        let mut ldl_terms = Vec::new();
        let mut terms = Vec::new();
        for j in &jumps.operators {
            if j.rate_mhz == 0.0 {
                continue;
            }
            let coef = two_pi * j.rate_mhz;
            let l = j.op.matrix();
            let entries: Vec<(usize, usize, C64, f64)> = sparse_entries(l)
                .into_iter()
                .map(|(r, c, v)| (r, c, v, frame[r] - frame[c]))
                .collect();
            let ldl = l.adjoint() * l;
            for (r, c, v) in sparse_entries(&ldl) {
                triplets.push((r, c, ZERO));
                ldl_terms.push((
                    r,
                    c,
                    v * (-0.5 * coef),
                    if j.rotating { frame[r] - frame[c] } else { 0.0 },
                ));
            }
            let current = entries.iter().map(|(r, c, v, _)| (*r, *c, *v)).collect();
            terms.push(JumpTerm {
                coef,
                entries,
                rotating: j.rotating,
                current,
            });
        }
        let k = SparseMatrix::from_triplets(dim, triplets);
        let h_pos = h
            .pattern()
            .entries()
            .map(|(i, j, _)| k.position(i, j).expect("union pattern"))
            .collect();
        let mut k_static = vec![ZERO; k.nnz()];
        let mut k_rot = Vec::new();
        for (r, c, v, f) in ldl_terms {
            let pos = k.position(r, c).expect("union pattern");
            if f == 0.0 {
                k_static[pos] += v;
            } else {
                k_rot.push(RotEntry { pos, base: v, freq: f });
            }
        }
        Ok(Self {
            h,
            dim,
            h_vals: vec![ZERO; h.pattern().nnz()],
            h_pos,
            k,
            k_static,
            k_rot,
            jumps: terms,
            scratch: vec![ZERO; dim * dim],
        })
    }

    fn deriv(&mut self, t: f64, rho: &[C64], out: &mut [C64]) {
        let n = self.dim;
        self.h.fill(t, &mut self.h_vals);
        {
            let kv = self.k.values_mut();
            kv.copy_from_slice(&self.k_static);
            for (p, v) in self.h_pos.iter().zip(&self.h_vals) {
                kv[*p] += MINUS_I * v;
            }
            for e in &self.k_rot {
                kv[e.pos] += e.base * C64::from_polar(1.0, e.freq * t);
            }
        }
        self.scratch.iter_mut().for_each(|v| *v = ZERO);
        self.k.left_mul_acc(rho, &mut self.scratch, C64::new(1.0, 0.0));
        for j in 0..n {
            for i in 0..n {
                out[i + j * n] = self.scratch[i + j * n] + self.scratch[j + i * n].conj();
            }
        }
        for term in &mut self.jumps {
            term.update(t);
            for &(i, k, a) in &term.current {
                let ac = a * term.coef;
                for &(j, l, b) in &term.current {
                    out[i + j * n] += ac * rho[k + l * n] * b.conj();
                }
            }
        }
    }
}

fn hermitize(rho: &mut [C64], n: usize) {
    for j in 0..n {
        for i in 0..j {
            let avg = (rho[i + j * n] + rho[j + i * n].conj()) * 0.5;
            rho[i + j * n] = avg;
            rho[j + i * n] = avg.conj();
        }
        rho[j + j * n].im = 0.0;
    }
}

/// Lindblad propagation, calling `observer` at every record time. Returns
/// the final state. Trace and positivity are checked at every record time.
pub fn propagate_lindblad_observed<H, O>(
    h: &H,
    rho0: &DensityMatrix,
    jumps: &JumpSet,
    config: &PropagationConfig,
    mut observer: O,
) -> Result<DensityMatrix>
where
    H: TimeDependent + ?Sized,
    O: FnMut(f64, &DensityMatrix) -> Result<()>,
{
    if rho0.dims() != h.dims() {
        return Err(PndError::DimensionMismatch(
            "initial state and Hamiltonian act on different spaces".into(),
        ));
    }
    rho0.validate(1e-8)?;
    let records = config.checked_records(h.max_phase_rate().max(jumps.max_rate()))?;
    let mut gen = Lindbladian::new(h, jumps)?;
    let dims = rho0.dims().clone();
    let n = dims.total_dim();
    let mut y: Vec<C64> = rho0.matrix().as_slice().to_vec();
    run_rk4(
        &mut y,
        config.t_start,
        &records,
        &h.breakpoints(),
        config.step,
        |t, rho, out| gen.deriv(t, rho, out),
        |rho| hermitize(rho, n),
        |t, rho| {
            let state = DensityMatrix::new(dims.clone(), CMatrix::from_column_slice(n, n, rho))?;
            let drift = (state.trace().re - 1.0).abs();
            if drift > TRACE_TOLERANCE {
                return Err(PndError::Tolerance(format!("trace drift {drift:.3e} at t = {t} us")));
            }
            let min = state.min_eigenvalue();
            if min < -POSITIVITY_TOLERANCE {
                return Err(PndError::Tolerance(format!("eigenvalue {min:.3e} at t = {t} us")));
            }
            observer(t, &state)
        },
    )?;
    DensityMatrix::new(dims, CMatrix::from_column_slice(n, n, &y))
}

/// Lindblad propagation returning the states at the record times.
pub fn propagate_lindblad<H: TimeDependent + ?Sized>(
    h: &H,
    rho0: &DensityMatrix,
    jumps: &JumpSet,
    config: &PropagationConfig,
) -> Result<Trajectory<DensityMatrix>> {
    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
    };
    propagate_lindblad_observed(h, rho0, jumps, config, |t, s| {
        traj.times.push(t);
        traj.states.push(s.clone());
        Ok(())
    })?;
    Ok(traj)
}
