// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use crate::error::{PndError, Result};
use crate::quantum::sparse::SparseMatrix;
use crate::quantum::{CompositeOperator, HilbertDims};
use crate::C64;

use super::{DriveSpec, Envelope, QubitChannel, SystemParams, TwoCavityParams};

/// A Hamiltonian (rad/µs) with a fixed sparsity pattern and time-dependent
/// values, as consumed by the propagators.
pub trait TimeDependent: Send + Sync {
    fn dims(&self) -> &HilbertDims;

    /// Sparsity pattern. Values stored in the pattern are ignored.
    fn pattern(&self) -> &SparseMatrix;

    /// Writes the values at time `t`, in pattern order.
    fn fill(&self, t: f64, values: &mut [C64]);

    /// Upper bound on the fastest rate (rad/µs) appearing in the evolution.
    fn max_phase_rate(&self) -> f64;

    /// Times at which the Hamiltonian jumps; integrators place step
    /// boundaries there.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Dense operator at time `t`.
    fn dense_at(&self, t: f64) -> CompositeOperator {
        let mut m = self.pattern().clone();
        self.fill(t, m.values_mut());
        CompositeOperator::new(self.dims().clone(), m.to_dense()).expect("pattern matches dims")
    }
}

impl<T: TimeDependent + ?Sized> TimeDependent for Arc<T> {
    fn dims(&self) -> &HilbertDims {
        (**self).dims()
    }
    fn pattern(&self) -> &SparseMatrix {
        (**self).pattern()
    }
    fn fill(&self, t: f64, values: &mut [C64]) {
        (**self).fill(t, values)
    }
    fn max_phase_rate(&self) -> f64 {
        (**self).max_phase_rate()
    }
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
}

/// Time-independent diagonal Hamiltonian.
#[derive(Debug, Clone)]
pub struct DiagonalHamiltonian {
    dims: HilbertDims,
    diag: Vec<f64>,
    pattern: SparseMatrix,
}

impl DiagonalHamiltonian {
    pub fn new(dims: HilbertDims, diag: Vec<f64>) -> Result<Self> {
        if diag.len() != dims.total_dim() {
            return Err(PndError::DimensionMismatch(format!(
                "{} diagonal entries for dimension {}",
                diag.len(),
                dims.total_dim()
            )));
        }
        let n = diag.len();
        let pattern = SparseMatrix::from_triplets(n, (0..n).map(|i| (i, i, C64::new(diag[i], 0.0))).collect());
        Ok(Self { dims, diag, pattern })
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }
}

impl TimeDependent for DiagonalHamiltonian {
    fn dims(&self) -> &HilbertDims {
        &self.dims
    }
    fn pattern(&self) -> &SparseMatrix {
        &self.pattern
    }
    fn fill(&self, _t: f64, values: &mut [C64]) {
        for (v, d) in values.iter_mut().zip(&self.diag) {
            *v = C64::new(*d, 0.0);
        }
    }
    fn max_phase_rate(&self) -> f64 {
        self.diag.iter().fold(0.0, |a, d| a.max(d.abs()))
    }
}

/// Abrupt phase change of a tone at a given time (used by SNAP pulses).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSwitch {
    pub time: f64,
    pub factor: C64,
}

/// One oscillating component `amplitude · e^{i frequency t}` of a coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToneTerm {
    /// rad/µs.
    pub amplitude: C64,
    /// rad/µs.
    pub frequency: f64,
    pub switch: Option<PhaseSwitch>,
}

impl ToneTerm {
    pub fn new(amplitude: C64, frequency: f64) -> Self {
        Self {
            amplitude,
            frequency,
            switch: None,
        }
    }

    #[inline]
    fn value(&self, t: f64) -> C64 {
        let mut a = self.amplitude;
        if let Some(s) = self.switch {
            if t >= s.time {
                a *= s.factor;
            }
        }
        a * C64::from_polar(1.0, self.frequency * t)
    }
}

#[derive(Debug, Clone)]
struct Coupling {
    envelope: usize,
    terms: Vec<ToneTerm>,
    pos_lower_upper: usize,
    pos_upper_lower: usize,
}

/// Interaction-picture qubit drive: a sum over pairs `(lower, upper)` of basis
/// states differing by one ancilla excitation, each carrying
/// `λ(t) Σ_k A_k e^{i ω_k t} |lower⟩⟨upper| + h.c.`.
#[derive(Debug, Clone)]
pub struct ToneHamiltonian {
    dims: HilbertDims,
    envelopes: Vec<Envelope>,
    couplings: Vec<Coupling>,
    pattern: SparseMatrix,
    max_rate: f64,
}

impl ToneHamiltonian {
    /// Generic constructor from `(lower, upper, envelope index, terms)`.
    pub fn new(
        dims: HilbertDims,
        envelopes: Vec<Envelope>,
        couplings: Vec<(usize, usize, usize, Vec<ToneTerm>)>,
    ) -> Result<Self> {
        let d = dims.total_dim();
        let mut triplets = Vec::new();
        for (lo, up, env, _) in &couplings {
            if *lo >= d || *up >= d || lo == up {
                return Err(PndError::DimensionMismatch(format!("invalid coupling ({lo}, {up})")));
            }
            if *env >= envelopes.len() {
                return Err(PndError::InvalidParameter(format!("envelope index {env} out of range")));
            }
            triplets.push((*lo, *up, C64::new(0.0, 0.0)));
            triplets.push((*up, *lo, C64::new(0.0, 0.0)));
        }
        let pattern = SparseMatrix::from_triplets(d, triplets);
        let mut max_freq: f64 = 0.0;
        let mut max_amp: f64 = 0.0;
        let mut built = Vec::with_capacity(couplings.len());
        for (lo, up, env, terms) in couplings {
            let peak = envelopes[env].peak();
            let amp: f64 = terms.iter().map(|t| t.amplitude.norm()).sum::<f64>() * peak;
            max_amp = max_amp.max(amp);
            for t in &terms {
                max_freq = max_freq.max(t.frequency.abs());
            }
            built.push(Coupling {
                envelope: env,
                terms,
                pos_lower_upper: pattern.position(lo, up).expect("pattern entry"),
                pos_upper_lower: pattern.position(up, lo).expect("pattern entry"),
            });
        }
        Ok(Self {
            dims,
            envelopes,
            couplings: built,
            pattern,
            max_rate: max_freq + max_amp,
        })
    }

    /// Single cavity ⊗ qubit drive with Kerr-corrected phases
    /// `(n − m)χ + δ_m − χ′ n(n−1)/2`.
    pub fn single_cavity(params: &SystemParams, spec: &DriveSpec) -> Result<Self> {
        params.validate()?;
        let chi = params.chi();
        let cp = params.chi_prime_over_chi();
        let dims = single_cavity_dims(params.n_cut);
        let mut couplings = Vec::new();
        for n in 0..=params.n_cut {
            let terms: Vec<ToneTerm> = spec
                .tones
                .iter()
                .map(|tone| {
                    let w = n as f64 - tone.m as f64 + tone.delta_f64() - cp * (n * n.saturating_sub(1)) as f64 / 2.0;
                    ToneTerm::new(tone.omega * chi, w * chi)
                })
                .collect();
            if !terms.is_empty() {
                couplings.push((2 * n, 2 * n + 1, 0, terms));
            }
        }
        Self::new(dims, vec![spec.envelope], couplings)
    }

    /// Two cavities with ancillas a, b (local) and c (joint).
    pub fn two_cavity(params: &TwoCavityParams, specs: &[DriveSpec]) -> Result<Self> {
        params.validate()?;
        let dims = two_cavity_dims(params);
        let (na, nb) = (params.n_cut_a, params.n_cut_b);
        let mut seen = Vec::new();
        let mut envelopes = Vec::new();
        let mut couplings = Vec::new();
        for spec in specs {
            let ch = spec.target_qubit;
            if seen.contains(&ch) {
                return Err(PndError::InvalidParameter(format!("two drive specs target qubit {ch}")));
            }
            seen.push(ch);
            let chi = crate::units::mhz_to_angular(params.chi_mhz(ch)?);
            let env = envelopes.len();
            envelopes.push(spec.envelope);
            let slot = match ch {
                QubitChannel::A => 2,
                QubitChannel::B => 3,
                _ => 4,
            };
            for a in 0..=na {
                for b in 0..=nb {
                    let n = match ch {
                        QubitChannel::A => a,
                        QubitChannel::B => b,
                        _ => a + b,
                    };
                    let terms: Vec<ToneTerm> = spec
                        .tones
                        .iter()
                        .map(|tone| {
                            let w = n as f64 - tone.m as f64 + tone.delta_f64();
                            ToneTerm::new(tone.omega * chi, w * chi)
                        })
                        .collect();
                    if terms.is_empty() {
                        continue;
                    }
                    for s1 in 0..2 {
                        for s2 in 0..2 {
                            let mut digits = [a, b, 0, 0, 0];
                            let spectators: Vec<usize> = (2..5).filter(|k| *k != slot).collect();
                            digits[spectators[0]] = s1;
                            digits[spectators[1]] = s2;
                            digits[slot] = 0;
                            let lo = dims.index(&digits)?;
                            digits[slot] = 1;
                            let up = dims.index(&digits)?;
                            couplings.push((lo, up, env, terms.clone()));
                        }
                    }
                }
            }
        }
        Self::new(dims, envelopes, couplings)
    }

    /// Envelope values λ(t) for every registered envelope.
    pub fn envelope_values(&self, t: f64) -> Vec<f64> {
        self.envelopes.iter().map(|e| e.value(t)).collect()
    }
}

impl TimeDependent for ToneHamiltonian {
    fn dims(&self) -> &HilbertDims {
        &self.dims
    }

    fn pattern(&self) -> &SparseMatrix {
        &self.pattern
    }

    fn fill(&self, t: f64, values: &mut [C64]) {
        values.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        let lambdas: Vec<f64> = self.envelopes.iter().map(|e| e.value(t)).collect();
        for c in &self.couplings {
            let lam = lambdas[c.envelope];
            if lam == 0.0 {
                continue;
            }
            let mut v = C64::new(0.0, 0.0);
            for term in &c.terms {
                v += term.value(t);
            }
            v *= lam;
            values[c.pos_lower_upper] += v;
            values[c.pos_upper_lower] += v.conj();
        }
    }

    fn max_phase_rate(&self) -> f64 {
        self.max_rate
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .envelopes
            .iter()
            .flat_map(|e| {
                let (a, b) = e.support();
                [a, b]
            })
            .collect();
        for c in &self.couplings {
            out.extend(c.terms.iter().filter_map(|t| t.switch.map(|s| s.time)));
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

/// `cavity(a) ⊗ qubit(q)`.
pub fn single_cavity_dims(n_cut: usize) -> HilbertDims {
    HilbertDims::cavity("a", n_cut)
        .concat(&HilbertDims::qubit("q"))
        .expect("distinct labels")
}

/// `cavity(a) ⊗ cavity(b) ⊗ qubit(qa) ⊗ qubit(qb) ⊗ qubit(qc)`.
pub fn two_cavity_dims(params: &TwoCavityParams) -> HilbertDims {
    HilbertDims::cavity("a", params.n_cut_a)
        .concat(&HilbertDims::cavity("b", params.n_cut_b))
        .and_then(|d| d.concat(&HilbertDims::qubit("qa")))
        .and_then(|d| d.concat(&HilbertDims::qubit("qb")))
        .and_then(|d| d.concat(&HilbertDims::qubit("qc")))
        .expect("distinct labels")
}

/// Diagonal energies (rad/µs) removed by the interaction picture:
/// `−(K/2) n(n−1) + |e⟩⟨e| [−χ n + (χ′/2) n(n−1)]`.
pub fn single_cavity_frame(params: &SystemParams) -> Vec<f64> {
    let (chi, k, cp) = (params.chi(), params.kerr(), params.chi_prime());
    let mut d = Vec::with_capacity(2 * (params.n_cut + 1));
    for n in 0..=params.n_cut {
        let nf = n as f64;
        let pairs = nf * (nf - 1.0);
        d.push(-0.5 * k * pairs);
        d.push(-0.5 * k * pairs - chi * nf + 0.5 * cp * pairs);
    }
    d
}

/// Diagonal energies (rad/µs) of `−χ_a n_a|e_a⟩⟨e_a| − χ_b n_b|e_b⟩⟨e_b| − χ_c (n_a+n_b)|e_c⟩⟨e_c|`.
pub fn two_cavity_frame(params: &TwoCavityParams) -> Vec<f64> {
    let dims = two_cavity_dims(params);
    let (xa, xb, xc) = (
        crate::units::mhz_to_angular(params.chi_a_mhz),
        crate::units::mhz_to_angular(params.chi_b_mhz),
        crate::units::mhz_to_angular(params.chi_c_mhz),
    );
    (0..dims.total_dim())
        .map(|i| {
            let d = dims.digits(i);
            let (a, b) = (d[0] as f64, d[1] as f64);
            -xa * a * d[2] as f64 - xb * b * d[3] as f64 - xc * (a + b) * d[4] as f64
        })
        .collect()
}

/// Dense interaction-picture drive Hamiltonian at time `t`.
pub fn interaction_drive_hamiltonian(params: &SystemParams, spec: &DriveSpec, t: f64) -> Result<CompositeOperator> {
    Ok(ToneHamiltonian::single_cavity(params, spec)?.dense_at(t))
}

/// Dense two-cavity drive Hamiltonian at time `t`.
pub fn two_cavity_drive_hamiltonian(
    params: &TwoCavityParams,
    specs: &[DriveSpec],
    t: f64,
) -> Result<CompositeOperator> {
    Ok(ToneHamiltonian::two_cavity(params, specs)?.dense_at(t))
}
