// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Error type shared by every module.

use thiserror::Error;

/// Convenience alias.
pub type Result<T> = std::result::Result<T, PndError>;

/// Errors raised by the PND toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PndError {
    /// Operands live on incompatible Hilbert spaces.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A subsystem label was not found.
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A perturbative denominator fell below the resonance guard.
    #[error("near resonance on channel {channel}: {detail}")]
    NearResonance { channel: String, detail: String },

    /// The requested target cannot be realized.
    #[error("infeasible target: {0}")]
    Infeasible(String),

    /// No sampled detuning assignment produced a valid drive.
    #[error("no feasible detuning assignment among {tried} tried")]
    NoFeasibleAssignment { tried: usize, failures: Vec<String> },

    /// The amplitude solver stopped before reaching tolerance.
    #[error("solver did not converge after {iterations} iterations (residual {residual_khz:.4} kHz)")]
    NonConvergence { iterations: usize, residual_khz: f64 },

    /// The integration step is too coarse for the fastest phase rate.
    #[error("step {step:.3e} us exceeds stability bound {bound:.3e} us")]
    StepSize { step: f64, bound: f64 },

    /// A numerical invariant (norm, trace, positivity) drifted out of tolerance.
    #[error("numerical tolerance breach: {0}")]
    Tolerance(String),

    /// The dispersive mapping was evaluated too close to one of its poles.
    #[error("pole proximity in dispersive mapping: {0}")]
    PoleProximity(String),

    /// A target pattern cannot be generated.
    #[error("unsupported target pattern: {0}")]
    UnsupportedPattern(String),

    /// SNAP construction or calibration failed.
    #[error("SNAP configuration: {0}")]
    Snap(String),
}
