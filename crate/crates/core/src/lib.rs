// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Photon-number-dependent (PND) Hamiltonian engineering.
//!
//! A dispersively coupled ancilla qubit, driven off-resonantly near its
//! photon-number-resolved transitions, imprints an effective diagonal
//! Hamiltonian `Σ_n E_n |n⟩⟨n|` on the cavity. This crate designs such drives
//! and verifies them in the time domain:
//!
//! - [`quantum`]: composite Hilbert spaces, operators, states, Wigner maps.
//! - [`models`]: system parameters, drive tones, envelopes, interaction-picture
//!   Hamiltonians and the transmon-to-dispersive mapping.
//! - [`effective`]: perturbative spectra (2nd and 4th order), kick operators,
//!   micromotion period, excitation probabilities and dephasing rates.
//! - [`optimizer`]: target spectra and the randomized detuning search.
//! - [`dynamics`]: fixed-step Schrödinger and Lindblad propagation, fidelity
//!   tracking and the kitten-code recovery map.
//! - [`codes`]: logical codes and the end-to-end experiments.
//! - [`tables`]: published drive parameter sets used as references.
//!
//! Frequencies given in configuration are ordinary frequencies (value = ω/2π)
//! in MHz or kHz; internal computations run in angular units of rad/µs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod codes;
pub mod dynamics;
pub mod effective;
pub mod error;
pub mod models;
pub mod optimizer;
pub mod quantum;
pub mod tables;
pub mod units;

pub use error::{PndError, Result};

pub use codes::{ExperimentReport, LogicalCode};
pub use dynamics::{JumpSet, PropagationConfig};
pub use effective::{DephasingRates, EngineeredSpectrum, TwoCavitySpectrum};
pub use models::{
    DriveSpec, DriveTone, Envelope, JCParams, NoiseParams, QubitChannel, RelaxationModel, SystemParams, TwoCavityParams,
};
pub use optimizer::{OptimizedDrive, OptimizerConfig, TargetSpec};
pub use quantum::{CompositeOperator, DensityMatrix, HilbertDims, QuantumState};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
/// Exact rational number used for detunings in units of χ.
pub type Rational = num_rational::Ratio<i64>;
