// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! System parameters, drive tones, envelopes and the interaction-picture
//! Hamiltonians of the single-cavity and two-cavity models.
//!
//! All simulation happens in the frame rotating with the bare cavity and
//! qubit frequencies, so only χ-scale frequencies enter the numerics. The
//! diagonal part of the dispersive Hamiltonian is removed as well; it is
//! available separately as a *frame* so that states can be rotated back.

mod drive;
mod envelope;
mod hamiltonian;
mod jc;
mod params;

pub use drive::{DriveSpec, DriveTone, QubitChannel, ToneWarning, DEFAULT_DENOMINATORS, DEFAULT_SAFETY_RATIO};
pub use envelope::{envelope_value, Envelope, LAMBDA_S};
pub use hamiltonian::{
    interaction_drive_hamiltonian, single_cavity_dims, single_cavity_frame, two_cavity_dims,
    two_cavity_drive_hamiltonian, two_cavity_frame, DiagonalHamiltonian, PhaseSwitch, TimeDependent, ToneHamiltonian,
    ToneTerm,
};
pub use jc::{jc_to_dispersive, DispersiveConstants, JCParams};
pub use params::{NoiseParams, QubitNoise, RelaxationModel, SystemParams, TwoCavityParams};
