// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Fixed-step time-domain propagation in the interaction picture.

mod config;
mod fidelity;
mod integrate;
mod jumps;
mod recovery;

pub use config::{PropagationConfig, DEFAULT_STEPS_PER_PERIOD};
pub use fidelity::{fidelity_trace, to_lab_frame, FidelityTrace, OpenSystem};
pub use integrate::{
    propagate_lindblad, propagate_lindblad_observed, propagate_state, propagate_state_observed, Trajectory,
    NORM_TOLERANCE, POSITIVITY_TOLERANCE, TRACE_TOLERANCE,
};
pub use jumps::{rotate_operator, Jump, JumpSet};
pub use recovery::{kitten_code_states, kitten_recovery, kitten_recovery_kraus};
