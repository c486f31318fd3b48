// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Target spectra and the randomized drive search.

mod solver;
mod target;

pub use solver::{
    excitation_objective, optimize_drives, optimize_energies, solve_amplitudes, AmplitudeSolution, OptimizedDrive,
    OptimizerConfig,
};
pub use target::{make_target, TargetEnergies, TargetKind, TargetSpec};
