// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Composite Hilbert spaces, operators and states for Fock-truncated
//! cavities coupled to two-level ancillas.
//!
//! Basis ordering follows the Kronecker convention: the first declared
//! subsystem is the most significant digit of the flat index. For a cavity
//! followed by a qubit the flat index is `2 n + q` with `q = 0` for `|g⟩` and
//! `q = 1` for `|e⟩`.

mod dims;
mod operator;
pub mod sparse;
mod state;
mod wigner;

pub use dims::{HilbertDims, Subsystem};
pub use operator::CompositeOperator;
pub use state::{
    cat_state, root_state_fidelity, state_fidelity, CatParity, CatState, DensityMatrix, QuantumState, CAT_LEAK_WARNING,
};
pub use wigner::{wigner, WignerGrid, WignerMap};
