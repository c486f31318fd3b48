// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Shared inputs for the kernel benchmarks in `benches/`.

use pnd_core::effective::micromotion_period;
use pnd_core::models::ToneHamiltonian;
use pnd_core::{DriveSpec, DriveTone, Envelope, LogicalCode, QuantumState, SystemParams};

/// Table V drive on a kitten `|+⟩`, abrupt for one micromotion period.
pub struct Fixture {
    pub params: SystemParams,
    pub tones: Vec<DriveTone>,
    pub drive: DriveSpec,
    pub hamiltonian: ToneHamiltonian,
    pub t_m: f64,
    pub cavity: QuantumState,
}

pub fn table_v(n_cut: usize) -> Fixture {
    let table = pnd_core::tables::table("V").expect("table V exists");
    let params = table.system_params(n_cut);
    let tones = table.tones();
    let t_m = micromotion_period(&tones, params.chi());
    let drive = table.drive(Envelope::abrupt(0.0, t_m));
    let hamiltonian = ToneHamiltonian::single_cavity(&params, &drive).expect("valid drive");
    let cavity = LogicalCode::kitten(n_cut)
        .and_then(|c| c.plus("a"))
        .expect("kitten fits");
    Fixture {
        params,
        tones,
        drive,
        hamiltonian,
        t_m,
        cavity,
    }
}
