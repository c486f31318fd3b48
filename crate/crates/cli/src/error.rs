// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use pnd_core::PndError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] PndError),

    /// The drive was evaluated but misses its declared target.
    #[error("max residual {residual_khz:.4} kHz exceeds tolerance {tolerance_khz} kHz")]
    Residual { residual_khz: f64, tolerance_khz: f64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                PndError::Infeasible(_) | PndError::NoFeasibleAssignment { .. } | PndError::NonConvergence { .. } => 2,
                PndError::NearResonance { .. } | PndError::PoleProximity(_) => 3,
                PndError::Tolerance(_) | PndError::StepSize { .. } => 4,
                _ => 1,
            },
            CliError::Residual { .. } => 4,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Core(PndError::Infeasible("x".into())).exit_code(), 2);
        let resonance = PndError::NearResonance {
            channel: "q".into(),
            detail: "n=1".into(),
        };
        assert_eq!(CliError::Core(resonance).exit_code(), 3);
        assert_eq!(CliError::Core(PndError::Tolerance("norm".into())).exit_code(), 4);
        assert_eq!(CliError::Config("bad".into()).exit_code(), 1);
        assert_eq!(
            CliError::Residual {
                residual_khz: 1.0,
                tolerance_khz: 0.5
            }
            .exit_code(),
            4
        );
    }
}
