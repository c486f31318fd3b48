// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Run configurations. Each command reads one JSON document; unknown keys are
//! rejected. Relative paths inside a configuration resolve against the
//! directory that holds it.

use std::fs;
use std::path::{Path, PathBuf};

use pnd_core::codes::{
    CPhaseSettings, KerrCancelSettings, MicromotionSettings, Pi8Settings, ThetaScanSettings, TransparencySettings,
};
use pnd_core::models::RelaxationModel;
use pnd_core::quantum::WignerGrid;
use pnd_core::{DriveTone, Envelope, OptimizerConfig, SystemParams, TargetSpec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// A configuration document after `--seed` has been applied.
pub struct Loaded {
    pub value: Value,
    pub base_dir: PathBuf,
}

impl Loaded {
    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let value: Value =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if !value.is_object() {
            return Err(CliError::Config(format!("{}: expected a JSON object", path.display())));
        }
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { value, base_dir })
    }

    /// Writes `seed` at the given JSON pointer, creating parent objects.
    pub fn set_seed(&mut self, pointer: &[&str], seed: u64) {
        let mut node = &mut self.value;
        for key in &pointer[..pointer.len() - 1] {
            let map = node.as_object_mut().expect("objects along the seed path");
            node = map
                .entry(key.to_string())
                .or_insert_with(|| Value::Object(Default::default()));
        }
        if let Some(map) = node.as_object_mut() {
            map.insert(pointer[pointer.len() - 1].to_string(), Value::from(seed));
        }
    }

    pub fn parse<T: DeserializeOwned>(&self) -> CliResult<T> {
        parse_value(self.value.clone())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }
}

pub fn parse_value<T: DeserializeOwned>(value: Value) -> CliResult<T> {
    serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))
}

// ---------------------------------------------------------------------------
// Shared pieces

/// Dispersive constants as ordinary frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub chi_mhz: f64,
    #[serde(default)]
    pub kerr_khz: f64,
    #[serde(default)]
    pub chi_prime_khz: f64,
}

impl SystemSpec {
    pub fn params(&self, n_cut: usize) -> SystemParams {
        SystemParams::new(self.chi_mhz, n_cut)
            .with_kerr_khz(self.kerr_khz)
            .with_chi_prime_khz(self.chi_prime_khz)
    }
}

/// Drive file layout shared by `optimize` (writer) and `verify` / `custom`
/// (readers).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveFile {
    #[serde(rename = "chi_MHz")]
    pub chi_mhz: f64,
    #[serde(rename = "kerr_kHz", default)]
    pub kerr_khz: f64,
    #[serde(rename = "chi_prime_kHz", default)]
    pub chi_prime_khz: f64,
    pub tones: Vec<DriveTone>,
    pub envelope: Envelope,
    #[serde(rename = "target_kHz", default, skip_serializing_if = "Option::is_none")]
    pub target_khz: Option<Vec<f64>>,
    #[serde(rename = "achieved_kHz", default, skip_serializing_if = "Option::is_none")]
    pub achieved_khz: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
    #[serde(rename = "residual_kHz", default, skip_serializing_if = "Option::is_none")]
    pub residual_khz: Option<f64>,
    /// Written by the tool; ignored on input.
    #[serde(default, skip_serializing)]
    pub provenance: Option<Value>,
}

impl DriveFile {
    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn system(&self) -> SystemSpec {
        SystemSpec {
            chi_mhz: self.chi_mhz,
            kerr_khz: self.kerr_khz,
            chi_prime_khz: self.chi_prime_khz,
        }
    }
}

/// Where a drive comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum DriveSource {
    /// A published parameter set, by name (`"V"`).
    Table {
        name: String,
        #[serde(default)]
        envelope: Option<Envelope>,
    },
    /// A drive file written by `pnd optimize` or by hand.
    File {
        path: PathBuf,
        #[serde(default)]
        envelope: Option<Envelope>,
    },
    Inline {
        system: SystemSpec,
        tones: Vec<DriveTone>,
        #[serde(default)]
        envelope: Option<Envelope>,
    },
}

/// Drive, system constants and (for tables and optimizer files) the
/// declared target.
pub struct ResolvedDrive {
    pub system: SystemSpec,
    pub tones: Vec<DriveTone>,
    pub envelope: Option<Envelope>,
    pub target_khz: Option<Vec<f64>>,
}

impl DriveSource {
    pub fn resolve(&self, loaded: &Loaded) -> CliResult<ResolvedDrive> {
        match self {
            DriveSource::Table { name, envelope } => {
                let t =
                    pnd_core::tables::table(name).ok_or_else(|| CliError::Config(format!("unknown table `{name}`")))?;
                Ok(ResolvedDrive {
                    system: SystemSpec {
                        chi_mhz: t.chi_mhz,
                        kerr_khz: t.kerr_khz,
                        chi_prime_khz: t.chi_prime_khz,
                    },
                    tones: t.tones(),
                    envelope: *envelope,
                    target_khz: Some(t.target_khz.to_vec()),
                })
            }
            DriveSource::File { path, envelope } => {
                let file = DriveFile::read(&loaded.resolve(path))?;
                Ok(ResolvedDrive {
                    system: file.system(),
                    envelope: envelope.or(Some(file.envelope)),
                    target_khz: file.target_khz.clone(),
                    tones: file.tones,
                })
            }
            DriveSource::Inline {
                system,
                tones,
                envelope,
            } => Ok(ResolvedDrive {
                system: *system,
                tones: tones.clone(),
                envelope: *envelope,
                target_khz: None,
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// optimize

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    pub system: SystemSpec,
    pub target: TargetSpec,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
}

// ---------------------------------------------------------------------------
// verify

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub drive: DriveSource,
    /// Declared target; defaults to the one carried by the drive source.
    #[serde(default)]
    pub target_khz: Option<Vec<f64>>,
    /// Highest Fock index evaluated; defaults to the highest addressed one.
    #[serde(default)]
    pub n_max: Option<usize>,
    #[serde(default = "default_gamma")]
    pub gamma_q_khz: f64,
    #[serde(default)]
    pub gamma_phi_khz: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance_khz: f64,
}

fn default_gamma() -> f64 {
    3.0
}

fn default_tolerance() -> f64 {
    0.5
}

// ---------------------------------------------------------------------------
// simulate

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Pi8,
    ThetaScan,
    TgScan,
    KerrCancel,
    Cphase,
    Micromotion,
    ErrorTransparency,
    Custom,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub experiment: ExperimentKind,
    /// Experiment settings; omitted keys take their defaults.
    #[serde(default)]
    pub settings: Value,
    /// Recorded for provenance; the experiments themselves are deterministic.
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Typed settings of each experiment.
pub enum Experiment {
    Pi8(Pi8Settings),
    ThetaScan(ThetaScanSettings),
    TgScan(ThetaScanSettings),
    KerrCancel(KerrCancelSettings),
    Cphase(CPhaseSettings),
    Micromotion(MicromotionSettings),
    ErrorTransparency(TransparencySettings),
    Custom(CustomSettings),
}

impl SimulateConfig {
    pub fn experiment(&self) -> CliResult<Experiment> {
        let s = if self.settings.is_null() {
            Value::Object(Default::default())
        } else {
            self.settings.clone()
        };
        Ok(match self.experiment {
            ExperimentKind::Pi8 => Experiment::Pi8(parse_value(s)?),
            ExperimentKind::ThetaScan => {
                let mut t: ThetaScanSettings = parse_value(s)?;
                t.tg_multipliers.clear();
                Experiment::ThetaScan(t)
            }
            ExperimentKind::TgScan => {
                let mut t: ThetaScanSettings = parse_value(s)?;
                t.thetas.clear();
                Experiment::TgScan(t)
            }
            ExperimentKind::KerrCancel => Experiment::KerrCancel(parse_value(s)?),
            ExperimentKind::Cphase => Experiment::Cphase(parse_value(s)?),
            ExperimentKind::Micromotion => Experiment::Micromotion(parse_value(s)?),
            ExperimentKind::ErrorTransparency => Experiment::ErrorTransparency(parse_value(s)?),
            ExperimentKind::Custom => Experiment::Custom(parse_value(s)?),
        })
    }
}

/// Cavity state at `t = 0` (ancilla in `|g⟩`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    KittenPlus,
    Fock {
        n: usize,
    },
    Cat {
        alpha_re: f64,
        #[serde(default)]
        alpha_im: f64,
        #[serde(default)]
        odd: bool,
    },
    /// `[n, re, im]` triples, normalized on use.
    Coefficients {
        amplitudes: Vec<(usize, f64, f64)>,
    },
}

/// Phases the cavity is compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetChoice {
    /// Order-4 engineered spectrum of the drive itself.
    Engineered,
    /// The target carried by the drive source.
    Declared,
    Energies {
        energies_khz: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomSettings {
    pub drive: DriveSource,
    #[serde(default = "default_n_cut")]
    pub n_cut: usize,
    #[serde(default = "default_initial")]
    pub initial: InitialState,
    #[serde(default = "default_target")]
    pub target: TargetChoice,
    /// Run length; defaults to the end of the envelope.
    #[serde(default)]
    pub duration_us: Option<f64>,
    #[serde(default)]
    pub gamma_q_khz: f64,
    #[serde(default)]
    pub gamma_phi_khz: f64,
    #[serde(default)]
    pub kappa_khz: f64,
    #[serde(default)]
    pub relaxation: RelaxationModel,
    #[serde(default = "default_steps")]
    pub steps_per_period: usize,
    #[serde(default = "default_records")]
    pub records: usize,
    /// Apply the kitten recovery to the final state and report its fidelity.
    #[serde(default)]
    pub recovery: bool,
    #[serde(default)]
    pub wigner_times_us: Vec<f64>,
    #[serde(default)]
    pub wigner_grid: WignerGrid,
}

fn default_n_cut() -> usize {
    6
}

fn default_initial() -> InitialState {
    InitialState::KittenPlus
}

fn default_target() -> TargetChoice {
    TargetChoice::Engineered
}

fn default_steps() -> usize {
    2000
}

fn default_records() -> usize {
    200
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_override_creates_path() {
        let mut l = Loaded {
            value: serde_json::json!({"system": {"chi_mhz": 2.0}}),
            base_dir: PathBuf::new(),
        };
        l.set_seed(&["optimizer", "seed"], 7);
        assert_eq!(l.value["optimizer"]["seed"], 7);
        l.set_seed(&["seed"], 9);
        assert_eq!(l.value["seed"], 9);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = serde_json::json!({"experiment": "pi8", "bogus": 1});
        assert!(parse_value::<SimulateConfig>(bad).is_err());
        let nested = SimulateConfig {
            experiment: ExperimentKind::Pi8,
            settings: serde_json::json!({"bogus": 1}),
            seed: None,
        };
        assert!(nested.experiment().is_err());
    }

    #[test]
    fn scan_kinds_split_the_theta_experiment() {
        let c = SimulateConfig {
            experiment: ExperimentKind::TgScan,
            settings: Value::Null,
            seed: None,
        };
        match c.experiment().unwrap() {
            Experiment::TgScan(t) => {
                assert!(t.thetas.is_empty());
                assert_eq!(t.tg_multipliers, vec![1.0, 2.0, 4.0]);
            }
            _ => panic!("wrong variant"),
        }
    }

    #[test]
    fn drive_file_round_trip() {
        let f = DriveFile {
            chi_mhz: 2.0,
            kerr_khz: 3.0,
            chi_prime_khz: 6.0,
            tones: pnd_core::tables::table("VII").unwrap().tones(),
            envelope: Envelope::abrupt(0.0, 4.0),
            target_khz: None,
            achieved_khz: None,
            objective: None,
            residual_khz: None,
            provenance: None,
        };
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.contains("\"chi_MHz\"") && text.contains("\"delta_den\""));
        assert_eq!(serde_json::from_str::<DriveFile>(&text).unwrap(), f);
    }
}
