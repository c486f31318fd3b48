// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Result files. Every file carries the tool version and the SHA-256 of the
//! resolved configuration; CSV numbers use nine significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const TOOL: &str = "pnd";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Identity of a run.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_sha256: String,
}

impl Provenance {
    /// Hashes the canonical (key-sorted, compact) JSON of the configuration.
    pub fn of(config: &serde_json::Value) -> Self {
        let bytes = serde_json::to_vec(config).expect("JSON values always serialize");
        Self {
            tool: TOOL,
            version: VERSION,
            config_sha256: hex::encode(Sha256::digest(&bytes)),
        }
    }
}

#[derive(Serialize)]
struct Stamped<'a, T: Serialize> {
    provenance: &'a Provenance,
    #[serde(flatten)]
    body: &'a T,
}

/// Output directory bound to one run.
pub struct OutputDir {
    root: PathBuf,
    provenance: Provenance,
}

impl OutputDir {
    pub fn create(root: &Path, provenance: Provenance) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(|source| CliError::Write {
            path: root.to_path_buf(),
            source,
        })?;
        Ok(Self {
            root: root.to_path_buf(),
            provenance,
        })
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    fn write(&self, name: &str, contents: &str) -> CliResult<PathBuf> {
        let path = self.root.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    }

    pub fn json<T: Serialize>(&self, name: &str, body: &T) -> CliResult<PathBuf> {
        let stamped = Stamped {
            provenance: &self.provenance,
            body,
        };
        let mut text = serde_json::to_string_pretty(&stamped).map_err(|e| CliError::Config(e.to_string()))?;
        text.push('\n');
        self.write(name, &text)
    }

    /// CSV with a leading `#` provenance line.
    pub fn csv(&self, name: &str, header: &[&str], rows: &[Vec<f64>]) -> CliResult<PathBuf> {
        let mut text = format!(
            "# {} {} config_sha256={}\n{}\n",
            self.provenance.tool,
            self.provenance.version,
            self.provenance.config_sha256,
            header.join(",")
        );
        for row in rows {
            let cells: Vec<String> = row.iter().map(|v| sig9(*v)).collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
        self.write(name, &text)
    }
}

/// `%.9g`: nine significant digits, trailing zeros trimmed, exponent form
/// outside `1e-5 ≤ |v| < 1e9`.
pub fn sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim(&format!("{v:.decimals$}"))
    } else {
        let mut out = trim(mantissa);
        let _ = write!(out, "e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
        out
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
