// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dynamics::FidelityTrace;
use crate::error::{PndError, Result};
use crate::quantum::WignerMap;

/// One sample of a fidelity time series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub time_us: f64,
    pub fidelity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

/// Wigner function of the cavity at a given time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerSnapshot {
    pub time_us: f64,
    pub map: WignerMap,
}

/// Result of a named experiment, ready for serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    /// Settings the experiment ran with.
    pub inputs: serde_json::Value,
    pub scalars: BTreeMap<String, f64>,
    pub series: Vec<SeriesPoint>,
    /// SHA-256 of the run configuration, filled in by the caller.
    #[serde(default)]
    pub config_hash: Option<String>,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing)]
    pub wigner: Vec<WignerSnapshot>,
}

/// Slack allowed above one for fidelities produced by floating point.
const FIDELITY_SLACK: f64 = 1e-9;

impl ExperimentReport {
    pub fn new<S: Serialize>(name: &str, inputs: &S) -> Result<Self> {
        let inputs = serde_json::to_value(inputs).map_err(|e| PndError::InvalidParameter(e.to_string()))?;
        Ok(Self {
            name: name.to_string(),
            inputs,
            scalars: BTreeMap::new(),
            series: Vec::new(),
            config_hash: None,
            warnings: Vec::new(),
            wigner: Vec::new(),
        })
    }

    pub fn set(&mut self, key: impl Into<String>, value: f64) {
        self.scalars.insert(key.into(), value);
    }

    pub fn scalar(&self, key: &str) -> Option<f64> {
        self.scalars.get(key).copied()
    }

    /// Like [`ExperimentReport::scalar`], failing on a missing key.
    pub fn require(&self, key: &str) -> Result<f64> {
        self.scalar(key)
            .ok_or_else(|| PndError::InvalidParameter(format!("report `{}` has no scalar `{key}`", self.name)))
    }

    pub fn set_series(&mut self, trace: &FidelityTrace, with_lambda: bool) {
        self.series = trace
            .times
            .iter()
            .zip(&trace.fidelity)
            .zip(&trace.lambda)
            .map(|((t, f), l)| SeriesPoint {
                time_us: *t,
                fidelity: *f,
                lambda: with_lambda.then_some(*l),
            })
            .collect();
    }

    /// Fidelity of the series sample closest to `t`.
    pub fn fidelity_near(&self, t: f64) -> Option<f64> {
        self.series
            .iter()
            .min_by(|a, b| (a.time_us - t).abs().total_cmp(&(b.time_us - t).abs()))
            .map(|p| p.fidelity)
    }

    /// Every scalar whose key mentions a fidelity, and every series point,
    /// must lie in `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        let bad = |v: f64| !(-FIDELITY_SLACK..=1.0 + FIDELITY_SLACK).contains(&v);
        for (k, v) in &self.scalars {
            if k.contains("fidelity") && !k.contains("infidelity") && bad(*v) {
                return Err(PndError::Tolerance(format!("{k} = {v} outside [0, 1]")));
            }
        }
        if let Some(p) = self.series.iter().find(|p| bad(p.fidelity)) {
            return Err(PndError::Tolerance(format!(
                "fidelity {} at t = {} us outside [0, 1]",
                p.fidelity, p.time_us
            )));
        }
        Ok(())
    }
}
