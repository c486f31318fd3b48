// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::effective::micromotion_period;
use crate::error::{PndError, Result};
use crate::models::DriveTone;

/// Number of steps per micromotion period used by default.
pub const DEFAULT_STEPS_PER_PERIOD: f64 = 2000.0;

/// Fixed-step RK4 propagation settings. Times in µs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationConfig {
    pub t_start: f64,
    pub t_end: f64,
    /// Largest step; each interval between record times is split into equal
    /// steps no longer than this.
    pub step: f64,
    /// Times at which the state is reported; `t_end` is always reported.
    #[serde(default)]
    pub record_times: Vec<f64>,
}

impl PropagationConfig {
    pub fn new(t_start: f64, t_end: f64, step: f64) -> Self {
        Self {
            t_start,
            t_end,
            step,
            record_times: Vec::new(),
        }
    }

    /// Step of `T_M / 2000` for the given tones and χ (rad/µs).
    pub fn for_tones(tones: &[DriveTone], chi: f64, t_start: f64, t_end: f64) -> Self {
        Self::new(
            t_start,
            t_end,
            micromotion_period(tones, chi) / DEFAULT_STEPS_PER_PERIOD,
        )
    }

    pub fn with_record_times(mut self, times: Vec<f64>) -> Self {
        self.record_times = times;
        self
    }

    /// Records `count + 1` evenly spaced times including both ends.
    pub fn with_uniform_records(mut self, count: usize) -> Self {
        let count = count.max(1);
        self.record_times = (0..=count)
            .map(|k| self.t_start + (self.t_end - self.t_start) * k as f64 / count as f64)
            .collect();
        self
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    /// Largest admissible step for evolution containing rates up to
    /// `max_rate` (rad/µs).
    pub fn step_bound(max_rate: f64) -> f64 {
        if max_rate > 0.0 {
            2.0 * PI / (40.0 * max_rate)
        } else {
            f64::INFINITY
        }
    }

    /// Checks the span and step and returns the sorted record times.
    pub(crate) fn checked_records(&self, max_rate: f64) -> Result<Vec<f64>> {
        if !(self.t_end >= self.t_start) || !self.t_start.is_finite() || !self.t_end.is_finite() {
            return Err(PndError::InvalidParameter(format!(
                "invalid time span [{}, {}]",
                self.t_start, self.t_end
            )));
        }
        if !(self.step > 0.0) {
            return Err(PndError::InvalidParameter("step must be positive".into()));
        }
        let bound = Self::step_bound(max_rate);
        if self.step > bound {
            return Err(PndError::StepSize { step: self.step, bound });
        }
        let mut times: Vec<f64> = self
            .record_times
            .iter()
            .copied()
            .filter(|t| *t >= self.t_start && *t <= self.t_end)
            .collect();
        times.push(self.t_end);
        times.sort_by(f64::total_cmp);
        times.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        Ok(times)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_are_sorted_and_include_end() {
        let c = PropagationConfig::new(0.0, 1.0, 0.01).with_record_times(vec![0.5, 0.2, 2.0, 0.2]);
        assert_eq!(c.checked_records(1.0).unwrap(), vec![0.2, 0.5, 1.0]);
    }

    #[test]
    fn coarse_step_is_rejected() {
        let c = PropagationConfig::new(0.0, 1.0, 0.5);
        assert!(matches!(c.checked_records(10.0), Err(PndError::StepSize { .. })));
    }

    #[test]
    fn uniform_records() {
        let c = PropagationConfig::new(1.0, 2.0, 0.01).with_uniform_records(4);
        assert_eq!(c.record_times, vec![1.0, 1.25, 1.5, 1.75, 2.0]);
    }
}
