// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

/// Overshoot of the ramp profile, `(√46 − 1)/5`. With this value the
/// integral of `λ²` over a ramp of length `3 T_s` equals `3 T_s`, so a ramped
/// drive accumulates the same dispersive phase as an abrupt one.
pub const LAMBDA_S: f64 = 1.156_465_996_625_053_6;

/// Time profile `λ(t)` multiplying the whole drive. Times in µs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Envelope {
    /// `λ = 1` on `[t_i, t_f]`, zero elsewhere.
    Abrupt { t_i: f64, t_f: f64 },
    /// `λ = √2 sin(π t / T_G)` on `[0, T_G]`.
    SineGate { t_gate: f64 },
    /// Sinusoidal ramp-up over `3 T_s`, plateau at 1, mirrored ramp-down.
    RampUpDown { t_s: f64, t_i: f64, t_f: f64 },
}

impl Envelope {
    pub fn abrupt(t_i: f64, t_f: f64) -> Self {
        Envelope::Abrupt { t_i, t_f }
    }

    pub fn sine_gate(t_gate: f64) -> Self {
        Envelope::SineGate { t_gate }
    }

    pub fn ramp(t_s: f64, t_i: f64, t_f: f64) -> Self {
        Envelope::RampUpDown { t_s, t_i, t_f }
    }

    /// Support `[start, end]` of the envelope.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Envelope::Abrupt { t_i, t_f } | Envelope::RampUpDown { t_i, t_f, .. } => (t_i, t_f),
            Envelope::SineGate { t_gate } => (0.0, t_gate),
        }
    }

    /// Largest value of `λ`.
    pub fn peak(&self) -> f64 {
        match self {
            Envelope::Abrupt { .. } => 1.0,
            Envelope::SineGate { .. } => SQRT_2,
            Envelope::RampUpDown { .. } => LAMBDA_S,
        }
    }

    /// `λ(t)`.
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Envelope::Abrupt { t_i, t_f } => {
                if t >= t_i && t <= t_f {
                    1.0
                } else {
                    0.0
                }
            }
            Envelope::SineGate { t_gate } => {
                if t >= 0.0 && t <= t_gate {
                    SQRT_2 * (PI * t / t_gate).sin()
                } else {
                    0.0
                }
            }
            Envelope::RampUpDown { t_s, t_i, t_f } => {
                if t < t_i || t > t_f {
                    return 0.0;
                }
                let rise = t - t_i;
                let fall = t_f - t;
                if rise <= t_s {
                    ramp_inner(rise, t_s)
                } else if rise <= 3.0 * t_s {
                    ramp_outer(rise, t_s)
                } else if fall <= t_s {
                    ramp_inner(fall, t_s)
                } else if fall <= 3.0 * t_s {
                    ramp_outer(fall, t_s)
                } else {
                    1.0
                }
            }
        }
    }
}

fn ramp_inner(s: f64, t_s: f64) -> f64 {
    LAMBDA_S * (PI * s / (2.0 * t_s)).sin()
}

fn ramp_outer(s: f64, t_s: f64) -> f64 {
    0.5 * (LAMBDA_S - 1.0) * (PI * s / (2.0 * t_s)).sin() + 0.5 * (LAMBDA_S + 1.0)
}

/// Envelope evaluation as a free function.
pub fn envelope_value(env: &Envelope, t: f64) -> f64 {
    env.value(t)
}
