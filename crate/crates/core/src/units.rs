// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Unit conversions between configuration frequencies and angular rates.
//!
//! Configuration values are ordinary frequencies (ω/2π). Internally every
//! rate is angular, in rad/µs, so `1 MHz` maps to `2π rad/µs`.

use std::f64::consts::TAU;

/// MHz (ω/2π) to rad/µs.
#[inline]
pub fn mhz_to_angular(f_mhz: f64) -> f64 {
    TAU * f_mhz
}

/// kHz (ω/2π) to rad/µs.
#[inline]
pub fn khz_to_angular(f_khz: f64) -> f64 {
    TAU * f_khz * 1e-3
}

/// rad/µs to MHz (ω/2π).
#[inline]
pub fn angular_to_mhz(w: f64) -> f64 {
    w / TAU
}

/// rad/µs to kHz (ω/2π).
#[inline]
pub fn angular_to_khz(w: f64) -> f64 {
    w / TAU * 1e3
}
