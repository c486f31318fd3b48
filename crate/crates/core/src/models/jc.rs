// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

//! Mapping from a cavity coupled to a weakly anharmonic mode (transmon) to the
//! dispersive constants χ, K and χ′, to fourth order in the coupling.

use serde::{Deserialize, Serialize};

use crate::error::{PndError, Result};

/// Microscopic parameters, ω/2π in MHz.
///
/// `delta_qa_mhz` is the bare detuning `ω_a − ω_q` of the cavity from the
/// anharmonic mode; `alpha_mhz` is the anharmonicity entering as
/// `−(α/2) d†d†dd`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JCParams {
    pub g_mhz: f64,
    pub delta_qa_mhz: f64,
    pub alpha_mhz: f64,
}

/// Dispersive constants produced by [`jc_to_dispersive`], in MHz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersiveConstants {
    pub chi_mhz: f64,
    pub kerr_mhz: f64,
    pub chi_prime_mhz: f64,
    /// Non-fatal findings, e.g. a coupling that is not small against Δ.
    pub warnings: Vec<String>,
}

/// Fourth-order dispersive expansion.
///
/// The expressions are ratios of homogeneous polynomials, so they can be
/// evaluated directly in MHz.
pub fn jc_to_dispersive(jc: &JCParams) -> Result<DispersiveConstants> {
    let (g, d, a) = (jc.g_mhz, jc.delta_qa_mhz, jc.alpha_mhz);
    if !(g.is_finite() && d.is_finite() && a.is_finite()) {
        return Err(PndError::InvalidParameter("non-finite JC parameters".into()));
    }
    let scale = d.abs().max(a.abs());
    let guard = 1e-6 * scale;
    for (name, v) in [
        ("Delta", d),
        ("Delta + alpha", d + a),
        ("alpha + 2 Delta", a + 2.0 * d),
        ("3 alpha + 2 Delta", 3.0 * a + 2.0 * d),
    ] {
        if v.abs() <= guard {
            return Err(PndError::PoleProximity(format!("{name} = {v:.3e} MHz")));
        }
    }
    let mut warnings = Vec::new();
    if g.abs() > d.abs() / 5.0 {
        warnings.push(format!(
            "|g| = {} MHz is not small compared with |Delta| = {} MHz",
            g.abs(),
            d.abs()
        ));
    }
    let g2 = g * g;
    let g4 = g2 * g2;
    let d3 = d * d * d;
    let dpa = d + a;
    let dpa3 = dpa * dpa * dpa;
    let chi = 2.0 * g2 * a / (d * dpa) - 4.0 * g4 * a * (a * a + 2.0 * a * d + 2.0 * d * d) / (d3 * dpa3);
    let kerr = 2.0 * g4 * a / (d3 * (a + 2.0 * d));
    let chi_prime = 4.0 * g4 * a * a * (3.0 * a * a * a + 11.0 * a * a * d + 15.0 * a * d * d + 9.0 * d3)
        / (d3 * dpa3 * (a + 2.0 * d) * (3.0 * a + 2.0 * d));
    Ok(DispersiveConstants {
        chi_mhz: chi,
        kerr_mhz: kerr,
        chi_prime_mhz: chi_prime,
        warnings,
    })
}
