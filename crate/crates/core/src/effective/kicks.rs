// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use super::{check_resonance, denominator, DEFAULT_RESONANCE_GUARD};
use crate::error::Result;
use crate::models::{single_cavity_dims, DriveTone, SystemParams};
use crate::quantum::CompositeOperator;
use crate::{CMatrix, Rational, C64};

/// First- and second-order kick operators at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct KickOperators {
    pub g1: CompositeOperator,
    pub g2: CompositeOperator,
}

/// Kick operators on the single-cavity space (cavity `a` ⊗ qubit `q`) at time
/// `t` (µs). Both are Hermitian and periodic with the micromotion period.
pub fn kick_operators(tones: &[DriveTone], params: &SystemParams, t: f64) -> Result<KickOperators> {
    let cp = params.chi_prime_over_chi();
    let n_cut = params.n_cut;
    check_resonance(tones, n_cut, cp, DEFAULT_RESONANCE_GUARD, "q")?;
    let chi = params.chi();
    let dim = 2 * (n_cut + 1);
    let mut g1 = CMatrix::zeros(dim, dim);
    let mut g2 = CMatrix::zeros(dim, dim);
    let zero = Rational::from_integer(0);
    for n in 0..=n_cut {
        let w: Vec<f64> = tones.iter().map(|tone| denominator(tone, n, cp)).collect();
        let mut lower = C64::new(0.0, 0.0);
        for (tone, wm) in tones.iter().zip(&w) {
            let phase = C64::from_polar(1.0, wm * chi * t);
            lower += tone.omega * phase / C64::new(0.0, *wm);
        }
        g1[(2 * n, 2 * n + 1)] = lower;
        g1[(2 * n + 1, 2 * n)] = lower.conj();

        let mut c = 0.0;
        for (i1, t1) in tones.iter().enumerate() {
            for t2 in tones {
                let diff = t1.nu() - t2.nu();
                if diff == zero {
                    continue;
                }
                let d = *diff.numer() as f64 / *diff.denom() as f64;
                let z = t1.omega * t2.omega.conj() * C64::from_polar(1.0, d * chi * t);
                c -= z.im / (w[i1] * d);
            }
        }
        g2[(2 * n, 2 * n)] = C64::new(-c, 0.0);
        g2[(2 * n + 1, 2 * n + 1)] = C64::new(c, 0.0);
    }
    let dims = single_cavity_dims(n_cut);
    Ok(KickOperators {
        g1: CompositeOperator::new(dims.clone(), g1)?,
        g2: CompositeOperator::new(dims, g2)?,
    })
}

/// First-order amplitude on `|n, e⟩` at time `t` (µs) for a system prepared in
/// `|n, g⟩` at `t = 0` under an abrupt drive.
pub fn first_order_excited_amplitude(tones: &[DriveTone], params: &SystemParams, n: usize, t: f64) -> C64 {
    let cp = params.chi_prime_over_chi();
    let chi = params.chi();
    tones
        .iter()
        .map(|tone| {
            let w = denominator(tone, n, cp);
            tone.omega.conj() / w * (C64::from_polar(1.0, -w * chi * t) - 1.0)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables;

    #[test]
    fn zero_drive_has_zero_kicks() {
        let p = SystemParams::new(2.56, 4);
        let tones = vec![DriveTone::new(0, 0.0, Rational::new(1, 2))];
        let k = kick_operators(&tones, &p, 0.3).unwrap();
        assert_eq!(k.g1.matrix().norm(), 0.0);
        assert_eq!(k.g2.matrix().norm(), 0.0);
    }

    #[test]
    fn single_tone_has_no_second_kick() {
        let p = SystemParams::new(2.56, 4);
        let tones = vec![DriveTone::new(1, 0.05, Rational::new(1, 4))];
        let k = kick_operators(&tones, &p, 0.17).unwrap();
        assert!(k.g1.matrix().norm() > 0.0);
        assert_eq!(k.g2.matrix().norm(), 0.0);
    }

    #[test]
    fn kicks_are_hermitian_and_periodic() {
        let table = tables::table("V").unwrap();
        let p = table.system_params(6);
        let tones = table.tones();
        let tm = super::super::micromotion_period(&tones, p.chi());
        let a = kick_operators(&tones, &p, 0.123).unwrap();
        let b = kick_operators(&tones, &p, 0.123 + tm).unwrap();
        assert!(a.g1.hermiticity_error() < 1e-14);
        assert!(a.g2.hermiticity_error() < 1e-14);
        assert!((a.g1.matrix() - b.g1.matrix()).norm() < 1e-9);
        assert!((a.g2.matrix() - b.g2.matrix()).norm() < 1e-9);
    }

    #[test]
    fn first_order_amplitude_matches_g1_difference() {
        let table = tables::table("III").unwrap();
        let p = table.system_params(6);
        let tones = table.tones();
        let t = 0.77;
        let g_t = kick_operators(&tones, &p, t).unwrap().g1;
        let g_0 = kick_operators(&tones, &p, 0.0).unwrap().g1;
        for n in 0..=6 {
            let from_g = C64::new(0.0, -1.0) * (g_t.matrix()[(2 * n + 1, 2 * n)] - g_0.matrix()[(2 * n + 1, 2 * n)]);
            let direct = first_order_excited_amplitude(&tones, &p, n, t);
            assert!((from_g - direct).norm() < 1e-13);
        }
    }
}
