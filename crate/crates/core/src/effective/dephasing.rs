// Copyright 2026 PND Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{check_resonance, denominator, DEFAULT_RESONANCE_GUARD};
use crate::error::Result;
use crate::models::{DriveTone, NoiseParams, QubitChannel, SystemParams};
use crate::quantum::{CompositeOperator, HilbertDims};
use crate::{CMatrix, C64};

/// Qubit-induced cavity dephasing predicted by the effective model.
///
/// `gamma_mhz[n1][n2]` is the decay rate of `ρ_{n1 n2}` with the same rate
/// convention as the simulator: the coherence decays as `exp(−2π γ t)` for
/// `t` in µs. For complex amplitudes only the real part (the decay) is kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DephasingRates {
    pub gamma_mhz: Vec<Vec<f64>>,
    pub p_excited: Vec<f64>,
    pub include_initial_kick: bool,
}

impl DephasingRates {
    pub fn gamma(&self, n1: usize, n2: usize) -> f64 {
        self.gamma_mhz[n1][n2]
    }
}

/// One jump operator of the effective cavity-only master equation.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveJump {
    pub op: CompositeOperator,
    pub rate_mhz: f64,
}

fn ratios(tones: &[DriveTone], n: usize, cp: f64) -> Vec<C64> {
    tones.iter().map(|t| t.omega / denominator(t, n, cp)).collect()
}

/// Time-averaged excited-state probability for cavity state `n`.
pub fn qubit_excitation_prob(
    tones: &[DriveTone],
    params: &SystemParams,
    n: usize,
    include_initial_kick: bool,
) -> Result<f64> {
    let cp = params.chi_prime_over_chi();
    check_resonance(tones, n, cp, DEFAULT_RESONANCE_GUARD, "q")?;
    Ok(excitation_unchecked(tones, n, cp, include_initial_kick))
}

pub(crate) fn excitation_unchecked(tones: &[DriveTone], n: usize, cp: f64, include_initial_kick: bool) -> f64 {
    let r = ratios(tones, n, cp);
    let first: f64 = r.iter().map(|z| z.norm_sqr()).sum();
    if include_initial_kick {
        first + r.iter().sum::<C64>().norm_sqr()
    } else {
        first
    }
}

/// Rate table `γ_{n1 n2}` for `n1, n2 ≤ n_max`.
pub fn dephasing_rates(
    tones: &[DriveTone],
    params: &SystemParams,
    noise: &NoiseParams,
    n_max: usize,
    include_initial_kick: bool,
) -> Result<DephasingRates> {
    let cp = params.chi_prime_over_chi();
    check_resonance(tones, n_max, cp, DEFAULT_RESONANCE_GUARD, "q")?;
    let q = noise.qubit(QubitChannel::Q);
    let p: Vec<f64> = (0..=n_max)
        .map(|n| excitation_unchecked(tones, n, cp, include_initial_kick))
        .collect();
    let s: Vec<C64> = (0..=n_max)
        .map(|n| {
            if include_initial_kick {
                ratios(tones, n, cp).iter().sum()
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    let gamma_mhz = (0..=n_max)
        .map(|n1| {
            (0..=n_max)
                .map(|n2| {
                    let cross = (s[n1].conj() * s[n2]).re;
                    let mut g = (q.gamma_phi_mhz + q.gamma_q_mhz) / 2.0 * (p[n1] + p[n2]) - q.gamma_phi_mhz * cross;
                    if n1 == n2 {
                        g = 0.0;
                    }
                    g
                })
                .collect()
        })
        .collect();
    Ok(DephasingRates {
        gamma_mhz,
        p_excited: p,
        include_initial_kick,
    })
}

/// Cavity-only jump operators whose Lindblad dissipator reproduces
/// [`dephasing_rates`]. Operators act on a cavity labelled `a` with cut-off
/// `n_max`.
pub fn effective_cavity_jumps(
    tones: &[DriveTone],
    params: &SystemParams,
    noise: &NoiseParams,
    n_max: usize,
    include_initial_kick: bool,
) -> Result<Vec<EffectiveJump>> {
    let cp = params.chi_prime_over_chi();
    check_resonance(tones, n_max, cp, DEFAULT_RESONANCE_GUARD, "q")?;
    let q = noise.qubit(QubitChannel::Q);
    let dims = HilbertDims::cavity("a", n_max);
    let dim = n_max + 1;
    let diag_op = |entries: &[(usize, C64)]| -> Result<CompositeOperator> {
        let mut m = CMatrix::zeros(dim, dim);
        for &(n, v) in entries {
            m[(n, n)] = v;
        }
        CompositeOperator::new(dims.clone(), m)
    };
    let mut jumps = Vec::new();
    for rate in [q.gamma_phi_mhz, q.gamma_q_mhz] {
        if rate == 0.0 {
            continue;
        }
        for n in 0..=n_max {
            for r in ratios(tones, n, cp) {
                jumps.push(EffectiveJump {
                    op: diag_op(&[(n, r.conj())])?,
                    rate_mhz: rate,
                });
            }
        }
    }
    if include_initial_kick {
        let s: Vec<(usize, C64)> = (0..=n_max)
            .map(|n| (n, ratios(tones, n, cp).iter().sum::<C64>().conj()))
            .collect();
        if q.gamma_phi_mhz != 0.0 {
            jumps.push(EffectiveJump {
                op: diag_op(&s)?,
                rate_mhz: q.gamma_phi_mhz,
            });
        }
        if q.gamma_q_mhz != 0.0 {
            for &entry in &s {
                jumps.push(EffectiveJump {
                    op: diag_op(&[entry])?,
                    rate_mhz: q.gamma_q_mhz,
                });
            }
        }
    }
    Ok(jumps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables;
    use crate::Rational;

    #[test]
    fn excitation_examples() {
        let p = SystemParams::new(2.0, 4);
        let tones = [DriveTone::new(2, 0.05, Rational::new(1, 2))];
        assert!((qubit_excitation_prob(&tones, &p, 2, true).unwrap() - 0.02).abs() < 1e-15);
        assert!((qubit_excitation_prob(&tones, &p, 2, false).unwrap() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn noiseless_rates_vanish() {
        let t = tables::table("V").unwrap();
        let r = dephasing_rates(&t.tones(), &t.system_params(6), &NoiseParams::none(), 6, true).unwrap();
        assert!(r.gamma_mhz.iter().flatten().all(|g| *g == 0.0));
    }

    #[test]
    fn relaxation_only_reduces_to_mean_excitation() {
        let t = tables::table("V").unwrap();
        let noise = NoiseParams::from_khz(3.0, 0.0, 0.0);
        let r = dephasing_rates(&t.tones(), &t.system_params(6), &noise, 6, true).unwrap();
        for n1 in 0..7 {
            for n2 in 0..7 {
                if n1 != n2 {
                    let expect = 0.003 / 2.0 * (r.p_excited[n1] + r.p_excited[n2]);
                    assert_eq!(r.gamma(n1, n2), expect);
                }
            }
        }
    }

    #[test]
    fn jump_list_reproduces_rates() {
        // For diagonal jumps L = Σ a_n |n⟩⟨n| the coherence ρ_{n1 n2} decays at
        // Σ_k Γ_k (|a_k(n1)|²/2 + |a_k(n2)|²/2 − Re a_k(n1) a_k(n2)*).
        let t = tables::table("III").unwrap();
        let p = t.system_params(6);
        for kick in [true, false] {
            let noise = NoiseParams::from_khz(3.0, 1.5, 0.0);
            let r = dephasing_rates(&t.tones(), &p, &noise, 6, kick).unwrap();
            let jumps = effective_cavity_jumps(&t.tones(), &p, &noise, 6, kick).unwrap();
            for n1 in 0..7 {
                for n2 in 0..7 {
                    if n1 == n2 {
                        continue;
                    }
                    let mut g = 0.0;
                    for j in &jumps {
                        let a1 = j.op.matrix()[(n1, n1)];
                        let a2 = j.op.matrix()[(n2, n2)];
                        g += j.rate_mhz * (a1.norm_sqr() / 2.0 + a2.norm_sqr() / 2.0 - (a1 * a2.conj()).re);
                    }
                    assert!((g - r.gamma(n1, n2)).abs() < 1e-15, "{n1} {n2}");
                }
            }
        }
    }
}
