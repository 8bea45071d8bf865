use std::f64::consts::PI;

use serde::Serialize;

use crate::sum::CompensatedSum;

/// Fermionic Matsubara frequency `ω_n = πT(2n + 1)`.
pub fn matsubara_frequency(n: i64, t: f64) -> f64 {
    PI * t * (2 * n + 1) as f64
}

/// Symmetric truncation `n = −N .. N−1`, summed as `(n, −n−1)` pairs from
/// `n = 0` outward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatsubaraConfig {
    pub cutoff: usize,
    /// Add the analytically summed leading `1/ω²` tail where the summand has one.
    pub tail_correction: bool,
}

impl MatsubaraConfig {
    pub fn new(cutoff: usize) -> Self {
        Self {
            cutoff: cutoff.max(1),
            tail_correction: true,
        }
    }
}

/// Truncated sum with a certified bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatsubaraEstimate {
    pub value: f64,
    pub tail_bound: f64,
    pub cutoff: usize,
}

/// Trigamma `ψ'(x)` for `x > 0`: upward recurrence, then the asymptotic series.
pub fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 20.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let ix = 1.0 / x;
    let ix2 = ix * ix;
    // 1/x + 1/2x² + Σ B_{2k}/x^{2k+1}
    let series = ix2
        * (1.0 / 6.0
            - ix2 * (1.0 / 30.0 - ix2 * (1.0 / 42.0 - ix2 * (1.0 / 30.0 - ix2 * 5.0 / 66.0))));
    acc + ix + 0.5 * ix2 + ix * series
}

/// Upper bound on `Σ_{n ≥ N} (2n+1)^{-k}` for `k ≥ 2`.
fn odd_power_tail(n: usize, k: i32) -> f64 {
    let m = (2 * n + 1) as f64;
    m.powi(-k) + 1.0 / (2.0 * (k - 1) as f64 * m.powi(k - 1))
}

/// `(2/β) Σ_n (iω_n − z)^{-2}` for real `z`.
///
/// The exact value is `−(β/2) sech²(βz/2)`. With `tail_correction` the
/// omitted `Σ_{|n|≥N} −ω_n^{-2}` is added in closed form through the
/// trigamma function and the bound covers only the next order.
pub fn cosh2_matsubara_sum(beta: f64, z: f64, cfg: &MatsubaraConfig) -> MatsubaraEstimate {
    let t = 1.0 / beta;
    let z2 = z * z;
    let mut acc = CompensatedSum::new();
    for n in 0..cfg.cutoff {
        let w = matsubara_frequency(n as i64, t);
        let w2 = w * w;
        let d = w2 + z2;
        acc.add(2.0 * (z2 - w2) / (d * d));
    }
    let wn = matsubara_frequency(cfg.cutoff as i64, t);
    let scale = (beta / PI).powi(2);
    let tail_bound = if cfg.tail_correction {
        acc.add(-0.5 * scale * trigamma(cfg.cutoff as f64 + 0.5));
        (6.0 * z2 + 2.0 * z2 * z2 / (wn * wn)) * scale * scale * odd_power_tail(cfg.cutoff, 4)
    } else {
        2.0 * scale * odd_power_tail(cfg.cutoff, 2)
    };
    MatsubaraEstimate {
        value: 2.0 * t * acc.value(),
        tail_bound: 2.0 * t * tail_bound,
        cutoff: cfg.cutoff,
    }
}

/// `∫_{ω₀}^∞ (ω² + E²)⁻² dω` for `ω₀ > 0`.
fn quartic_tail_integral(w0: f64, e: f64) -> f64 {
    let u = e.abs() / w0;
    let h = if u < 0.1 {
        // (atan u − u/(1+u²))/(2u³) = Σ (−1)^k (k+1) u^{2k}/(2k+3)
        let u2 = u * u;
        (0..12).rev().fold(0.0, |acc, k| {
            acc * -u2 + (k + 1) as f64 / (2 * k + 3) as f64
        })
    } else {
        (u.atan() - u / (1.0 + u * u)) / (2.0 * u * u * u)
    };
    h / (w0 * w0 * w0)
}

/// `(2/β) Σ_n [(iω_n − E)² (iω_n + E)²]^{-1} = (2/β) Σ_n (ω_n² + E²)^{-2}`.
///
/// Equals `(β²/2) g₁(βE)/E`. With `tail_correction` the omitted terms are
/// replaced by their midpoint-rule integral once `ω_N` exceeds `|E|`; the
/// summand is convex there and the bound is the midpoint error.
pub fn g1_matsubara_sum(beta: f64, e: f64, cfg: &MatsubaraConfig) -> MatsubaraEstimate {
    let t = 1.0 / beta;
    let e2 = e * e;
    let mut acc = CompensatedSum::new();
    for n in 0..cfg.cutoff {
        let w = matsubara_frequency(n as i64, t);
        let d = w * w + e2;
        acc.add(2.0 / (d * d));
    }
    let step = 2.0 * PI * t;
    let w0 = step * cfg.cutoff as f64;
    let tail = if cfg.tail_correction && w0 > e.abs() {
        acc.add(2.0 * quartic_tail_integral(w0, e) / step);
        let d = w0 * w0 + e2;
        2.0 * step * w0 / (3.0 * d * d * d)
    } else {
        2.0 * (beta / PI).powi(4) * odd_power_tail(cfg.cutoff, 4)
    };
    MatsubaraEstimate {
        value: 2.0 * t * acc.value(),
        tail_bound: 2.0 * t * tail,
        cutoff: cfg.cutoff,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::kernels::{g1, g1_over_z, sech2};
    use approx::assert_relative_eq;

    #[test]
    fn frequency_convention() {
        assert_eq!(matsubara_frequency(0, 1.0), PI);
        assert_eq!(matsubara_frequency(-1, 1.0), -PI);
        for n in -5..5 {
            assert_eq!(
                matsubara_frequency(-n - 1, 0.3),
                -matsubara_frequency(n, 0.3)
            );
        }
    }

    #[test]
    fn trigamma_reference_values() {
        // ψ'(1/2) = π²/2, ψ'(1) = π²/6
        assert_relative_eq!(trigamma(0.5), PI * PI / 2.0, max_relative = 1e-14);
        assert_relative_eq!(trigamma(1.0), PI * PI / 6.0, max_relative = 1e-14);
        assert_relative_eq!(trigamma(1000.5), 9.999999166666958e-4, max_relative = 1e-13);
    }

    #[test]
    fn cosh2_identity_with_and_without_correction() {
        let (beta, z) = (2.0, 0.7);
        let exact = -0.5 * beta * sech2(0.5 * beta * z);
        let raw = cosh2_matsubara_sum(
            beta,
            z,
            &MatsubaraConfig {
                cutoff: 2000,
                tail_correction: false,
            },
        );
        assert!((raw.value - exact).abs() <= raw.tail_bound);
        assert!(raw.tail_bound < 1e-3);
        let fixed = cosh2_matsubara_sum(beta, z, &MatsubaraConfig::new(2000));
        assert!((fixed.value - exact).abs() <= fixed.tail_bound + 1e-15);
        assert!(fixed.tail_bound < 1e-11);
    }

    #[test]
    fn g1_identity_at_unit_parameters() {
        let est = g1_matsubara_sum(1.0, 1.0, &MatsubaraConfig::new(100_000));
        let want = 0.5 * g1(1.0);
        assert!((est.value - want).abs() <= est.tail_bound + 1e-16);
    }

    #[test]
    fn g1_identity_near_zero_energy() {
        let beta = 3.0;
        let est = g1_matsubara_sum(beta, 0.0, &MatsubaraConfig::new(5000));
        let want = 0.5 * beta.powi(3) * g1_over_z(0.0);
        assert_relative_eq!(est.value, want, max_relative = 1e-12);
    }

    #[test]
    fn g1_tail_correction_at_large_energy() {
        let (beta, e) = (8.0f64, 120.0);
        let want = 0.5 * beta.powi(3) * g1_over_z(beta * e);
        let raw = g1_matsubara_sum(
            beta,
            e,
            &MatsubaraConfig {
                cutoff: 4000,
                tail_correction: false,
            },
        );
        assert!((raw.value - want).abs() / want > 1e-6);
        let fixed = g1_matsubara_sum(beta, e, &MatsubaraConfig::new(4000));
        assert!((fixed.value - want).abs() <= fixed.tail_bound + 1e-15 * want);
        assert!(fixed.tail_bound / want < 1e-10);
    }

    #[test]
    fn quartic_tail_series_matches_closed_form() {
        for u in [0.0999f64, 0.1001] {
            let closed = (u.atan() - u / (1.0 + u * u)) / (2.0 * u * u * u);
            assert_relative_eq!(quartic_tail_integral(1.0, u), closed, max_relative = 1e-12);
        }
    }
}
