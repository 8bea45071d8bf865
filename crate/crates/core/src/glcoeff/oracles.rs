//! Independent routes to the coefficients, used as cross-checks.

use crate::error::{Error, Result};
use crate::glcoeff::CoefficientIntegrand;
use crate::symbols::kernels::{g1_exponential, g2_exponential, kt_inverse, lt_symbol};
use crate::symbols::matsubara::{g1_matsubara_sum, MatsubaraConfig};

/// Matsubara truncation for the `Λ₃` sum route.
pub const MATSUBARA_CUTOFF: usize = 4000;
const FD_DELTAS: [f64; 2] = [1e-3, 1e-4];

/// `Λ₂` from the slope of `∫ [K_T⁻¹ − K_{Tc}⁻¹] w` at `T = T_c(1 − δ)`,
/// Richardson-extrapolated in `δ`.
pub fn lambda2_fd_oracle(ci: &CoefficientIntegrand, tc: f64) -> Result<f64> {
    let slope = |delta: f64| -> Result<f64> {
        let t = tc * (1.0 - delta);
        let f = ci.integrate("lambda2 oracle", |_, e, k| {
            ci.weight(k) * (kt_inverse(e, t) - kt_inverse(e, tc))
        })?;
        Ok(f / (4.0 * delta))
    };
    let [d1, d2] = FD_DELTAS;
    let (s1, s2) = (slope(d1)?, slope(d2)?);
    Ok((d1 * s2 - d2 * s1) / (d1 - d2))
}

/// Even second difference `(f(h) − 2f(0) + f(−h))/h²` for even `f`,
/// Richardson-extrapolated over `h` and `h/2`.
fn second_derivative_even(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    let f0 = f(0.0);
    let d = |h: f64| 2.0 * (f(h) - f0) / (h * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// `Λ₀` with `g₁ + (2/3)βp²g₂` replaced by `−(2/β²)` times the angular
/// average of the second derivative of `t ↦ L_{Tc}(p + te/2, p − te/2)`.
///
/// The average over directions `e` is `(1/3)` of the Hessian trace: one
/// direction along `p`, two perpendicular ones where `|p ± te/2|² = p² + t²/4`.
pub fn lambda0_hessian_oracle(ci: &CoefficientIntegrand) -> Result<f64> {
    let b = ci.beta;
    let t = 1.0 / b;
    let mu = ci.mu;
    let val = ci.integrate("lambda0 oracle", |p, _, k| {
        let h = 0.02 * t / (p + t.sqrt());
        let along = second_derivative_even(|s| lt_symbol(p + 0.5 * s, p - 0.5 * s, t, mu), h);
        let across = second_derivative_even(|s| kt_inverse(p * p + 0.25 * s * s - mu, t), h);
        let hessian = (along + 2.0 * across) / 3.0;
        ci.weight(k) * (-2.0 / (b * b)) * hessian
    })?;
    Ok(b * b / 16.0 * val)
}

/// `Λ₀` with `g₁`, `g₂` in their exponential transcription.
pub fn lambda0_cross_form(ci: &CoefficientIntegrand) -> Result<f64> {
    let b = ci.beta;
    let val = ci.integrate("lambda0 cross form", |p, e, k| {
        let z = b * e;
        ci.weight(k) * (g1_exponential(z) + 2.0 / 3.0 * b * p * p * g2_exponential(z))
    })?;
    Ok(b * b / 16.0 * val)
}

/// `Λ₃` with `g₁(βE)/E` replaced by the truncated Matsubara sum
/// `(2/β²)·(2/β) Σ_n (ω_n² + E²)⁻²`.
pub fn lambda3_matsubara(ci: &CoefficientIntegrand, cutoff: usize) -> Result<f64> {
    let b = ci.beta;
    let cfg = MatsubaraConfig::new(cutoff);
    let mut worst: f64 = 0.0;
    let val = ci.integrate("lambda3 matsubara", |_, e, k| {
        let est = g1_matsubara_sum(b, e, &cfg);
        worst = worst.max(est.tail_bound / est.value);
        let w = ci.weight(k);
        w * w * 2.0 * est.value / (b * b)
    })?;
    if worst > 1e-10 {
        return Err(Error::Truncation {
            context: "lambda3 matsubara",
            tail: worst,
            tol: 1e-10,
        });
    }
    Ok(b * b / 16.0 * val)
}
