use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gap::problem::momentum_grid;
use crate::model::radial::sinc;
use crate::sum::CompensatedSum;
use crate::symbols::kernels::kt_inverse;

/// Screening constants of the subtracted Yukawa terms.
const SCREENS: [f64; 3] = [1.0, 2.0, 3.0];
const REMAINDER_TOL: f64 = 1e-13;

/// Weights `A_i` with `Σ A_i / (p² + c_i²) = 1/p² + μ/p⁴ + μ²/p⁶ + O(p⁻⁸)`,
/// matching the large-momentum expansion of `K_T⁻¹(p² − μ)`.
fn subtraction_weights(mu: f64) -> [f64; 3] {
    // Σ A = 1, Σ A c² = −μ, Σ A c⁴ = μ² (Vandermonde in c²).
    let s = SCREENS.map(|c| c * c);
    let rhs = [1.0, -mu, mu * mu];
    let mut a = [0.0; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        // Lagrange basis: coefficient of the polynomial with roots s_j, s_k.
        let denom = (s[i] - s[j]) * (s[i] - s[k]);
        a[i] = (rhs[2] - (s[j] + s[k]) * rhs[1] + s[j] * s[k] * rhs[0]) / denom;
    }
    a
}

/// `(2/π) ∫₀^∞ p² j₀(pr) j₀(pr') / (p² + c²) dp = e^{−c r>} sinh(c r<) / (c r r')`.
fn yukawa_kernel(r: f64, rp: f64, c: f64) -> f64 {
    let (lo, hi) = if r < rp { (r, rp) } else { (rp, r) };
    0.5 * ((-c * (hi - lo)).exp() - (-c * (hi + lo)).exp()) / (c * r * rp)
}

/// s-wave kernel of `K_T⁻¹`:
/// `G_T(r, r') = (2/π) ∫₀^∞ p² j₀(pr) j₀(pr') K_T(p² − μ)⁻¹ dp`,
/// so that `(K_T⁻¹ f)(r) = ∫ G_T(r, r') f(r') r'² dr'` for radial `f`.
///
/// Three Yukawa terms carry the slowly decaying part in closed form; the
/// remainder falls off like `p⁻⁸` and is integrated numerically.
pub fn swave_kt_inverse_kernel(r: f64, rp: f64, t: f64, mu: f64) -> Result<f64> {
    if !(r > 0.0 && rp > 0.0) {
        return Err(Error::InvalidParameter {
            name: "r",
            reason: format!("kernel needs r, r' > 0, got ({r}, {rp})"),
        });
    }
    if !(t > 0.0) {
        return Err(Error::InvalidParameter {
            name: "T",
            reason: format!("must be positive, got {t}"),
        });
    }
    let a = subtraction_weights(mu);
    let remainder = |p: f64| {
        let p2 = p * p;
        let sub: f64 = a.iter().zip(SCREENS).map(|(ai, c)| ai / (p2 + c * c)).sum();
        kt_inverse(p2 - mu, t) - sub
    };
    let p_max = 200.0 + (mu.abs() + 60.0 * t).sqrt();
    let width = (4.0 / r.max(rp)).min(0.5);
    let grid = momentum_grid(mu, t, p_max, width, 16)?;
    let mut acc = CompensatedSum::new();
    for (&p, &w) in grid.nodes().iter().zip(grid.weights()) {
        acc.add(w * p * p * sinc(p * r) * sinc(p * rp) * remainder(p));
    }
    let numeric = 2.0 / PI * acc.value();
    let closed: f64 = a
        .iter()
        .zip(SCREENS)
        .map(|(ai, c)| ai * yukawa_kernel(r, rp, c))
        .sum();
    let value = numeric + closed;
    let tail = 2.0 / PI * remainder(p_max).abs() * p_max / (7.0 * r * rp);
    if tail > REMAINDER_TOL * value.abs().max(1.0) {
        return Err(Error::Truncation {
            context: "swave_kt_inverse_kernel",
            tail,
            tol: REMAINDER_TOL,
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::grid::RadialGrid;
    use approx::assert_relative_eq;

    #[test]
    fn subtraction_matches_asymptotics() {
        for mu in [-2.0, 0.0, 1.0, 3.5] {
            let a = subtraction_weights(mu);
            let s: Vec<f64> = SCREENS.iter().map(|c| c * c).collect();
            assert_relative_eq!(a.iter().sum::<f64>(), 1.0, epsilon = 1e-13);
            assert_relative_eq!(
                a[0] * s[0] + a[1] * s[1] + a[2] * s[2],
                -mu,
                epsilon = 1e-12
            );
            let m4: f64 = (0..3).map(|i| a[i] * s[i] * s[i]).sum();
            assert_relative_eq!(m4, mu * mu, epsilon = 1e-11);
        }
    }

    #[test]
    fn kernel_is_symmetric() {
        let g12 = swave_kt_inverse_kernel(1.0, 2.0, 0.3, 1.0).unwrap();
        let g21 = swave_kt_inverse_kernel(2.0, 1.0, 0.3, 1.0).unwrap();
        assert_relative_eq!(g12, g21, max_relative = 1e-12);
    }

    #[test]
    fn reference_value_at_unit_radius() {
        // mpmath, 30 digits: (2/π) ∫ sin²p tanh(p²/2) / p² dp, evaluated as
        // 1 − (2/π) ∫ sin²p (1 − tanh(p²/2)) / p² dp.
        let g = swave_kt_inverse_kernel(1.0, 1.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(g, 0.4340729422559732, max_relative = 1e-12);
    }

    #[test]
    fn high_temperature_limit_is_local() {
        // K_T⁻¹ → 1/(2T) on the support of a smooth φ, so G_T is a spike of
        // width ~ (2T)^{-1/2} at r' = r; the r' grid is graded around it.
        let t = 1e3;
        let phi = |r: f64| (-r * r).exp();
        for r in [0.6, 1.0, 1.7] {
            let mut breaks = vec![0.0, r, 8.0];
            let mut d = 0.004;
            while d < 0.5 {
                breaks.extend([r - d, r + d]);
                d *= 2.0;
            }
            let grid = RadialGrid::with_max_width(&breaks, 0.25, 16).unwrap();
            let mut acc = 0.0;
            for (&rp, &w) in grid.nodes().iter().zip(grid.weights()) {
                acc += w * rp * rp * phi(rp) * swave_kt_inverse_kernel(r, rp, t, 1.0).unwrap();
            }
            assert_relative_eq!(acc, phi(r) / (2.0 * t), max_relative = 1e-2);
        }
    }
}
