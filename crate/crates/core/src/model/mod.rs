//! Physical parameters, radial quadrature grids and the three-dimensional
//! radial Fourier transform.
//!
//! Fourier convention: `f̂(p) = ∫ e^{-ip·x} f(|x|) dx = 4π ∫ r² j₀(pr) f(r) dr`,
//! so that `‖f‖₂² = (2π)^{-3} ∫ |f̂|² dp`.

pub mod grid;
pub mod io;
pub mod potential;
pub mod radial;

use serde::Serialize;

use crate::error::{Error, Result};

pub use grid::RadialGrid;
pub use potential::Potential;
pub use radial::{
    fourier_at, inverse_fourier_at, inverse_radial_fourier, radial_fourier, weighted_norm,
    NormKind, Radial, RadialFunction, RadialMomentumFunction,
};

/// Chemical potential, temperature and field strength (`k_B = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysParams {
    pub mu: f64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub beta: f64,
}

impl PhysParams {
    pub fn new(mu: f64, t: f64, b: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidParameter {
                name: "mu",
                reason: "must be finite".into(),
            });
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidParameter {
                name: "T",
                reason: format!("must be positive, got {t}"),
            });
        }
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "B",
                reason: format!("must be nonnegative, got {b}"),
            });
        }
        Ok(Self {
            mu,
            t,
            b,
            beta: 1.0 / t,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_is_inverse_temperature() {
        let p = PhysParams::new(1.0, 0.37, 0.0).unwrap();
        assert!((p.beta * p.t - 1.0).abs() <= f64::EPSILON);
        assert!(PhysParams::new(1.0, 0.0, 0.0).is_err());
        assert!(PhysParams::new(1.0, 1.0, -1.0).is_err());
    }
}
