//! Ginzburg–Landau coefficients of the reduced functional.
//!
//! With `w(p) = |2 (Vα*)^(p)|²`, `E = p² − μ` and `β = 1/T_c`, all three are
//! radial momentum integrals against `(2π²)⁻¹ p² dp`:
//!
//! - `Λ₂ = (β/8)   ∫ w · sech²(βE/2)`
//! - `Λ₀ = (β²/16) ∫ w · [g₁(βE) + (2/3) β p² g₂(βE)]`
//! - `Λ₃ = (β²/16) ∫ w² · g₁(βE)/E`
//!
//! and `D_c = 2Λ₀/Λ₂`.

mod oracles;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gap::{momentum_grid, GapSolution};
use crate::model::grid::RadialGrid;
use crate::symbols::kernels::{g1, g1_over_z, g2, sech2};

pub use oracles::{
    lambda0_cross_form, lambda0_hessian_oracle, lambda2_fd_oracle, lambda3_matsubara,
    MATSUBARA_CUTOFF,
};

/// Largest last-panel share accepted for a coefficient integral.
pub const COEFF_TAIL_TOL: f64 = 1e-12;

/// `|2 (Vα*)^|²` on a momentum grid resolving `K_{Tc}` at the Fermi surface.
#[derive(Debug, Clone)]
pub struct CoefficientIntegrand {
    pub grid: RadialGrid,
    /// `(Vα*)^(p_k)`.
    pub v_alpha_hat: Vec<f64>,
    pub beta: f64,
    pub mu: f64,
}

impl CoefficientIntegrand {
    pub fn new(sol: &GapSolution) -> Result<Self> {
        let a = sol.length_scale;
        let p_max = sol.mu.max(0.0).sqrt() + 10.0 / a;
        let grid = momentum_grid(sol.mu, sol.tc, p_max, 0.25 / a, 16)?;
        Self::on_grid(sol, grid)
    }

    pub fn on_grid(sol: &GapSolution, grid: RadialGrid) -> Result<Self> {
        let v_alpha_hat = sol.v_alpha_hat(&grid)?.values().to_vec();
        Ok(Self {
            grid,
            v_alpha_hat,
            beta: 1.0 / sol.tc,
            mu: sol.mu,
        })
    }

    /// Same weight with `(Vα*)^` replaced; used for edge cases and tests.
    pub fn with_weight(mut self, f: impl Fn(f64) -> f64) -> Self {
        self.v_alpha_hat = self.grid.nodes().iter().map(|&p| f(p)).collect();
        self
    }

    pub fn refined(&self, sol: &GapSolution) -> Result<Self> {
        Self::on_grid(sol, self.grid.refined())
    }

    /// `|2 (Vα*)^(p_k)|²`
    pub fn weight(&self, k: usize) -> f64 {
        4.0 * self.v_alpha_hat[k] * self.v_alpha_hat[k]
    }

    /// `(2π²)⁻¹ ∫ p² f(p, E, k) dp` with a truncation check on the last panel.
    pub fn integrate(
        &self,
        context: &'static str,
        mut f: impl FnMut(f64, f64, usize) -> f64,
    ) -> Result<f64> {
        let values: Vec<f64> = self
            .grid
            .nodes()
            .iter()
            .enumerate()
            .map(|(k, &p)| p * p * f(p, p * p - self.mu, k))
            .collect();
        let tail = self.grid.tail_fraction(&values);
        if tail > COEFF_TAIL_TOL {
            return Err(Error::Truncation {
                context,
                tail,
                tol: COEFF_TAIL_TOL,
            });
        }
        Ok(self.grid.weighted_sum(&values) / (2.0 * PI * PI))
    }

    pub fn lambda2(&self) -> Result<f64> {
        let b = self.beta;
        Ok(b / 8.0 * self.integrate("lambda2", |_, e, k| self.weight(k) * sech2(0.5 * b * e))?)
    }

    pub fn lambda0(&self) -> Result<f64> {
        let b = self.beta;
        let val = self.integrate("lambda0", |p, e, k| {
            let z = b * e;
            self.weight(k) * (g1(z) + 2.0 / 3.0 * b * p * p * g2(z))
        })?;
        Ok(b * b / 16.0 * val)
    }

    pub fn lambda3(&self) -> Result<f64> {
        let b = self.beta;
        let val = self.integrate("lambda3", |_, e, k| {
            let w = self.weight(k);
            w * w * b * g1_over_z(b * e)
        })?;
        Ok(b * b / 16.0 * val)
    }
}

pub fn lambda0(sol: &GapSolution) -> Result<f64> {
    CoefficientIntegrand::new(sol)?.lambda0()
}

pub fn lambda2(sol: &GapSolution) -> Result<f64> {
    CoefficientIntegrand::new(sol)?.lambda2()
}

pub fn lambda3(sol: &GapSolution) -> Result<f64> {
    CoefficientIntegrand::new(sol)?.lambda3()
}

/// `D_c = 2Λ₀/Λ₂`; the 2 is the lowest Landau level of `(−i∇ + e₃∧X)²`.
pub fn critical_ratio_dc(lambda0: f64, lambda2: f64) -> Result<f64> {
    if lambda2 == 0.0 {
        return Err(Error::DivisionGuard("Lambda2"));
    }
    Ok(2.0 * lambda0 / lambda2)
}

/// Predicted critical temperature in a weak field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TcShift {
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "Tc_B")]
    pub tc_b: f64,
    /// `false` once `T_c(1 − D_c B) ≤ 0`, outside the asymptotic regime.
    pub valid: bool,
}

pub fn tc_shift(tc: f64, dc: f64, b: f64) -> Result<TcShift> {
    if !(b >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "B",
            reason: format!("must be nonnegative, got {b}"),
        });
    }
    let tc_b = tc * (1.0 - dc * b);
    Ok(TcShift {
        b,
        tc_b,
        valid: tc_b > 0.0,
    })
}

/// Relative differences between each coefficient and its oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossChecks {
    pub lambda2_fd: f64,
    pub lambda0_hessian: f64,
    pub lambda0_cross_form: f64,
    pub lambda3_matsubara: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Provenance {
    pub p_nodes: usize,
    pub p_max: f64,
    pub order: usize,
    pub matsubara_cutoff: usize,
    pub cross_checks: CrossChecks,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GLCoefficients {
    #[serde(rename = "Tc")]
    pub tc: f64,
    pub mu: f64,
    #[serde(rename = "Lambda0")]
    pub lambda0: f64,
    #[serde(rename = "Lambda2")]
    pub lambda2: f64,
    #[serde(rename = "Lambda3")]
    pub lambda3: f64,
    #[serde(rename = "Dc")]
    pub dc: f64,
    pub provenance: Provenance,
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// All coefficients with their oracle cross-checks.
pub fn gl_coefficients(sol: &GapSolution) -> Result<GLCoefficients> {
    let integrand = CoefficientIntegrand::new(sol)?;
    let l0 = integrand.lambda0()?;
    let l2 = integrand.lambda2()?;
    let l3 = integrand.lambda3()?;
    let refined = integrand.refined(sol)?;
    let cross_checks = CrossChecks {
        lambda2_fd: rel(l2, lambda2_fd_oracle(&integrand, sol.tc)?),
        lambda0_hessian: rel(l0, lambda0_hessian_oracle(&integrand)?),
        lambda0_cross_form: rel(l0, lambda0_cross_form(&integrand)?),
        lambda3_matsubara: rel(l3, lambda3_matsubara(&refined, MATSUBARA_CUTOFF)?),
    };
    Ok(GLCoefficients {
        tc: sol.tc,
        mu: sol.mu,
        lambda0: l0,
        lambda2: l2,
        lambda3: l3,
        dc: critical_ratio_dc(l0, l2)?,
        provenance: Provenance {
            p_nodes: integrand.grid.len(),
            p_max: integrand.grid.upper(),
            order: integrand.grid.order(),
            matsubara_cutoff: MATSUBARA_CUTOFF,
            cross_checks,
        },
    })
}

#[cfg(test)]
mod tests;
