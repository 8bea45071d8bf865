use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gap::problem::momentum_grid;
use crate::gap::solve::GapSolution;
use crate::model::grid::RadialGrid;
use crate::model::radial::{
    inverse_fourier_at, inverse_fourier_derivative_at, RadialMomentumFunction,
};

/// Largest last-panel share accepted for a moment integral.
pub const MOMENT_TAIL_TOL: f64 = 1e-10;
const FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEntry {
    pub nu: u32,
    /// `∫ |x|^{2ν} (|α*|² + |∇α*|²) dx`
    pub value: f64,
    pub tail_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub r_max: f64,
    pub decay_rate: f64,
    pub entries: Vec<MomentEntry>,
    /// Largest gap between the spectral derivative and a central difference,
    /// relative to `max |α*'|` on the sample radii.
    pub gradient_fd_error: f64,
}

/// `α̂*` on a momentum grid fine enough to resolve oscillations of `j₀(pr)`
/// up to `r_max`.
pub fn alpha_hat_fine(sol: &GapSolution, r_max: f64) -> Result<RadialMomentumFunction> {
    let a = sol.length_scale;
    let p_max = sol.mu.max(0.0).sqrt() + 10.0 / a;
    let width = (0.5 / a).min(6.0 / r_max);
    let grid = momentum_grid(sol.mu, sol.tc, p_max, width, 16)?;
    Ok(RadialMomentumFunction::from_fn(grid, |p| {
        sol.alpha_hat_at(p)
    }))
}

/// Radial grid on `[0, r_max]` resolving the Fermi oscillation of `α*`.
pub fn alpha_rgrid(sol: &GapSolution, r_max: f64) -> Result<RadialGrid> {
    let width = 2.0 / (sol.mu.max(0.0).sqrt() + 4.0 / sol.length_scale);
    let panels = (r_max / width).ceil().max(1.0) as usize;
    RadialGrid::uniform(0.0, r_max, panels, 16)
}

/// Default cutoff: `e^{−2κ_d R} = e^{−(40 + 4ν)}` with `κ_d` the decay rate.
pub fn default_moment_radius(sol: &GapSolution, nu_max: u32) -> f64 {
    (40.0 + 4.0 * nu_max as f64) / (2.0 * sol.decay_rate())
}

/// Weighted Sobolev moments of `α*` for `ν = 0..=nu_max`.
pub fn moment_check(sol: &GapSolution, nu_max: u32, r_max: Option<f64>) -> Result<MomentReport> {
    let r_max = r_max.unwrap_or_else(|| default_moment_radius(sol, nu_max));
    let hat = alpha_hat_fine(sol, r_max)?;
    let rgrid = alpha_rgrid(sol, r_max)?;
    let alpha: Vec<f64> = rgrid
        .nodes()
        .iter()
        .map(|&r| inverse_fourier_at(&hat, r))
        .collect();
    let dalpha: Vec<f64> = rgrid
        .nodes()
        .iter()
        .map(|&r| inverse_fourier_derivative_at(&hat, r))
        .collect();
    let mut entries = Vec::new();
    for nu in 0..=nu_max {
        let integrand: Vec<f64> = rgrid
            .nodes()
            .iter()
            .zip(alpha.iter().zip(&dalpha))
            .map(|(&r, (&a, &da))| 4.0 * PI * r.powi(2 * nu as i32 + 2) * (a * a + da * da))
            .collect();
        let value = rgrid.weighted_sum(&integrand);
        let tail_fraction = rgrid.tail_fraction(&integrand);
        if !value.is_finite() || tail_fraction > MOMENT_TAIL_TOL {
            return Err(Error::Decay(format!(
                "moment nu = {nu}: value {value:e}, last-panel share {tail_fraction:e} at r_max = {r_max}"
            )));
        }
        entries.push(MomentEntry {
            nu,
            value,
            tail_fraction,
        });
    }
    let a = sol.length_scale;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for r in [0.5 * a, 1.5 * a, 3.0 * a] {
        let spectral = inverse_fourier_derivative_at(&hat, r);
        let fd = (inverse_fourier_at(&hat, r + FD_STEP) - inverse_fourier_at(&hat, r - FD_STEP))
            / (2.0 * FD_STEP);
        worst = worst.max((spectral - fd).abs());
        scale = scale.max(spectral.abs());
    }
    Ok(MomentReport {
        r_max,
        decay_rate: sol.decay_rate(),
        entries,
        gradient_fd_error: if scale > 0.0 { worst / scale } else { worst },
    })
}
