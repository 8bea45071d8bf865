use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gap::problem::GapProblem;
use crate::model::radial::{fourier_at, RadialFunction, RadialMomentumFunction};
use crate::symbols::kernels::{kt_inverse, kt_symbol};

/// Bisection stops once the bracket is narrower than this, relative to `T`.
pub const BISECTION_TOL: f64 = 1e-10;
const NEWTON_STEPS: usize = 3;

/// Largest Birman–Schwinger eigenvalue `η(T)` with its eigenvector, phase
/// fixed so that `Σ_i r_i √w_i V_i^{1/2} φ_i ≥ 0`.
pub fn bs_top_eigenpair(problem: &GapProblem, t: f64) -> Result<(f64, DVector<f64>)> {
    let (eta, phi) = problem.top_eigenpair_dense(t)?;
    Ok((eta, fix_phase(problem, phi)))
}

/// Same as [`bs_top_eigenpair`], warm-started power iteration when a guess
/// is available; falls back to the dense solver if it stalls.
fn top_eigenpair_warm(
    problem: &GapProblem,
    t: f64,
    guess: Option<&DVector<f64>>,
) -> Result<(f64, DVector<f64>)> {
    if let Some(g) = guess {
        if let Some((eta, phi)) = problem.top_eigenpair_power(t, g) {
            return Ok((eta, fix_phase(problem, phi)));
        }
    }
    bs_top_eigenpair(problem, t)
}

fn fix_phase(problem: &GapProblem, mut phi: DVector<f64>) -> DVector<f64> {
    let v = problem.potential();
    let overlap: f64 = (0..v.len())
        .map(|i| v.nodes()[i] * v.weights()[i].sqrt() * v.values()[i].sqrt() * phi[i])
        .sum();
    if overlap < 0.0 {
        phi.neg_mut();
    }
    phi
}

/// Two lowest eigenvalues of the discretized `K_T − V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralGap {
    pub e0: f64,
    pub e1: f64,
    pub kappa: f64,
}

impl SpectralGap {
    pub fn is_degenerate(&self, tol: f64) -> bool {
        self.kappa <= tol
    }
}

pub fn spectral_gap(problem: &GapProblem, t: f64) -> Result<SpectralGap> {
    let h = problem.gap_operator(t);
    if h.nrows() < 2 {
        return Err(Error::InvalidGrid(
            "spectral gap needs two momentum nodes".into(),
        ));
    }
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(SpectralGap {
        e0: ev[0],
        e1: ev[1],
        kappa: ev[1] - ev[0],
    })
}

/// Relative residual `‖K_T α − Vα‖₂ / ‖Vα‖₂` in the momentum representation,
/// for `α` given by its transform on the problem's momentum grid.
pub fn gap_residual_hat(problem: &GapProblem, alpha_hat: &[f64], t: f64) -> Result<f64> {
    let alpha_r = problem.alpha_on_rgrid(alpha_hat);
    let v_alpha: Vec<f64> = alpha_r
        .iter()
        .zip(problem.potential().values())
        .map(|(a, v)| a * v)
        .collect();
    let v_alpha_hat = problem.transform_rgrid(&v_alpha);
    let pg = problem.pgrid();
    let (mut num, mut den) = (0.0, 0.0);
    for k in 0..pg.len() {
        let p = pg.nodes()[k];
        let w = pg.weights()[k] * p * p;
        let d = kt_symbol(p * p - problem.mu, t) * alpha_hat[k] - v_alpha_hat[k];
        num += w * d * d;
        den += w * v_alpha_hat[k] * v_alpha_hat[k];
    }
    if den == 0.0 {
        return Err(Error::DivisionGuard("||V alpha||_2"));
    }
    Ok((num / den).sqrt())
}

/// Critical temperature with normalized pair wave function.
#[derive(Debug, Clone)]
pub struct GapSolution {
    pub tc: f64,
    pub mu: f64,
    pub eta: f64,
    pub eta_residual: f64,
    pub gap_residual: f64,
    pub alpha_norm: f64,
    pub spectral: SpectralGap,
    pub bisection_steps: usize,
    /// `α̂*` on the momentum grid of the problem.
    pub alpha_hat: RadialMomentumFunction,
    /// `V α*` on the radial grid of the problem; compactly supported with `V`.
    pub v_alpha: RadialFunction,
    pub length_scale: f64,
    pub t_floor: f64,
}

/// Grid and convergence metadata written next to `T_c`.
#[derive(Debug, Clone, Serialize)]
pub struct GapSummary {
    #[serde(rename = "Tc")]
    pub tc: f64,
    pub mu: f64,
    pub eta: f64,
    pub eta_residual: f64,
    pub gap_residual: f64,
    pub alpha_norm: f64,
    pub kappa: f64,
    pub e0: f64,
    pub e1: f64,
    pub bisection_steps: usize,
    pub r_nodes: usize,
    pub r_max: f64,
    pub p_nodes: usize,
    pub p_max: f64,
    pub order: usize,
}

impl GapSolution {
    pub fn kappa(&self) -> f64 {
        self.spectral.kappa
    }

    /// `α̂*(p) = K_{Tc}⁻¹(p² − μ) · (Vα*)^(p)` at any momentum.
    pub fn alpha_hat_at(&self, p: f64) -> f64 {
        kt_inverse(p * p - self.mu, self.tc) * fourier_at(&self.v_alpha, p)
    }

    /// `(Vα*)^` on an arbitrary momentum grid.
    pub fn v_alpha_hat(&self, pgrid: &crate::model::RadialGrid) -> Result<RadialMomentumFunction> {
        crate::model::radial_fourier(&self.v_alpha, pgrid)
    }

    /// Decay rate of `α*`: `Im √(μ + iπT_c)`, set by the nearest pole of `K_{Tc}⁻¹`.
    pub fn decay_rate(&self) -> f64 {
        Complex64::new(self.mu, PI * self.tc).sqrt().im
    }

    pub fn summary(&self, problem: &GapProblem) -> GapSummary {
        GapSummary {
            tc: self.tc,
            mu: self.mu,
            eta: self.eta,
            eta_residual: self.eta_residual,
            gap_residual: self.gap_residual,
            alpha_norm: self.alpha_norm,
            kappa: self.spectral.kappa,
            e0: self.spectral.e0,
            e1: self.spectral.e1,
            bisection_steps: self.bisection_steps,
            r_nodes: problem.rgrid().len(),
            r_max: problem.rgrid().upper(),
            p_nodes: problem.pgrid().len(),
            p_max: problem.pgrid().upper(),
            order: problem.config.order,
        }
    }
}

/// Upper end of the bracket where `η < 1` is guaranteed: `η ≤ max V / (2T)`.
pub fn default_t_hi(problem: &GapProblem) -> f64 {
    let vmax = problem
        .potential()
        .values()
        .iter()
        .fold(0.0f64, |a, &b| a.max(b));
    0.5 * vmax.max(f64::MIN_POSITIVE)
}

/// `T_c` from `η(T_c) = 1`: bisection on the bracket followed by Newton
/// polish with the Hellmann–Feynman derivative.
pub fn critical_temperature(
    problem: &GapProblem,
    bracket: Option<(f64, f64)>,
) -> Result<GapSolution> {
    let (mut lo, mut hi) = bracket.unwrap_or_else(|| {
        (
            problem.config.t_lo,
            problem.config.t_hi.unwrap_or_else(|| default_t_hi(problem)),
        )
    });
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidParameter {
            name: "bracket",
            reason: format!("need 0 < T_lo < T_hi, got ({lo}, {hi})"),
        });
    }
    let (eta_lo, mut guess) = bs_top_eigenpair(problem, lo)?;
    let eta_hi = bs_top_eigenpair(problem, hi)?.0;
    if !(eta_lo > 1.0 && eta_hi < 1.0) {
        return Err(Error::NoRoot { eta_lo, eta_hi });
    }
    let mut steps = 0;
    while hi - lo > BISECTION_TOL * lo {
        let mid = 0.5 * (lo + hi);
        let (eta, phi) = top_eigenpair_warm(problem, mid, Some(&guess))?;
        guess = phi;
        if eta > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        steps += 1;
        if steps > 200 {
            return Err(Error::NonConvergence {
                solver: "T_c bisection",
                iterations: steps,
                residual: hi - lo,
            });
        }
    }
    let mut t = 0.5 * (lo + hi);
    let (mut eta, mut phi) = top_eigenpair_warm(problem, t, Some(&guess))?;
    for _ in 0..NEWTON_STEPS {
        let slope = problem.eta_derivative(t, &phi);
        if slope >= 0.0 {
            break;
        }
        let trial = t - (eta - 1.0) / slope;
        if !(trial > 0.0) {
            break;
        }
        let (eta_trial, phi_trial) = top_eigenpair_warm(problem, trial, Some(&phi))?;
        if (eta_trial - 1.0).abs() >= (eta - 1.0).abs() {
            break;
        }
        (t, eta, phi) = (trial, eta_trial, phi_trial);
    }
    // Dense confirmation that the power iteration found the top eigenvalue.
    let (eta_dense, phi_dense) = bs_top_eigenpair(problem, t)?;
    if (eta_dense - eta).abs() > 1e-12 * eta_dense {
        (eta, phi) = (eta_dense, phi_dense);
    }
    solution_at(problem, t, eta, &phi, steps)
}

fn solution_at(
    problem: &GapProblem,
    t: f64,
    eta: f64,
    phi: &DVector<f64>,
    steps: usize,
) -> Result<GapSolution> {
    let alpha_hat = problem.alpha_hat_from_eigenvector(t, phi)?;
    let alpha_r = problem.alpha_on_rgrid(alpha_hat.values());
    let v = problem.potential();
    let v_alpha = RadialFunction::new(
        v.grid().clone(),
        v.values()
            .iter()
            .zip(&alpha_r)
            .map(|(v, a)| v * a)
            .collect(),
    )?;
    let gap_residual = gap_residual_hat(problem, alpha_hat.values(), t)?;
    let spectral = spectral_gap(problem, t)?;
    if spectral.is_degenerate(problem.config.kappa_tol) {
        return Err(Error::Degenerate {
            kappa: spectral.kappa,
            tol: problem.config.kappa_tol,
        });
    }
    Ok(GapSolution {
        tc: t,
        mu: problem.mu,
        eta,
        eta_residual: (eta - 1.0).abs(),
        gap_residual,
        alpha_norm: alpha_hat.l2_norm(),
        spectral,
        bisection_steps: steps,
        alpha_hat,
        v_alpha,
        length_scale: problem.length_scale,
        t_floor: problem.config.t_lo,
    })
}
