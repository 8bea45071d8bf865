use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::glcoeff::GLCoefficients;
use crate::glmin::cell::MagneticCell;
use crate::glmin::energy::{mean_norm, GlFunctional, OrderParameterField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimizerConfig {
    pub max_iter: usize,
    pub polish_steps: usize,
    /// Stop once `grad_norm ≤ grad_tol · max(1, |E|)`.
    pub grad_tol: f64,
    /// Nonmonotone window of the Armijo test.
    pub memory: usize,
    /// Size of the random perturbation relative to the one-mode amplitude scale.
    pub perturbation: f64,
    pub seed: u64,
}

impl Default for MinimizerConfig {
    fn default() -> Self {
        Self {
            max_iter: 50_000,
            polish_steps: 50,
            grad_tol: 1e-9,
            memory: 10,
            perturbation: 1e-3,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Init {
    /// Lowest-Landau eigenvector at the one-mode optimal amplitude plus noise.
    LowestLandau,
    Field(OrderParameterField),
}

#[derive(Debug, Clone, Serialize)]
pub struct GLResult {
    #[serde(rename = "D")]
    pub d: f64,
    pub energy: f64,
    pub initial_energy: f64,
    pub iterations: usize,
    pub grad_norm: f64,
    pub tolerance: f64,
    #[serde(skip)]
    pub psi: OrderParameterField,
}

/// One-mode data of the lowest Landau level: `(λ₀, ⟨|φ|⁴⟩)` with `⟨|φ|²⟩ = 1`.
pub fn lowest_mode(cell: &MagneticCell) -> Result<(f64, f64, &[Complex64])> {
    let levels = cell.levels()?;
    let phi = &levels.ground_state;
    let beta = phi.iter().map(|z| z.norm_sqr().powi(2)).sum::<f64>() / phi.len() as f64;
    Ok((levels.lowest, beta, phi))
}

/// `t²` minimizing `E(tφ)` over `t ≥ 0`.
pub fn one_mode_amplitude2(f: &GlFunctional, lambda_min: f64, beta: f64) -> f64 {
    let b = f.cell.b();
    ((f.d * b * f.lambda2 - f.lambda0 * lambda_min) / (2.0 * f.lambda3 * beta)).max(0.0)
}

pub fn initial_field(f: &GlFunctional, cfg: &MinimizerConfig) -> Result<Vec<Complex64>> {
    let (lambda_min, beta, phi) = lowest_mode(f.cell)?;
    let t = one_mode_amplitude2(f, lambda_min, beta).sqrt();
    let b = f.cell.b();
    let scale = (b * f.lambda2 * f.d.max(f.lambda0 * lambda_min / (b * f.lambda2))
        / (2.0 * f.lambda3))
        .sqrt();
    let eps = cfg.perturbation * scale;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok(phi
        .iter()
        .map(|z| z * t + Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * eps)
        .collect())
}

fn re_mean(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.re * y.re + x.im * y.im)
        .sum::<f64>()
        / a.len() as f64
}

/// Step for which `−α(M + 2B)⁻¹ g` matches the kinetic scale `2Λ₀/B²`.
fn b2_over_two(cell: &MagneticCell) -> f64 {
    0.5 * cell.b() * cell.b()
}

/// Preconditioned Barzilai–Borwein descent with a nonmonotone Armijo safeguard, then a fixed-step polish.
pub fn minimize_gl(
    d: f64,
    coeffs: &GLCoefficients,
    cell: &MagneticCell,
    init: &Init,
    cfg: &MinimizerConfig,
) -> Result<GLResult> {
    let f = GlFunctional::new(cell, d, coeffs)?;
    let mut x = match init {
        Init::LowestLandau => initial_field(&f, cfg)?,
        Init::Field(psi) => {
            if psi.n != cell.n() {
                return Err(Error::InvalidParameter {
                    name: "init",
                    reason: format!("grid {} does not match cell grid {}", psi.n, cell.n()),
                });
            }
            psi.values.clone()
        }
    };
    let len = x.len();
    let mut g = vec![Complex64::new(0.0, 0.0); len];
    let mut e = f.energy_and_gradient(&x, &mut g);
    let initial_energy = e;
    let mut history = vec![e];
    let mut pg = g.clone();
    cell.precondition(&mut pg);
    let mut step = if cell.has_direct_solver() {
        b2_over_two(cell) / f.lambda0
    } else {
        1.0 / f.lipschitz(x.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max))
    };
    let mut xt = vec![Complex64::new(0.0, 0.0); len];
    let mut gt = vec![Complex64::new(0.0, 0.0); len];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iter {
        let gn = mean_norm(&g);
        if gn <= cfg.grad_tol * e.abs().max(1.0) {
            converged = true;
            break;
        }
        iterations += 1;
        let reference = history.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let slope = re_mean(&g, &pg);
        let mut alpha = step;
        let mut et;
        let mut halvings = 0;
        loop {
            for k in 0..len {
                xt[k] = x[k] - pg[k] * alpha;
            }
            et = f.energy_and_gradient(&xt, &mut gt);
            if et <= reference - 1e-4 * alpha * slope {
                break;
            }
            halvings += 1;
            if halvings > 60 {
                return Err(Error::NonConvergence {
                    solver: "GL line search",
                    iterations,
                    residual: gn,
                });
            }
            alpha *= 0.5;
        }
        let mut pgt = gt.clone();
        cell.precondition(&mut pgt);
        // s = −α P g, so sᵀP⁻¹s = α² gᵀPg; BB steps in the metric P⁻¹.
        let mut sy = 0.0;
        let mut ypy = 0.0;
        let mut py = vec![Complex64::new(0.0, 0.0); len];
        for k in 0..len {
            let s = xt[k] - x[k];
            let y = gt[k] - g[k];
            sy += s.re * y.re + s.im * y.im;
            py[k] = pgt[k] - pg[k];
            ypy += y.re * py[k].re + y.im * py[k].im;
        }
        let sps = alpha * alpha * slope * len as f64;
        step = if sy > 0.0 {
            if iterations % 2 == 1 {
                sps / sy
            } else {
                sy / ypy
            }
        } else {
            2.0 * alpha
        };
        std::mem::swap(&mut x, &mut xt);
        std::mem::swap(&mut g, &mut gt);
        pg = pgt;
        e = et;
        history.push(e);
        if history.len() > cfg.memory {
            history.remove(0);
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            solver: "GL minimizer",
            iterations,
            residual: mean_norm(&g),
        });
    }
    let fixed = 1.0 / f.lipschitz(x.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max));
    for _ in 0..cfg.polish_steps {
        for k in 0..len {
            xt[k] = x[k] - g[k] * fixed;
        }
        let et = f.energy_and_gradient(&xt, &mut gt);
        if et > e {
            break;
        }
        std::mem::swap(&mut x, &mut xt);
        std::mem::swap(&mut g, &mut gt);
        e = et;
    }
    let mut grad_norm = mean_norm(&g);
    // Ψ ≡ 0 is admissible with energy 0.
    if e > 0.0 {
        x.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        e = 0.0;
        grad_norm = 0.0;
    }
    let tolerance = cfg.grad_tol * e.abs().max(1.0);
    if grad_norm > tolerance {
        return Err(Error::NonConvergence {
            solver: "GL polish",
            iterations,
            residual: grad_norm,
        });
    }
    Ok(GLResult {
        d,
        energy: e,
        initial_energy,
        iterations,
        grad_norm,
        tolerance,
        psi: OrderParameterField::new(cell.n(), x)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EglPoint {
    #[serde(rename = "D")]
    pub d: f64,
    pub d_over_dc: f64,
    pub energy: f64,
    pub grad_norm: f64,
    pub iterations: usize,
}

/// `E^GL(D)` over ascending `D`. Each point keeps the lower of a fresh
/// lowest-Landau start and a warm start from the previous minimizer, so the
/// curve is nonincreasing.
pub fn egl_curve(
    d_values: &[f64],
    coeffs: &GLCoefficients,
    cell: &MagneticCell,
    cfg: &MinimizerConfig,
) -> Result<(Vec<EglPoint>, Option<GLResult>)> {
    if d_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter {
            name: "D values",
            reason: "must be strictly ascending".into(),
        });
    }
    let mut points = Vec::with_capacity(d_values.len());
    let mut last: Option<GLResult> = None;
    for &d in d_values {
        let mut best = minimize_gl(d, coeffs, cell, &Init::LowestLandau, cfg)?;
        if let Some(prev) = &last {
            let warm = minimize_gl(d, coeffs, cell, &Init::Field(prev.psi.clone()), cfg)?;
            if warm.energy < best.energy {
                best = warm;
            }
        }
        points.push(EglPoint {
            d,
            d_over_dc: d / coeffs.dc,
            energy: best.energy,
            grad_norm: best.grad_norm,
            iterations: best.iterations,
        });
        last = Some(best);
    }
    Ok((points, last))
}

/// Least-squares slope of `ln(−E)` against `ln(D/D_c − 1)`.
pub fn fit_exponent(points: &[EglPoint], dc: f64) -> Result<f64> {
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.d > dc && p.energy < 0.0)
        .map(|p| ((p.d / dc - 1.0).ln(), (-p.energy).ln()))
        .collect();
    if data.len() < 2 || data.len() != points.len() {
        return Err(Error::InvalidParameter {
            name: "D values",
            reason: "exponent fit needs at least two points above D_c with negative energy".into(),
        });
    }
    let n = data.len() as f64;
    let mx = data.iter().map(|p| p.0).sum::<f64>() / n;
    let my = data.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = data.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = data.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingReport {
    #[serde(rename = "D")]
    pub d: f64,
    pub b1: f64,
    pub b2: f64,
    pub n: usize,
    pub energy_b1: f64,
    pub energy_b2: f64,
    pub relative_difference: f64,
    /// `E_{B₂}(√(B₂/B₁) Ψ₁)` against `E_{B₁}(Ψ₁)`.
    pub rescaled_relative_difference: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub const SCALING_TOL: f64 = 1e-3;

fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Minimizes at `B₁` and `B₂` with the same per-cell resolution and compares.
pub fn scaling_check(
    d: f64,
    coeffs: &GLCoefficients,
    b1: f64,
    b2: f64,
    n: usize,
    cfg: &MinimizerConfig,
) -> Result<ScalingReport> {
    let c1 = MagneticCell::new(b1, n)?;
    let c2 = MagneticCell::new(b2, n)?;
    let r1 = minimize_gl(d, coeffs, &c1, &Init::LowestLandau, cfg)?;
    let r2 = minimize_gl(d, coeffs, &c2, &Init::LowestLandau, cfg)?;
    let rescaled = r1.psi.scaled(Complex64::new((b2 / b1).sqrt(), 0.0));
    let e_rescaled = GlFunctional::new(&c2, d, coeffs)?.energy(&rescaled.values);
    let relative_difference = relative(r1.energy, r2.energy);
    let rescaled_relative_difference = relative(r1.energy, e_rescaled);
    Ok(ScalingReport {
        d,
        b1,
        b2,
        n,
        energy_b1: r1.energy,
        energy_b2: r2.energy,
        relative_difference,
        rescaled_relative_difference,
        tolerance: SCALING_TOL,
        passed: relative_difference <= SCALING_TOL && rescaled_relative_difference <= SCALING_TOL,
    })
}
