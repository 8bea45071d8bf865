use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::gap::{critical_temperature, moment_check, GapProblem, GapSolution};
use crate::glcoeff::{gl_coefficients, GLCoefficients};
use crate::glmin::{
    egl_curve, fit_exponent, minimize_gl, scaling_check, GlFunctional, Init, MagneticCell,
};
use crate::symbols::contour::{kt_contour_eval, speaker_path};
use crate::symbols::kernels::{g1, g1_exponential, g2, g2_exponential, kt_symbol, sech2};
use crate::symbols::matsubara::{cosh2_matsubara_sum, g1_matsubara_sum, MatsubaraConfig};
use crate::symbols::resolvent::{g0_weighted_l1, g0_weighted_l1_quadrature};
use crate::verify::{CheckFn, Measured, VerifyConfig};

const MATSUBARA_N: usize = 4000;
const CONTOUR_R: f64 = 50.0;

type Cached<T> = Option<std::result::Result<T, String>>;

pub(crate) struct Context {
    cfg: VerifyConfig,
    gap: Cached<(GapProblem, GapSolution)>,
    coeffs: Cached<GLCoefficients>,
    cell: Cached<MagneticCell>,
}

fn cached<'a, T>(
    slot: &'a mut Cached<T>,
    what: &str,
    f: impl FnOnce() -> Result<T>,
) -> Result<&'a T> {
    if slot.is_none() {
        *slot = Some(f().map_err(|e| e.to_string()));
    }
    match slot.as_ref().expect("filled above") {
        Ok(v) => Ok(v),
        Err(msg) => Err(Error::Dependency(format!("{what}: {msg}"))),
    }
}

impl Context {
    pub fn new(cfg: VerifyConfig) -> Self {
        Self {
            cfg,
            gap: None,
            coeffs: None,
            cell: None,
        }
    }

    fn gap(&mut self) -> Result<&(GapProblem, GapSolution)> {
        let cfg = &self.cfg;
        cached(&mut self.gap, "gap solve", || {
            let problem = GapProblem::new(&cfg.potential, cfg.mu, cfg.gap)?;
            let sol = critical_temperature(&problem, None)?;
            Ok((problem, sol))
        })
    }

    fn coeffs(&mut self) -> Result<GLCoefficients> {
        if self.coeffs.is_none() {
            let res = self.gap().and_then(|(_, sol)| gl_coefficients(sol));
            self.coeffs = Some(res.map_err(|e| e.to_string()));
        }
        cached(&mut self.coeffs, "coefficients", || unreachable!()).copied()
    }

    fn cell(&mut self) -> Result<&MagneticCell> {
        let n = self.cfg.cell_n;
        cached(&mut self.cell, "magnetic cell", || {
            MagneticCell::new(1.0, n)
        })
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn resolvent_l1_closed_form(_: &mut Context) -> Result<Measured> {
    let (t, mu) = (0.1, 1.0);
    let path = speaker_path(CONTOUR_R, 1.0 / t, mu);
    let params = [3.0, 0.5, 0.3, 0.5, 7.0];
    let points: Vec<Complex64> = path
        .segments
        .iter()
        .zip(params)
        .map(|(s, t)| s.point(t))
        .collect();
    let mut worst: f64 = 0.0;
    for a in [0.0, 1.0, 2.0, 3.0] {
        for &z in &points {
            worst = worst.max(rel(
                g0_weighted_l1(a, z, mu)?,
                g0_weighted_l1_quadrature(a, z, mu)?,
            ));
        }
    }
    let pts: Vec<[f64; 2]> = points.iter().map(|z| [z.re, z.im]).collect();
    Ok(Measured {
        error: worst,
        parameters: json!({ "a": [0, 1, 2, 3], "T": t, "mu": mu, "R": CONTOUR_R, "z": pts }),
    })
}

const COSH2_PAIRS: [(f64, f64); 10] = [
    (0.5, 0.3),
    (1.0, 0.0),
    (1.0, 1.2),
    (2.0, 0.7),
    (2.0, -2.0),
    (5.0, 0.05),
    (5.0, 1.0),
    (10.0, 0.2),
    (10.0, -0.4),
    (20.0, 0.1),
];

const G1_PAIRS: [(f64, f64); 10] = [
    (0.5, 0.3),
    (1.0, 1.0),
    (1.0, -2.5),
    (2.0, 0.7),
    (3.0, 0.01),
    (5.0, 0.05),
    (5.0, 1.0),
    (8.9, 120.0),
    (10.0, -0.4),
    (20.0, 0.1),
];

fn matsubara_cosh2(_: &mut Context) -> Result<Measured> {
    let cfg = MatsubaraConfig::new(MATSUBARA_N);
    let mut worst: f64 = 0.0;
    for (beta, z) in COSH2_PAIRS {
        let est = cosh2_matsubara_sum(beta, z, &cfg);
        let exact = -0.5 * beta * sech2(0.5 * beta * z);
        worst = worst
            .max(rel(est.value, exact))
            .max(est.tail_bound / exact.abs());
    }
    Ok(Measured {
        error: worst,
        parameters: json!({ "cutoff": MATSUBARA_N, "pairs": COSH2_PAIRS }),
    })
}

fn matsubara_g1(ctx: &mut Context) -> Result<Measured> {
    let cfg = MatsubaraConfig::new(MATSUBARA_N);
    let scale = ctx.cfg.g1_scale;
    let mut worst: f64 = 0.0;
    for (beta, e) in G1_PAIRS {
        let est = g1_matsubara_sum(beta, e, &cfg);
        let exact = 0.5 * beta * beta * scale * g1(beta * e) / e;
        worst = worst
            .max(rel(est.value, exact))
            .max(est.tail_bound / exact.abs());
    }
    Ok(Measured {
        error: worst,
        parameters: json!({ "cutoff": MATSUBARA_N, "pairs": G1_PAIRS }),
    })
}

fn contour_kt(_: &mut Context) -> Result<Measured> {
    let (t, mu) = (0.5, 1.0);
    let xs = [-1.5, -1.0, -0.5, -0.1, 0.0, 0.3, 1.0, 2.0, 5.0, 10.0];
    let mut worst: f64 = 0.0;
    for x in xs {
        worst = worst.max(rel(
            kt_contour_eval(x, t, mu, CONTOUR_R, 8)?,
            kt_symbol(x, t),
        ));
    }
    Ok(Measured {
        error: worst,
        parameters: json!({ "T": t, "mu": mu, "R": CONTOUR_R, "x": xs }),
    })
}

fn g1_g2_transcriptions(_: &mut Context) -> Result<Measured> {
    let zs = [-40.0, -10.0, -3.0, -1.0, -0.5, 0.5, 1.0, 3.0, 10.0, 40.0];
    let worst = zs
        .iter()
        .map(|&z| rel(g1(z), g1_exponential(z)).max(rel(g2(z), g2_exponential(z))))
        .fold(0.0, f64::max);
    Ok(Measured {
        error: worst,
        parameters: json!({ "z": zs }),
    })
}

fn eta_at_tc(ctx: &mut Context) -> Result<Measured> {
    let (_, sol) = ctx.gap()?;
    Ok(Measured {
        error: sol.eta_residual,
        parameters: json!({ "Tc": sol.tc, "eta": sol.eta }),
    })
}

fn gap_residual(ctx: &mut Context) -> Result<Measured> {
    let (_, sol) = ctx.gap()?;
    Ok(Measured {
        error: sol.gap_residual,
        parameters: json!({ "Tc": sol.tc }),
    })
}

fn alpha_norm(ctx: &mut Context) -> Result<Measured> {
    let (_, sol) = ctx.gap()?;
    Ok(Measured {
        error: (sol.alpha_norm - 1.0).abs(),
        parameters: json!({ "norm": sol.alpha_norm }),
    })
}

fn spectral_gap_positive(ctx: &mut Context) -> Result<Measured> {
    let kappa_tol = ctx.cfg.gap.kappa_tol;
    let (_, sol) = ctx.gap()?;
    Ok(Measured {
        error: (kappa_tol - sol.kappa()).max(0.0),
        parameters: json!({ "kappa": sol.kappa(), "kappa_tol": kappa_tol }),
    })
}

fn tc_grid_doubling(ctx: &mut Context) -> Result<Measured> {
    let (problem, sol) = ctx.gap()?;
    let fine = critical_temperature(&problem.refined(), None)?;
    Ok(Measured {
        error: rel(sol.tc, fine.tc),
        parameters: json!({ "Tc": sol.tc, "Tc_refined": fine.tc }),
    })
}

fn alpha_gradient_fd(ctx: &mut Context) -> Result<Measured> {
    let (_, sol) = ctx.gap()?;
    let report = moment_check(sol, 2, None)?;
    let moments: Vec<f64> = report.entries.iter().map(|e| e.value).collect();
    Ok(Measured {
        error: report.gradient_fd_error,
        parameters: json!({ "r_max": report.r_max, "moments": moments }),
    })
}

fn cross_check(
    ctx: &mut Context,
    pick: fn(&crate::glcoeff::CrossChecks) -> f64,
) -> Result<Measured> {
    let c = ctx.coeffs()?;
    Ok(Measured {
        error: pick(&c.provenance.cross_checks),
        parameters: json!({ "Tc": c.tc, "p_nodes": c.provenance.p_nodes }),
    })
}

fn lambda2_fd(ctx: &mut Context) -> Result<Measured> {
    cross_check(ctx, |x| x.lambda2_fd)
}

fn lambda0_hessian(ctx: &mut Context) -> Result<Measured> {
    cross_check(ctx, |x| x.lambda0_hessian)
}

fn lambda0_cross_form(ctx: &mut Context) -> Result<Measured> {
    cross_check(ctx, |x| x.lambda0_cross_form)
}

fn lambda3_matsubara(ctx: &mut Context) -> Result<Measured> {
    cross_check(ctx, |x| x.lambda3_matsubara)
}

fn dc_identity(ctx: &mut Context) -> Result<Measured> {
    let c = ctx.coeffs()?;
    Ok(Measured {
        error: (c.dc * c.lambda2 - 2.0 * c.lambda0).abs() / c.lambda0,
        parameters: json!({ "Dc": c.dc, "Lambda0": c.lambda0, "Lambda2": c.lambda2 }),
    })
}

fn landau_errors() -> Result<Vec<f64>> {
    [32, 64, 128]
        .iter()
        .map(|&n| Ok((MagneticCell::new(1.0, n)?.levels()?.lowest - 2.0).abs()))
        .collect()
}

fn landau_lowest(_: &mut Context) -> Result<Measured> {
    let cell = MagneticCell::new(1.0, 128)?;
    let levels = cell.levels()?;
    Ok(Measured {
        error: (levels.lowest - 2.0).abs(),
        parameters: json!({ "B": 1.0, "N": 128, "lowest": levels.lowest, "degeneracy": levels.degeneracy, "next": levels.next }),
    })
}

fn landau_order(_: &mut Context) -> Result<Measured> {
    let errs = landau_errors()?;
    let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Ok(Measured {
        error: orders.iter().map(|p| (p - 2.0).abs()).fold(0.0, f64::max),
        parameters: json!({ "N": [32, 64, 128], "errors": errs, "orders": orders }),
    })
}

fn random_field(len: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect()
}

fn translation_commutator(ctx: &mut Context) -> Result<Measured> {
    let n = 32;
    let cell = MagneticCell::new(1.0, n)?;
    let psi = random_field(cell.len(), ctx.cfg.seed);
    let mut worst: f64 = 0.0;
    for (sx, sy) in [(n / 2, 0), (0, n / 2)] {
        let t = cell
            .translation(sx, sy)
            .ok_or(Error::Singular("half-cell magnetic translation"))?;
        let a = cell.apply_vec(&t.apply(&cell, &psi));
        let b = t.apply(&cell, &cell.apply_vec(&psi));
        let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let diff = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        worst = worst.max(diff / scale);
    }
    Ok(Measured {
        error: worst,
        parameters: json!({ "N": n, "shifts": [[n / 2, 0], [0, n / 2]] }),
    })
}

fn gl_gradient_fd(ctx: &mut Context) -> Result<Measured> {
    let c = ctx.coeffs()?;
    let seed = ctx.cfg.seed;
    let cell = MagneticCell::new(1.0, 16)?;
    let f = GlFunctional::new(&cell, 1.3 * c.dc, &c)?;
    let psi = random_field(cell.len(), seed);
    let mut g = vec![Complex64::new(0.0, 0.0); cell.len()];
    f.energy_and_gradient(&psi, &mut g);
    let eps = 1e-5;
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let v = random_field(cell.len(), seed + 1 + k);
        let plus: Vec<Complex64> = psi.iter().zip(&v).map(|(a, b)| a + b * eps).collect();
        let minus: Vec<Complex64> = psi.iter().zip(&v).map(|(a, b)| a - b * eps).collect();
        let fd = (f.energy(&plus) - f.energy(&minus)) / (2.0 * eps);
        let an = g
            .iter()
            .zip(&v)
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum::<f64>()
            / cell.len() as f64;
        worst = worst.max(rel(fd, an));
    }
    Ok(Measured {
        error: worst,
        parameters: json!({ "N": 16, "D_over_Dc": 1.3, "directions": 10, "eps": eps }),
    })
}

fn gl_phase_invariance(ctx: &mut Context) -> Result<Measured> {
    let c = ctx.coeffs()?;
    let cell = MagneticCell::new(1.0, 16)?;
    let f = GlFunctional::new(&cell, 1.3 * c.dc, &c)?;
    let psi = random_field(cell.len(), ctx.cfg.seed);
    let e = f.energy(&psi);
    let mut worst: f64 = 0.0;
    for theta in [0.4, 2.2, -1.7] {
        let rot: Vec<Complex64> = psi
            .iter()
            .map(|z| z * Complex64::from_polar(1.0, theta))
            .collect();
        worst = worst.max((f.energy(&rot) - e).abs() / e.abs().max(1.0));
    }
    Ok(Measured {
        error: worst,
        parameters: json!({ "N": 16, "theta": [0.4, 2.2, -1.7] }),
    })
}

fn gl_threshold_below(ctx: &mut Context) -> Result<Measured> {
    let c = ctx.coeffs()?;
    let mc = ctx.cfg.minimizer;
    let cell = ctx.cell()?;
    let factors = [0.5, 0.9, 1.0];
    let mut energies = Vec::new();
    for f in factors {
        energies.push(minimize_gl(f * c.dc, &c, cell, &Init::LowestLandau, &mc)?.energy);
    }
    Ok(Measured {
        error: energies.iter().map(|e| e.abs()).fold(0.0, f64::max),
        parameters: json!({ "N": cell.n(), "D_over_Dc": factors, "energies": energies }),
    })
}

fn gl_threshold_above(ctx: &mut Context) -> Result<Measured> {
    let c = ctx.coeffs()?;
    let mc = ctx.cfg.minimizer;
    let cell = ctx.cell()?;
    let r = minimize_gl(1.1 * c.dc, &c, cell, &Init::LowestLandau, &mc)?;
    Ok(Measured {
        error: (r.energy + 1e-6).max(0.0),
        parameters: json!({ "N": cell.n(), "D_over_Dc": 1.1, "energy": r.energy, "bound": -1e-6 }),
    })
}

fn gl_descent(ctx: &mut Context) -> Result<Measured> {
    let c = ctx.coeffs()?;
    let mc = ctx.cfg.minimizer;
    let cell = ctx.cell()?;
    let mut worst: f64 = 0.0;
    for f in [0.9, 1.1, 1.5] {
        let r = minimize_gl(f * c.dc, &c, cell, &Init::LowestLandau, &mc)?;
        worst = worst.max(r.energy - r.initial_energy);
    }
    Ok(Measured {
        error: worst.max(0.0),
        parameters: json!({ "N": cell.n(), "D_over_Dc": [0.9, 1.1, 1.5] }),
    })
}

fn gl_exponent(ctx: &mut Context) -> Result<Measured> {
    let c = ctx.coeffs()?;
    let mc = ctx.cfg.minimizer;
    let cell = ctx.cell()?;
    let ds: Vec<f64> = (0..6).map(|k| c.dc * (1.01 + 0.018 * k as f64)).collect();
    let (points, _) = egl_curve(&ds, &c, cell, &mc)?;
    let p = fit_exponent(&points, c.dc)?;
    Ok(Measured {
        error: (p - 2.0).abs(),
        parameters: json!({ "N": cell.n(), "D_over_Dc": [1.01, 1.1], "points": ds.len(), "exponent": p }),
    })
}

fn gl_scaling(ctx: &mut Context) -> Result<Measured> {
    let c = ctx.coeffs()?;
    let mc = ctx.cfg.minimizer;
    let r = scaling_check(1.5 * c.dc, &c, 1.0, 4.0, 128, &mc)?;
    Ok(Measured {
        error: r.relative_difference.max(r.rescaled_relative_difference),
        parameters: json!({ "B": [1.0, 4.0], "N": 128, "D_over_Dc": 1.5, "energies": [r.energy_b1, r.energy_b2] }),
    })
}

/// Declaration order fixes report order.
pub(crate) const CHECKS: &[(&str, CheckFn)] = &[
    ("resolvent_l1_closed_form", resolvent_l1_closed_form),
    ("matsubara_cosh2", matsubara_cosh2),
    ("matsubara_g1", matsubara_g1),
    ("contour_kt", contour_kt),
    ("g1_g2_transcriptions", g1_g2_transcriptions),
    ("eta_at_tc", eta_at_tc),
    ("gap_residual", gap_residual),
    ("alpha_norm", alpha_norm),
    ("spectral_gap_positive", spectral_gap_positive),
    ("tc_grid_doubling", tc_grid_doubling),
    ("alpha_gradient_fd", alpha_gradient_fd),
    ("lambda2_fd", lambda2_fd),
    ("lambda0_hessian", lambda0_hessian),
    ("lambda0_cross_form", lambda0_cross_form),
    ("lambda3_matsubara", lambda3_matsubara),
    ("dc_identity", dc_identity),
    ("landau_lowest", landau_lowest),
    ("landau_order", landau_order),
    ("translation_commutator", translation_commutator),
    ("gl_gradient_fd", gl_gradient_fd),
    ("gl_phase_invariance", gl_phase_invariance),
    ("gl_threshold_below", gl_threshold_below),
    ("gl_threshold_above", gl_threshold_above),
    ("gl_descent", gl_descent),
    ("gl_exponent", gl_exponent),
    ("gl_scaling", gl_scaling),
];
