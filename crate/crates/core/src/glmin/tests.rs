use approx::assert_relative_eq;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;
use crate::glcoeff::{CrossChecks, GLCoefficients, Provenance};

// Reference Gaussian coefficients, pinned in glcoeff.
fn coeffs() -> GLCoefficients {
    let (l0, l2, l3) = (8.572937826154491e-1, 1.479092591834891e-1, 7.07966417435008);
    GLCoefficients {
        tc: 0.112630618627167,
        mu: 1.0,
        lambda0: l0,
        lambda2: l2,
        lambda3: l3,
        dc: 2.0 * l0 / l2,
        provenance: Provenance {
            p_nodes: 0,
            p_max: 0.0,
            order: 0,
            matsubara_cutoff: 0,
            cross_checks: CrossChecks {
                lambda2_fd: 0.0,
                lambda0_hessian: 0.0,
                lambda0_cross_form: 0.0,
                lambda3_matsubara: 0.0,
            },
        },
    }
}

fn random_field(len: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn plaquettes_carry_uniform_flux() {
    for (b, n) in [(1.0, 16), (3.7, 24)] {
        let cell = MagneticCell::new(b, n).unwrap();
        let want = cell.flux_phase();
        let mut total = Complex64::new(1.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let p = cell.plaquette(i, j);
                assert!((p - want).norm() <= 1e-12, "({i}, {j})");
                total *= p;
            }
        }
        assert!((total - 1.0).norm() <= 1e-10);
        assert_relative_eq!(cell.side(), (2.0 * std::f64::consts::PI / b).sqrt());
    }
}

#[test]
fn invalid_cells_rejected() {
    assert!(MagneticCell::new(0.0, 16).is_err());
    assert!(MagneticCell::new(1.0, 15).is_err());
    assert!(MagneticCell::new(f64::NAN, 16).is_err());
}

#[test]
fn laplacian_is_exactly_hermitian_and_nonnegative() {
    let n = 8;
    let cell = MagneticCell::new(1.3, n).unwrap();
    let len = n * n;
    let cols: Vec<Vec<Complex64>> = (0..len)
        .map(|k| {
            let mut e = vec![Complex64::new(0.0, 0.0); len];
            e[k] = Complex64::new(1.0, 0.0);
            cell.apply_vec(&e)
        })
        .collect();
    for (a, col_a) in cols.iter().enumerate() {
        for (b, col_b) in cols.iter().enumerate() {
            assert_eq!(col_b[a], col_a[b].conj());
        }
    }
    let m = nalgebra::DMatrix::from_fn(len, len, |a, b| cols[b][a]);
    let eig = nalgebra::SymmetricEigen::new(m);
    assert!(eig.eigenvalues.min() > 0.0);
}

#[test]
fn zero_flux_stencil_annihilates_constants() {
    let n = 8;
    let cell = MagneticCell::field_free(2.0, n).unwrap();
    let ones = vec![Complex64::new(1.0, 0.0); n * n];
    assert!(cell.apply_vec(&ones).iter().all(|z| z.norm() == 0.0));
    let cols: Vec<Vec<Complex64>> = (0..n * n)
        .map(|k| {
            let mut e = vec![Complex64::new(0.0, 0.0); n * n];
            e[k] = Complex64::new(1.0, 0.0);
            cell.apply_vec(&e)
        })
        .collect();
    let m = nalgebra::DMatrix::from_fn(n * n, n * n, |a, b| cols[b][a]);
    let eig = nalgebra::SymmetricEigen::new(m);
    assert!(eig.eigenvalues.min().abs() <= 1e-12);
}

#[test]
fn ring_solver_inverts_the_stencil() {
    let cell = MagneticCell::new(2.5, 16).unwrap();
    let rhs = random_field(cell.len(), 3);
    let mut x = vec![Complex64::new(0.0, 0.0); cell.len()];
    cell.solve(&rhs, &mut x).unwrap();
    let back = cell.apply_vec(&x);
    assert!(max_diff(&back, &rhs) <= 1e-11);
}

#[test]
fn lowest_level_is_two_with_second_order_convergence() {
    let errs: Vec<f64> = [32, 64, 128]
        .iter()
        .map(|&n| {
            let cell = MagneticCell::new(1.0, n).unwrap();
            let levels = cell.levels().unwrap();
            assert_eq!(levels.degeneracy, 2);
            (levels.lowest - 2.0).abs()
        })
        .collect();
    assert!(errs[2] <= 0.01);
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 2.0).abs() <= 0.1, "{errs:?}");
    }
}

#[test]
fn second_level_near_six() {
    let cell = MagneticCell::new(1.0, 64).unwrap();
    let levels = cell.levels().unwrap();
    assert!((levels.next - 6.0).abs() <= 0.01, "{}", levels.next);
}

#[test]
fn spectrum_scales_with_field() {
    let a = MagneticCell::new(1.0, 32).unwrap();
    let b = MagneticCell::new(4.0, 32).unwrap();
    assert_relative_eq!(
        4.0 * lowest_landau_eigenvalue(&a).unwrap(),
        lowest_landau_eigenvalue(&b).unwrap(),
        max_relative = 1e-12
    );
}

#[test]
fn lowest_level_is_gauge_invariant() {
    let cell = MagneticCell::new(1.0, 24).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let chi: Vec<f64> = (0..cell.len()).map(|_| 6.0 * rng.random::<f64>()).collect();
    let other = cell.regauge(&chi).unwrap();
    assert!(!other.has_direct_solver());
    assert!((other.plaquette(3, 5) - cell.flux_phase()).norm() <= 1e-12);
    let a = lowest_landau_eigenvalue(&cell).unwrap();
    let b = lowest_landau_eigenvalue(&other).unwrap();
    assert!((a - b).abs() <= 1e-10, "{a} {b}");
}

#[test]
fn magnetic_translations_commute_with_laplacian() {
    let n = 16;
    let cell = MagneticCell::new(1.0, n).unwrap();
    let psi = random_field(cell.len(), 5);
    for (sx, sy) in [(n / 2, 0), (0, n / 2), (n / 2, n / 2)] {
        let t = cell.translation(sx, sy).expect("half-cell translation");
        let a = cell.apply_vec(&t.apply(&cell, &psi));
        let b = t.apply(&cell, &cell.apply_vec(&psi));
        let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(max_diff(&a, &b) <= 1e-12 * scale);
    }
    assert!(cell.translation(1, 0).is_none());
}

#[test]
fn energy_of_zero_and_single_site_fields() {
    let c = coeffs();
    let cell = MagneticCell::new(2.0, 16).unwrap();
    let zero = OrderParameterField::zeros(16);
    assert_eq!(gl_energy(&zero, 3.0, &c, &cell).unwrap(), 0.0);
    let amp = 0.7;
    let mut spike = OrderParameterField::zeros(16);
    spike.values[37] = Complex64::new(0.0, amp);
    let d = 5.0;
    let (b, h, len) = (cell.b(), cell.h(), cell.len() as f64);
    let want = (c.lambda0 * 4.0 * amp * amp / (h * h) - d * b * c.lambda2 * amp * amp
        + c.lambda3 * amp.powi(4))
        / (b * b * len);
    assert_relative_eq!(
        gl_energy(&spike, d, &c, &cell).unwrap(),
        want,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        c.lambda3 * spike.mean_pow(4) / (b * b),
        c.lambda3 * amp.powi(4) / (b * b * len)
    );
}

#[test]
fn energy_is_phase_invariant() {
    let c = coeffs();
    let cell = MagneticCell::new(1.0, 16).unwrap();
    let psi = OrderParameterField::new(16, random_field(cell.len(), 9)).unwrap();
    let e = gl_energy(&psi, 12.0, &c, &cell).unwrap();
    for theta in [0.3, 1.9, -2.4] {
        let rotated = psi.scaled(Complex64::from_polar(1.0, theta));
        assert!(
            (gl_energy(&rotated, 12.0, &c, &cell).unwrap() - e).abs() <= 1e-12 * e.abs().max(1.0)
        );
    }
}

#[test]
fn gradient_matches_central_differences() {
    let c = coeffs();
    let cell = MagneticCell::new(1.0, 16).unwrap();
    let f = GlFunctional::new(&cell, 1.3 * c.dc, &c).unwrap();
    let psi = random_field(cell.len(), 21);
    let mut g = vec![Complex64::new(0.0, 0.0); cell.len()];
    f.energy_and_gradient(&psi, &mut g);
    for k in 0..10 {
        let v = random_field(cell.len(), 100 + k);
        let eps = 1e-5;
        let plus: Vec<Complex64> = psi.iter().zip(&v).map(|(a, b)| a + b * eps).collect();
        let minus: Vec<Complex64> = psi.iter().zip(&v).map(|(a, b)| a - b * eps).collect();
        let fd = (f.energy(&plus) - f.energy(&minus)) / (2.0 * eps);
        let an = g
            .iter()
            .zip(&v)
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum::<f64>()
            / cell.len() as f64;
        assert!((fd - an).abs() <= 1e-6 * an.abs(), "{fd} {an}");
    }
}

#[test]
fn one_mode_quadratic_part_changes_sign_at_threshold() {
    let c = coeffs();
    let cell = MagneticCell::new(1.0, 32).unwrap();
    let (_, _, phi) = lowest_mode(&cell).unwrap();
    let eps = 1e-4;
    let small = OrderParameterField::new(32, phi.iter().map(|z| z * eps).collect()).unwrap();
    assert!(gl_energy(&small, 0.9 * c.dc, &c, &cell).unwrap() > 0.0);
    assert!(gl_energy(&small, 1.1 * c.dc, &c, &cell).unwrap() < 0.0);
    assert_eq!(
        gl_energy(
            &small.scaled(Complex64::new(0.0, 0.0)),
            1.1 * c.dc,
            &c,
            &cell
        )
        .unwrap(),
        0.0
    );
}

#[test]
fn threshold_behavior_of_minimum() {
    let c = coeffs();
    let cell = MagneticCell::new(1.0, 64).unwrap();
    let cfg = MinimizerConfig::default();
    for f in [0.0, 0.5, 0.9, 1.0] {
        let r = minimize_gl(f * c.dc, &c, &cell, &Init::LowestLandau, &cfg).unwrap();
        assert!(
            r.energy.abs() <= 1e-6 && r.energy <= 0.0,
            "{f}: {}",
            r.energy
        );
        assert!(r.grad_norm <= r.tolerance);
    }
    let r = minimize_gl(1.1 * c.dc, &c, &cell, &Init::LowestLandau, &cfg).unwrap();
    assert!(r.energy < -1e-6);
    assert!(r.energy <= r.initial_energy);
    assert!(r.grad_norm <= 1e-9 * r.energy.abs().max(1.0));
}

#[test]
fn minimum_stable_under_refinement() {
    let c = coeffs();
    let cfg = MinimizerConfig::default();
    let e = |n| {
        let cell = MagneticCell::new(1.0, n).unwrap();
        minimize_gl(1.5 * c.dc, &c, &cell, &Init::LowestLandau, &cfg)
            .unwrap()
            .energy
    };
    let (coarse, fine) = (e(64), e(128));
    assert!(coarse < 0.0 && ((coarse - fine) / fine).abs() < 0.01);
}

#[test]
fn curve_is_monotone_and_quadratic_near_threshold() {
    let c = coeffs();
    let cell = MagneticCell::new(1.0, 64).unwrap();
    let cfg = MinimizerConfig::default();
    let below: Vec<f64> = [0.3, 0.6, 1.0].iter().map(|f| f * c.dc).collect();
    let (pts, _) = egl_curve(&below, &c, &cell, &cfg).unwrap();
    assert!(pts.iter().all(|p| p.energy.abs() <= 1e-6));
    let near: Vec<f64> = (0..6).map(|k| c.dc * (1.01 + 0.018 * k as f64)).collect();
    let (pts, _) = egl_curve(&near, &c, &cell, &cfg).unwrap();
    assert!(pts.windows(2).all(|w| w[1].energy <= w[0].energy));
    let p = fit_exponent(&pts, c.dc).unwrap();
    assert!((p - 2.0).abs() <= 0.1, "{p}");
    assert!(egl_curve(&[2.0, 1.0], &c, &cell, &cfg).is_err());
}

#[test]
fn scaling_between_fields() {
    let c = coeffs();
    let cfg = MinimizerConfig::default();
    let same = scaling_check(1.5 * c.dc, &c, 2.0, 2.0, 32, &cfg).unwrap();
    assert_eq!(same.energy_b1, same.energy_b2);
    let r = scaling_check(1.5 * c.dc, &c, 1.0, 4.0, 64, &cfg).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn iteration_cap_is_reported() {
    let c = coeffs();
    let cell = MagneticCell::new(1.0, 32).unwrap();
    let cfg = MinimizerConfig {
        max_iter: 1,
        ..MinimizerConfig::default()
    };
    let r = minimize_gl(1.5 * c.dc, &c, &cell, &Init::LowestLandau, &cfg);
    assert!(matches!(r, Err(Error::NonConvergence { .. })));
}

#[test]
fn nonpositive_coefficients_rejected() {
    let mut c = coeffs();
    c.lambda3 = 0.0;
    let cell = MagneticCell::new(1.0, 16).unwrap();
    assert!(minimize_gl(
        1.0,
        &c,
        &cell,
        &Init::LowestLandau,
        &MinimizerConfig::default()
    )
    .is_err());
}
