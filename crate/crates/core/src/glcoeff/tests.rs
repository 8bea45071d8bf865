use std::sync::OnceLock;

use approx::assert_relative_eq;
use proptest::prelude::*;

use super::*;
use crate::gap::{critical_temperature, GapConfig, GapProblem};
use crate::model::Potential;

// oracles/glcoeff_oracle.py
const LAMBDA0: f64 = 8.572937826154491e-1;
const LAMBDA2: f64 = 1.479092591834891e-1;
const LAMBDA3: f64 = 7.07966417435008;
const DC: f64 = 1.159215842670041e1;

fn reference() -> &'static (GapProblem, GapSolution, GLCoefficients) {
    static REF: OnceLock<(GapProblem, GapSolution, GLCoefficients)> = OnceLock::new();
    REF.get_or_init(|| {
        let problem = GapProblem::new(
            &Potential::gaussian(2.0, 1.0).unwrap(),
            1.0,
            GapConfig::default(),
        )
        .unwrap();
        let sol = critical_temperature(&problem, None).unwrap();
        let coeffs = gl_coefficients(&sol).unwrap();
        (problem, sol, coeffs)
    })
}

#[test]
fn reference_values() {
    let (_, _, c) = reference();
    assert_relative_eq!(c.lambda0, LAMBDA0, max_relative = 1e-9);
    assert_relative_eq!(c.lambda2, LAMBDA2, max_relative = 1e-9);
    assert_relative_eq!(c.lambda3, LAMBDA3, max_relative = 1e-9);
    assert_relative_eq!(c.dc, DC, max_relative = 1e-9);
}

#[test]
fn coefficients_positive() {
    let (_, _, c) = reference();
    assert!(c.lambda0 > 0.0 && c.lambda2 > 0.0 && c.lambda3 > 0.0 && c.dc > 0.0);
}

#[test]
fn oracle_cross_checks() {
    let (_, _, c) = reference();
    let x = c.provenance.cross_checks;
    assert!(x.lambda2_fd <= 1e-5, "{x:?}");
    assert!(x.lambda0_hessian <= 1e-4, "{x:?}");
    assert!(x.lambda0_cross_form <= 1e-8, "{x:?}");
    assert!(x.lambda3_matsubara <= 1e-8, "{x:?}");
}

#[test]
fn stable_under_grid_doubling() {
    let (_, sol, c) = reference();
    let fine = CoefficientIntegrand::new(sol)
        .unwrap()
        .refined(sol)
        .unwrap();
    assert_relative_eq!(fine.lambda0().unwrap(), c.lambda0, max_relative = 1e-5);
    assert_relative_eq!(fine.lambda2().unwrap(), c.lambda2, max_relative = 1e-5);
    assert_relative_eq!(fine.lambda3().unwrap(), c.lambda3, max_relative = 1e-5);
}

#[test]
fn zero_weight_gives_zero_coefficients() {
    let (_, sol, _) = reference();
    let ci = CoefficientIntegrand::new(sol).unwrap().with_weight(|_| 0.0);
    assert_eq!(ci.lambda0().unwrap(), 0.0);
    assert_eq!(ci.lambda2().unwrap(), 0.0);
    assert_eq!(ci.lambda3().unwrap(), 0.0);
    assert!(matches!(
        critical_ratio_dc(0.0, 0.0),
        Err(Error::DivisionGuard(_))
    ));
}

#[test]
fn growing_weight_is_truncation() {
    let (_, sol, _) = reference();
    let ci = CoefficientIntegrand::new(sol)
        .unwrap()
        .with_weight(|p| p * p);
    assert!(matches!(ci.lambda0(), Err(Error::Truncation { .. })));
}

#[test]
fn dc_edge_cases() {
    assert_eq!(critical_ratio_dc(0.3, 0.3).unwrap(), 2.0);
    assert_eq!(critical_ratio_dc(1.0, 4.0).unwrap(), 0.5);
    let (_, _, c) = reference();
    assert!((c.dc * c.lambda2 - 2.0 * c.lambda0).abs() <= 4.0 * f64::EPSILON * c.lambda0);
}

#[test]
fn tc_shift_values() {
    assert_eq!(tc_shift(0.7, 3.0, 0.0).unwrap().tc_b, 0.7);
    let s = tc_shift(1.0, 2.0, 0.01).unwrap();
    assert_relative_eq!(s.tc_b, 0.98, max_relative = 1e-15);
    assert!(s.valid);
    let past = tc_shift(1.0, 2.0, 0.5).unwrap();
    assert!(!past.valid);
    assert!(tc_shift(1.0, 2.0, -1e-3).is_err());
}

#[test]
fn serialized_field_names() {
    let (_, _, c) = reference();
    let v = serde_json::to_value(c).unwrap();
    for key in [
        "Tc",
        "mu",
        "Lambda0",
        "Lambda2",
        "Lambda3",
        "Dc",
        "provenance",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

proptest! {
    #[test]
    fn tc_shift_is_linear_in_b(tc in 0.01f64..1.0, dc in 0.0f64..20.0, b1 in 0.0f64..0.05, b2 in 0.0f64..0.05) {
        let s = |b: f64| tc_shift(tc, dc, b).unwrap().tc_b;
        let mid = s(0.5 * (b1 + b2));
        prop_assert!((mid - 0.5 * (s(b1) + s(b2))).abs() <= 1e-14 * tc.max(1.0) * (1.0 + dc));
        prop_assert!(s(b1.max(b2)) <= s(b1.min(b2)));
    }

    #[test]
    fn dc_scales_out(l0 in 1e-3f64..1e3, l2 in 1e-3f64..1e3, k in 1e-3f64..1e3) {
        let a = critical_ratio_dc(l0, l2).unwrap();
        let b = critical_ratio_dc(k * l0, k * l2).unwrap();
        prop_assert!((a - b).abs() <= 8.0 * f64::EPSILON * a);
    }
}
