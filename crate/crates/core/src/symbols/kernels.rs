use std::f64::consts::LN_2;

/// `ln cosh x` without overflow.
#[inline]
pub fn ln_cosh(x: f64) -> f64 {
    let ax = x.abs();
    ax + (-2.0 * ax).exp().ln_1p() - LN_2
}

/// `sech² x` without overflow.
#[inline]
pub fn sech2(x: f64) -> f64 {
    let e = (-2.0 * x.abs()).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

/// `K_T(x) = x / tanh(x / 2T)`, with the limit `2T` at `x = 0`.
pub fn kt_symbol(x: f64, t: f64) -> f64 {
    let y = x / (2.0 * t);
    if y == 0.0 {
        2.0 * t
    } else {
        x / y.tanh()
    }
}

/// `1 / K_T(x) = tanh(x / 2T) / x`, with the limit `1 / 2T` at `x = 0`.
pub fn kt_inverse(x: f64, t: f64) -> f64 {
    let y = x / (2.0 * t);
    if y == 0.0 {
        0.5 / t
    } else {
        y.tanh() / x
    }
}

/// `∂_T K_T(x)^{-1} = −sech²(x/2T) / (2T²)`.
pub fn kt_inverse_dt(x: f64, t: f64) -> f64 {
    -sech2(x / (2.0 * t)) / (2.0 * t * t)
}

/// `L_T` in terms of the shifted energies `a = p² − μ`, `b = q² − μ`:
/// `[tanh(βa/2) + tanh(βb/2)] / (a + b)`.
///
/// Evaluated as `sinh(s) / ((a+b) cosh(βa/2) cosh(βb/2))` with `s = β(a+b)/2`,
/// which has no cancellation at `a + b = 0` and no overflow for large energies.
pub fn lt_energies(a: f64, b: f64, beta: f64) -> f64 {
    let x = 0.5 * beta * a;
    let y = 0.5 * beta * b;
    let s = x + y;
    let damp = -ln_cosh(x) - ln_cosh(y);
    if s.abs() < 1.0 {
        let shc = if s == 0.0 { 1.0 } else { s.sinh() / s };
        0.5 * beta * shc * damp.exp()
    } else {
        let ln_sinh = s.abs() + (-(-2.0 * s.abs()).exp()).ln_1p() - LN_2;
        s.signum() * (ln_sinh + damp).exp() / (a + b)
    }
}

/// `L_T(p, q)` for momenta `p`, `q` at chemical potential `mu`.
pub fn lt_symbol(p: f64, q: f64, t: f64, mu: f64) -> f64 {
    lt_energies(p * p - mu, q * q - mu, 1.0 / t)
}

/// `g₀(z) = tanh(z/2) / z`.
fn g0(z: f64) -> f64 {
    if z == 0.0 {
        0.5
    } else {
        (0.5 * z).tanh() / z
    }
}

const G1_SERIES_RADIUS: f64 = 0.1;

/// Odd Taylor coefficients of `g₁(z) / z` in powers of `z²`.
const G1_OVER_Z_SERIES: [f64; 5] = [
    1.0 / 12.0,
    -1.0 / 60.0,
    17.0 / 6720.0,
    -31.0 / 90720.0,
    691.0 / 15966720.0,
];

fn g1_over_z_series(z: f64) -> f64 {
    let z2 = z * z;
    G1_OVER_Z_SERIES
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc.mul_add(z2, c))
}

/// `g₁(z) = −g₀'(z) = tanh(z/2)/z² − sech²(z/2)/(2z)`.
///
/// Odd, positive for `z > 0`, with `g₁(z) ≈ z/12` near the origin.
pub fn g1(z: f64) -> f64 {
    if z.abs() < G1_SERIES_RADIUS {
        z * g1_over_z_series(z)
    } else {
        (0.5 * z).tanh() / (z * z) - sech2(0.5 * z) / (2.0 * z)
    }
}

/// `g₁(z) / z`, smooth and even with value `1/12` at `z = 0`.
pub fn g1_over_z(z: f64) -> f64 {
    if z.abs() < G1_SERIES_RADIUS {
        g1_over_z_series(z)
    } else {
        g1(z) / z
    }
}

/// `g₂(z) = tanh(z/2) sech²(z/2) / (2z)`; even with `g₂(0) = 1/4`.
pub fn g2(z: f64) -> f64 {
    0.5 * g0(z) * sech2(0.5 * z)
}

/// `g₁` written with exponentials, `(e^{2z} − 2z e^z − 1) / (z² (1 + e^z)²)`.
///
/// Same function as [`g1`]; kept as an independent transcription for
/// cross-checks.
pub fn g1_exponential(z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    if z < 0.0 {
        return -g1_exponential(-z);
    }
    let e = (-z).exp();
    (1.0 - 2.0 * z * e - e * e) / (z * z * (1.0 + e) * (1.0 + e))
}

/// `g₂` written with exponentials, `2 e^z (e^z − 1) / (z (e^z + 1)³)`.
pub fn g2_exponential(z: f64) -> f64 {
    if z == 0.0 {
        return 0.25;
    }
    let a = z.abs();
    let e = (-a).exp();
    2.0 * e * (1.0 - e) / (a * (1.0 + e).powi(3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn kt_limits() {
        assert_eq!(kt_symbol(0.0, 0.3), 0.6);
        assert_eq!(kt_symbol(-1.7, 0.4), kt_symbol(1.7, 0.4));
        assert_relative_eq!(kt_symbol(50.0, 1.0), 50.0, max_relative = 1e-10);
        assert_relative_eq!(kt_inverse(0.0, 0.25), 2.0);
    }

    #[test]
    fn lt_diagonal_is_inverse_kt() {
        for p in [0.0, 0.3, 0.99, 1.01, 1.7, 30.0] {
            let l = lt_symbol(p, p, 0.1, 1.0);
            assert_relative_eq!(l * kt_symbol(p * p - 1.0, 0.1), 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn lt_removable_point() {
        // a = −b: limit (β/2) sech²(βa/2)
        let (a, beta) = (0.3, 7.0);
        let want = 0.5 * beta * sech2(0.5 * beta * a);
        assert_relative_eq!(lt_energies(a, -a, beta), want, max_relative = 1e-15);
        let near = lt_energies(a, -a + 1e-7, beta);
        assert_relative_eq!(near, want, max_relative = 1e-6);
    }

    #[test]
    fn lt_large_energies_do_not_overflow() {
        let l = lt_energies(5e4, -4e4, 1e3);
        assert!(l.is_finite() && l >= 0.0);
        assert!(l < 1e-300);
        let moderate = lt_energies(30.0, -20.0, 1.0);
        let direct = ((15.0f64).tanh() + (-10.0f64).tanh()) / 10.0;
        assert_relative_eq!(moderate, direct, max_relative = 1e-6);
    }

    #[test]
    fn g_functions_at_origin() {
        assert_eq!(g1(0.0), 0.0);
        assert_eq!(g1_over_z(0.0), 1.0 / 12.0);
        assert_eq!(g2(0.0), 0.25);
    }

    #[test]
    fn g1_series_matches_direct_across_switch() {
        for z in [0.0999f64, 0.1001, 0.05] {
            let direct = (0.5 * z).tanh() / (z * z) - sech2(0.5 * z) / (2.0 * z);
            assert_relative_eq!(g1(z), direct, max_relative = 1e-11);
        }
    }

    #[test]
    fn g1_reference_values() {
        // mpmath, 30 digits: -d/dz[tanh(z/2)/z]
        assert_relative_eq!(g1(1.0), 0.06889329077704605, max_relative = 1e-14);
        assert_relative_eq!(g1(0.01), 0.0008333166669196394, max_relative = 1e-14);
        assert_relative_eq!(g1(-3.0), -0.07045425502882152, max_relative = 1e-14);
    }

    proptest! {
        #[test]
        fn kt_dominates_2t_and_abs(x in -200.0f64..200.0, t in 1e-3f64..10.0) {
            let k = kt_symbol(x, t);
            prop_assert!(k >= (2.0 * t).max(x.abs()) * (1.0 - 1e-14));
        }

        #[test]
        fn lt_is_symmetric(p in 0.0f64..5.0, q in 0.0f64..5.0, t in 0.01f64..2.0) {
            prop_assert_eq!(lt_symbol(p, q, t, 1.0), lt_symbol(q, p, t, 1.0));
        }

        #[test]
        fn exponential_forms_agree(z in -60.0f64..60.0) {
            prop_assume!(z.abs() > 0.5);
            prop_assert!((g1(z) - g1_exponential(z)).abs() <= 1e-12 * g1(z).abs());
            prop_assert!((g2(z) - g2_exponential(z)).abs() <= 1e-12 * g2(z));
        }
    }
}
