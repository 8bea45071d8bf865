use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::model::grid::RadialGrid;

/// Principal `√(−(z + μ))`, rejecting `z` on the cut `[−μ, ∞)`.
pub fn resolvent_root(z: Complex64, mu: f64) -> Result<Complex64> {
    if z.im == 0.0 && z.re >= -mu {
        return Err(Error::Branch(format!(
            "z = {} lies on the spectrum [{}, ∞)",
            z.re, -mu
        )));
    }
    Ok((-(z + mu)).sqrt())
}

/// Free resolvent kernel `g₀^z(x) = −e^{−√(−(z+μ))|x|} / (4π|x|)`.
pub fn g0_kernel(x: f64, z: Complex64, mu: f64) -> Result<Complex64> {
    if x == 0.0 {
        return Err(Error::Singular("g0 kernel at x = 0"));
    }
    let s = resolvent_root(z, mu)?;
    let r = x.abs();
    Ok(-(-s * r).exp() / (4.0 * PI * r))
}

fn check_weight(a: f64) -> Result<()> {
    if a > -2.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "a",
            reason: format!("weight exponent must exceed -2, got {a}"),
        })
    }
}

/// Closed form `‖|·|^a g₀^z‖₁ = Γ(a+2) / (Re√(−(z+μ)))^{a+2}` over ℝ³.
pub fn g0_weighted_l1(a: f64, z: Complex64, mu: f64) -> Result<f64> {
    check_weight(a)?;
    let s = resolvent_root(z, mu)?.re;
    if s <= 0.0 {
        return Err(Error::Divergence("Re sqrt(-(z+mu)) vanishes"));
    }
    Ok(gamma(a + 2.0) / s.powf(a + 2.0))
}

/// `‖|·|^a g₀^z‖₁` by radial quadrature of the kernel itself.
///
/// For `a < −1` the integrand `r^{a+1}` is singular at the origin; the
/// substitution `r = u^m` with `m(a+2) ≥ 1` removes the singularity.
pub fn g0_weighted_l1_quadrature(a: f64, z: Complex64, mu: f64) -> Result<f64> {
    check_weight(a)?;
    let s = resolvent_root(z, mu)?.re;
    if s <= 0.0 {
        return Err(Error::Divergence("Re sqrt(-(z+mu)) vanishes"));
    }
    let m = if a < -1.0 {
        (1.0 / (a + 2.0)).ceil()
    } else {
        1.0
    };
    // e^{-s r} r^{a+1} is below 1e-18 of its peak well before this radius.
    let r_max = (45.0 + 3.0 * (a + 2.0)) / s;
    let u_max = r_max.powf(1.0 / m);
    let grid = RadialGrid::uniform(0.0, u_max, 48, 16)?;
    let mut total = 0.0;
    let mut values = Vec::with_capacity(grid.len());
    for &u in grid.nodes() {
        let r = u.powf(m);
        let jac = m * u.powf(m - 1.0);
        let g = g0_kernel(r, z, mu)?.norm();
        values.push(4.0 * PI * r * r * r.powf(a) * g * jac);
    }
    let tail = grid.tail_fraction(&values);
    total += grid.weighted_sum(&values);
    if tail > 1e-14 {
        return Err(Error::Truncation {
            context: "g0_weighted_l1_quadrature",
            tail,
            tol: 1e-14,
        });
    }
    Ok(total)
}

/// Decay function `f(t, ω) = (|ω| + |t+μ|) / (|ω| + (t+μ)₋)²` with
/// `x₋ = −min(x, 0)`.
pub fn f_decay(t: f64, omega: f64, mu: f64) -> Result<f64> {
    let x = t + mu;
    let denom = omega.abs() + (-x).max(0.0);
    if denom == 0.0 {
        return Err(Error::Divergence("f(t, omega) denominator"));
    }
    Ok((omega.abs() + x.abs()) / (denom * denom))
}

/// `‖|·|^a g₀^{iω+t}‖₁ / f(t, ω)^{1 + a/2}`, bounded uniformly in `(t, ω)`.
pub fn g0_decay_ratio(a: f64, t: f64, omega: f64, mu: f64) -> Result<f64> {
    let norm = g0_weighted_l1(a, Complex64::new(t, omega), mu)?;
    Ok(norm / f_decay(t, omega, mu)?.powf(1.0 + 0.5 * a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kernel_at_unit_root() {
        let mu = 0.4;
        let g = g0_kernel(1.0, c(-mu - 1.0, 0.0), mu).unwrap();
        assert_relative_eq!(g.re, -(-1.0f64).exp() / (4.0 * PI), max_relative = 1e-15);
        assert_eq!(g.im, 0.0);
        assert_eq!(
            g0_kernel(-2.0, c(0.0, 1.0), mu).unwrap(),
            g0_kernel(2.0, c(0.0, 1.0), mu).unwrap()
        );
    }

    #[test]
    fn kernel_rejects_origin_and_cut() {
        assert!(matches!(
            g0_kernel(0.0, c(-3.0, 0.0), 1.0),
            Err(Error::Singular(_))
        ));
        assert!(matches!(
            g0_kernel(1.0, c(0.5, 0.0), 1.0),
            Err(Error::Branch(_))
        ));
        assert!(g0_kernel(1.0, c(0.5, 1e-9), 1.0).is_ok());
    }

    #[test]
    fn weighted_norm_closed_form() {
        let mu = 1.0;
        assert_relative_eq!(
            g0_weighted_l1(0.0, c(-mu - 1.0, 0.0), mu).unwrap(),
            1.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            g0_weighted_l1(2.0, c(-mu - 1.0, 0.0), mu).unwrap(),
            6.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            g0_weighted_l1(1.0, c(-mu - 4.0, 0.0), mu).unwrap(),
            0.25,
            max_relative = 1e-14
        );
        assert!(g0_weighted_l1(-2.0, c(-3.0, 0.0), mu).is_err());
        assert!(matches!(
            g0_weighted_l1(0.0, c(-0.5, 0.0), mu),
            Err(Error::Branch(_))
        ));
    }

    #[test]
    fn weighted_norm_quadrature_agrees() {
        for (a, z) in [
            (0.0, c(-2.0, 0.0)),
            (3.0, c(0.3, 0.8)),
            (-1.5, c(-1.0, 2.0)),
            (-1.9, c(-4.0, 0.0)),
        ] {
            let exact = g0_weighted_l1(a, z, 1.0).unwrap();
            let quad = g0_weighted_l1_quadrature(a, z, 1.0).unwrap();
            assert_relative_eq!(quad, exact, max_relative = 1e-10);
        }
    }

    #[test]
    fn decay_function_values() {
        assert_eq!(f_decay(0.0, 1.0, 1.0).unwrap(), 2.0);
        assert_eq!(f_decay(-2.0, 1.0, 1.0).unwrap(), 0.5);
        assert_eq!(f_decay(-1.0, 2.0, 1.0).unwrap(), 0.5);
        assert!(f_decay(1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn decay_ratio_stays_bounded() {
        for a in [0.0, 1.0, 2.0] {
            let mut worst: f64 = 0.0;
            for &t in &[-50.0, -5.0, -1.5, -0.5, 0.0, 2.0, 30.0] {
                for &w in &[1e-3, 0.1, 1.0, 10.0, 1e3] {
                    worst = worst.max(g0_decay_ratio(a, t, w, 1.0).unwrap());
                }
            }
            assert!(worst.is_finite() && worst < 1e3, "a = {a}: {worst}");
        }
    }
}
