use std::f64::consts::PI;
use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::model::grid::RadialGrid;
use crate::sum::CompensatedSum;

/// Relative size of the last panel's contribution above which a truncated
/// radial integral is rejected.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// Marker for position-space radial profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {}

/// Marker for momentum-space radial profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Momentum {}

/// A radial profile sampled at the nodes of a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Radial<S> {
    grid: RadialGrid,
    values: Vec<f64>,
    _space: PhantomData<S>,
}

/// `f(|x|)` sampled in position space.
pub type RadialFunction = Radial<Position>;
/// `f̂(|p|)` sampled in momentum space.
pub type RadialMomentumFunction = Radial<Momentum>;

impl<S> Radial<S> {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            _space: PhantomData,
        })
    }

    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self {
            grid,
            values,
            _space: PhantomData,
        }
    }

    pub fn zeros(grid: RadialGrid) -> Self {
        Self::from_fn(grid, |_| 0.0)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        self.grid.weights()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise map on the same grid.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = self
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(&r, &v)| f(r, v))
            .collect();
        Self {
            grid: self.grid.clone(),
            values,
            _space: PhantomData,
        }
    }

    /// Pointwise combination of two profiles on the same grid.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid(
                "profiles live on different grids".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self {
            grid: self.grid.clone(),
            values,
            _space: PhantomData,
        })
    }

    /// `4π ∫ k² f(k) g(k) dk` over the grid: the L² pairing of two radial
    /// functions in three dimensions, without the `(2π)^{-3}` of momentum space.
    pub fn radial_pairing(&self, other: &Self) -> f64 {
        let mut acc = CompensatedSum::new();
        for ((&r, &w), (&a, &b)) in self
            .nodes()
            .iter()
            .zip(self.weights())
            .zip(self.values.iter().zip(&other.values))
        {
            acc.add(w * r * r * a * b);
        }
        4.0 * PI * acc.value()
    }
}

impl RadialFunction {
    /// `‖f‖₂` over ℝ³.
    pub fn l2_norm(&self) -> f64 {
        self.radial_pairing(self).sqrt()
    }
}

impl RadialMomentumFunction {
    /// `‖f‖₂` of the position-space function whose transform this is,
    /// i.e. `((2π)^{-3} ∫ |f̂|² dp)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.radial_pairing(self) / (2.0 * PI).powi(3)).sqrt()
    }
}

/// Spherical Bessel function `j₀(x) = sin x / x`.
#[inline]
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Derivative `j₀'(x) = (x cos x − sin x)/x²`.
#[inline]
pub fn sinc_prime(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        -x / 3.0 + x * x2 / 30.0 - x * x2 * x2 / 840.0
    } else {
        (x * x.cos() - x.sin()) / (x * x)
    }
}

/// Fourier transform of a radial function at a single momentum,
/// `f̂(p) = 4π ∫ r² j₀(pr) f(r) dr`.
pub fn fourier_at(f: &RadialFunction, p: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for ((&r, &w), &v) in f.nodes().iter().zip(f.weights()).zip(f.values()) {
        acc.add(w * r * r * sinc(p * r) * v);
    }
    4.0 * PI * acc.value()
}

/// Radial Fourier transform `f̂(p) = ∫ e^{-ip·x} f(|x|) dx` sampled on `pgrid`.
///
/// The position-space integral is truncated at the end of `f`'s grid; if the
/// last panel carries more than [`TAIL_TOLERANCE`] of `∫ r² |f| dr` the
/// truncation is reported as an error.
pub fn radial_fourier(f: &RadialFunction, pgrid: &RadialGrid) -> Result<RadialMomentumFunction> {
    let moment: Vec<f64> = f
        .nodes()
        .iter()
        .zip(f.values())
        .map(|(&r, &v)| r * r * v)
        .collect();
    let tail = f.grid().tail_fraction(&moment);
    if tail > TAIL_TOLERANCE {
        return Err(Error::Truncation {
            context: "radial_fourier",
            tail,
            tol: TAIL_TOLERANCE,
        });
    }
    let values = pgrid.nodes().iter().map(|&p| fourier_at(f, p)).collect();
    RadialMomentumFunction::new(pgrid.clone(), values)
}

/// Inverse transform `f(r) = (2π²)^{-1} ∫ p² j₀(pr) f̂(p) dp` at a single radius.
pub fn inverse_fourier_at(fhat: &RadialMomentumFunction, r: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for ((&p, &w), &v) in fhat.nodes().iter().zip(fhat.weights()).zip(fhat.values()) {
        acc.add(w * p * p * sinc(p * r) * v);
    }
    acc.value() / (2.0 * PI * PI)
}

/// Derivative `f'(r)` obtained by differentiating the inverse transform.
pub fn inverse_fourier_derivative_at(fhat: &RadialMomentumFunction, r: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for ((&p, &w), &v) in fhat.nodes().iter().zip(fhat.weights()).zip(fhat.values()) {
        acc.add(w * p * p * p * sinc_prime(p * r) * v);
    }
    acc.value() / (2.0 * PI * PI)
}

pub fn inverse_radial_fourier(fhat: &RadialMomentumFunction, rgrid: &RadialGrid) -> RadialFunction {
    RadialFunction::from_fn(rgrid.clone(), |r| inverse_fourier_at(fhat, r))
}

/// Norm flavour for [`weighted_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    L1,
    L2,
}

/// `∫ |x|^a |f| dx` (L1) or `(∫ |x|^{2a} |f|² dx)^{1/2}` (L2) over ℝ³.
pub fn weighted_norm(f: &RadialFunction, a: u32, kind: NormKind) -> f64 {
    let mut acc = CompensatedSum::new();
    for ((&r, &w), &v) in f.nodes().iter().zip(f.weights()).zip(f.values()) {
        let term = match kind {
            NormKind::L1 => r.powi(a as i32 + 2) * v.abs(),
            NormKind::L2 => r.powi(2 * a as i32 + 2) * v * v,
        };
        acc.add(w * term);
    }
    let integral = 4.0 * PI * acc.value();
    match kind {
        NormKind::L1 => integral,
        NormKind::L2 => integral.sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gaussian() -> RadialFunction {
        let grid = RadialGrid::uniform(0.0, 9.0, 18, 16).unwrap();
        RadialFunction::from_fn(grid, |r| (-r * r).exp())
    }

    #[test]
    fn zero_transforms_to_zero() {
        let grid = RadialGrid::uniform(0.0, 5.0, 4, 8).unwrap();
        let f = RadialFunction::zeros(grid);
        let pgrid = RadialGrid::uniform(0.0, 10.0, 4, 8).unwrap();
        let fhat = radial_fourier(&f, &pgrid).unwrap();
        assert!(fhat.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gaussian_matches_closed_form() {
        let f = gaussian();
        let pgrid = RadialGrid::uniform(0.0, 12.0, 12, 16).unwrap();
        let fhat = radial_fourier(&f, &pgrid).unwrap();
        for (&p, &v) in fhat.nodes().iter().zip(fhat.values()) {
            let exact = PI.powf(1.5) * (-p * p / 4.0).exp();
            assert!((v - exact).abs() < 1e-13, "p = {p}: {v} vs {exact}");
        }
        assert_relative_eq!(fourier_at(&f, 0.0), PI.powf(1.5), max_relative = 1e-14);
    }

    #[test]
    fn truncated_tail_is_reported() {
        let grid = RadialGrid::uniform(0.0, 3.0, 6, 8).unwrap();
        let f = RadialFunction::from_fn(grid, |r| (-r).exp());
        let pgrid = RadialGrid::uniform(0.0, 1.0, 1, 4).unwrap();
        assert!(matches!(
            radial_fourier(&f, &pgrid),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn round_trip_recovers_gaussian() {
        let f = gaussian();
        let pgrid = RadialGrid::uniform(0.0, 14.0, 14, 16).unwrap();
        let fhat = radial_fourier(&f, &pgrid).unwrap();
        for r in [0.0, 0.3, 1.0, 2.5] {
            assert!((inverse_fourier_at(&fhat, r) - (-r * r).exp()).abs() < 1e-12);
            let d = inverse_fourier_derivative_at(&fhat, r);
            assert!((d + 2.0 * r * (-r * r).exp()).abs() < 1e-11);
        }
    }

    #[test]
    fn exponential_weighted_norms() {
        let grid = RadialGrid::uniform(0.0, 80.0, 80, 16).unwrap();
        let f = RadialFunction::from_fn(grid, |r| (-r).exp());
        assert_relative_eq!(
            weighted_norm(&f, 0, NormKind::L1),
            8.0 * PI,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            weighted_norm(&f, 2, NormKind::L1),
            96.0 * PI,
            max_relative = 1e-12
        );
        // ∫ 4π r² e^{-2r} dr = π
        assert_relative_eq!(
            weighted_norm(&f, 0, NormKind::L2),
            PI.sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn sinc_branches_agree() {
        for x in [9e-5f64, 1.1e-4, 9e-4, 1.1e-3] {
            assert_relative_eq!(sinc(x), x.sin() / x, max_relative = 1e-15);
        }
        let x = 1.5e-3f64;
        assert_relative_eq!(
            sinc_prime(x),
            (x * x.cos() - x.sin()) / (x * x),
            max_relative = 1e-6
        );
        assert_relative_eq!(sinc_prime(9.9e-4), -9.9e-4 / 3.0, max_relative = 1e-6);
    }
}
