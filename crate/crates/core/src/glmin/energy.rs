use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::glcoeff::GLCoefficients;
use crate::glmin::cell::MagneticCell;

/// Samples `Ψ(X)` on the cell grid, row `i` along `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderParameterField {
    pub n: usize,
    pub values: Vec<Complex64>,
}

impl OrderParameterField {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            values: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn new(n: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::InvalidParameter {
                name: "psi",
                reason: format!("expected {} samples, got {}", n * n, values.len()),
            });
        }
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidParameter {
                name: "psi",
                reason: "non-finite sample".into(),
            });
        }
        Ok(Self { n, values })
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            values: self.values.iter().map(|z| z * s).collect(),
        }
    }

    /// Cell average of `|Ψ|^p`.
    pub fn mean_pow(&self, p: i32) -> f64 {
        self.values.iter().map(|z| z.norm().powi(p)).sum::<f64>() / self.values.len() as f64
    }
}

/// `E(Ψ) = B⁻² ⟨Λ₀ Ψ̄MΨ − DBΛ₂|Ψ|² + Λ₃|Ψ|⁴⟩` with `⟨·⟩` the cell average.
#[derive(Debug, Clone, Copy)]
pub struct GlFunctional<'a> {
    pub cell: &'a MagneticCell,
    pub d: f64,
    pub lambda0: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl<'a> GlFunctional<'a> {
    pub fn new(cell: &'a MagneticCell, d: f64, coeffs: &GLCoefficients) -> Result<Self> {
        for (name, v) in [
            ("Lambda0", coeffs.lambda0),
            ("Lambda2", coeffs.lambda2),
            ("Lambda3", coeffs.lambda3),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be positive, got {v}"),
                });
            }
        }
        if !d.is_finite() {
            return Err(Error::InvalidParameter {
                name: "D",
                reason: format!("must be finite, got {d}"),
            });
        }
        Ok(Self {
            cell,
            d,
            lambda0: coeffs.lambda0,
            lambda2: coeffs.lambda2,
            lambda3: coeffs.lambda3,
        })
    }

    fn check(&self, psi: &[Complex64]) {
        assert_eq!(
            psi.len(),
            self.cell.len(),
            "field does not match the cell grid"
        );
    }

    pub fn energy(&self, psi: &[Complex64]) -> f64 {
        self.check(psi);
        let m = self.cell.apply_vec(psi);
        self.energy_with(psi, &m)
    }

    fn energy_with(&self, psi: &[Complex64], m: &[Complex64]) -> f64 {
        let b = self.cell.b();
        let mut kin = 0.0;
        let mut quad = 0.0;
        let mut quart = 0.0;
        for (z, mz) in psi.iter().zip(m) {
            let a = z.norm_sqr();
            kin += (z.conj() * mz).re;
            quad += a;
            quart += a * a;
        }
        let len = psi.len() as f64;
        (self.lambda0 * kin - self.d * b * self.lambda2 * quad + self.lambda3 * quart)
            / (b * b * len)
    }

    /// Energy and the gradient `2B⁻²(Λ₀MΨ − DBΛ₂Ψ + 2Λ₃|Ψ|²Ψ)` with respect
    /// to the real inner product `Re⟨u, v⟩` of cell averages.
    pub fn energy_and_gradient(&self, psi: &[Complex64], grad: &mut [Complex64]) -> f64 {
        self.check(psi);
        self.cell.apply(psi, grad);
        let e = self.energy_with(psi, grad);
        let b = self.cell.b();
        let s = 2.0 / (b * b);
        let db = self.d * b * self.lambda2;
        for (g, z) in grad.iter_mut().zip(psi) {
            *g = (*g * self.lambda0 - z * db + z * (2.0 * self.lambda3 * z.norm_sqr())) * s;
        }
        e
    }

    /// Upper bound on the Hessian norm at fields with `max|Ψ|² ≤ amp2`.
    pub fn lipschitz(&self, amp2: f64) -> f64 {
        let b = self.cell.b();
        let h = self.cell.h();
        2.0 / (b * b)
            * (self.lambda0 * 8.0 / (h * h)
                + (self.d * b * self.lambda2).abs()
                + 6.0 * self.lambda3 * amp2)
    }
}

/// `E^GL_{D,B}(Ψ)` on the cell grid.
pub fn gl_energy(
    psi: &OrderParameterField,
    d: f64,
    coeffs: &GLCoefficients,
    cell: &MagneticCell,
) -> Result<f64> {
    if psi.n != cell.n() {
        return Err(Error::InvalidParameter {
            name: "psi",
            reason: format!("grid {} does not match cell grid {}", psi.n, cell.n()),
        });
    }
    Ok(GlFunctional::new(cell, d, coeffs)?.energy(&psi.values))
}

/// `√⟨|g|²⟩`
pub fn mean_norm(g: &[Complex64]) -> f64 {
    (g.iter().map(|z| z.norm_sqr()).sum::<f64>() / g.len() as f64).sqrt()
}
