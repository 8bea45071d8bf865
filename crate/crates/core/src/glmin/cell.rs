use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::glmin::ring::RingSolver;
use crate::glmin::spectrum::{conjugate_gradient, landau_levels, LandauLevels};

/// Square cell of side `√(2π/B)` carrying two flux quanta of the field `2B`,
/// sampled on an `N × N` torus grid.
///
/// Link phases `U(X→Y) = exp(−i∫ 2A·dl)` are stored per lattice edge in a
/// Landau gauge; the hop in the stencil is `conj(U)`.
#[derive(Debug, Clone)]
pub struct MagneticCell {
    b: f64,
    side: f64,
    n: usize,
    link_x: Vec<Complex64>,
    link_y: Vec<Complex64>,
    /// Direct `M⁻¹` and `(M + 2B)⁻¹`, available only in the native gauge.
    ring: Option<RingSolver>,
    shifted: Option<RingSolver>,
    levels: OnceLock<LandauLevels>,
}

impl MagneticCell {
    pub fn new(b: f64, n: usize) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "B",
                reason: format!("must be positive and finite, got {b}"),
            });
        }
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "cell-n",
                reason: format!("must be even and at least 4, got {n}"),
            });
        }
        let side = (2.0 * PI / b).sqrt();
        // 2B·h² = 4π/N² whatever B is.
        let phi = 4.0 * PI / (n * n) as f64;
        let mut link_x = vec![Complex64::new(1.0, 0.0); n * n];
        let mut link_y = vec![Complex64::new(1.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                link_y[i * n + j] = Complex64::from_polar(1.0, -phi * i as f64);
            }
        }
        for j in 0..n {
            link_x[(n - 1) * n + j] = Complex64::from_polar(1.0, phi * (n * j) as f64);
        }
        Ok(Self {
            b,
            side,
            n,
            link_x,
            link_y,
            ring: Some(RingSolver::new(n, side / n as f64, 0.0)),
            shifted: Some(RingSolver::new(n, side / n as f64, 2.0 * b)),
            levels: OnceLock::new(),
        })
    }

    /// All link phases one on a square of the given side; `B` is reported as 0
    /// and only the stencil is meaningful.
    pub fn field_free(side: f64, n: usize) -> Result<Self> {
        if !(side > 0.0 && side.is_finite()) || n < 4 {
            return Err(Error::InvalidParameter {
                name: "side",
                reason: format!("need side > 0 and n >= 4, got {side}, {n}"),
            });
        }
        Ok(Self {
            b: 0.0,
            side,
            n,
            link_x: vec![Complex64::new(1.0, 0.0); n * n],
            link_y: vec![Complex64::new(1.0, 0.0); n * n],
            ring: None,
            shifted: None,
            levels: OnceLock::new(),
        })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.side / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        (i % self.n) * self.n + j % self.n
    }

    /// `U` on the edge `(i, j) → (i+1, j)`.
    pub fn link_x(&self, i: usize, j: usize) -> Complex64 {
        self.link_x[self.index(i, j)]
    }

    /// `U` on the edge `(i, j) → (i, j+1)`.
    pub fn link_y(&self, i: usize, j: usize) -> Complex64 {
        self.link_y[self.index(i, j)]
    }

    /// Counterclockwise product of link phases around the plaquette at `(i, j)`.
    pub fn plaquette(&self, i: usize, j: usize) -> Complex64 {
        self.link_x(i, j)
            * self.link_y(i + 1, j)
            * self.link_x(i, j + 1).conj()
            * self.link_y(i, j).conj()
    }

    /// Expected plaquette phase `exp(−i·2B·h²)`.
    pub fn flux_phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, -2.0 * self.b * self.h() * self.h())
    }

    /// Same field in the gauge `U(X→Y) ↦ e^{iχ(X)} U(X→Y) e^{−iχ(Y)}`.
    pub fn regauge(&self, chi: &[f64]) -> Result<Self> {
        if chi.len() != self.len() {
            return Err(Error::InvalidParameter {
                name: "chi",
                reason: format!("expected {} samples, got {}", self.len(), chi.len()),
            });
        }
        let n = self.n;
        let mut out = self.clone();
        out.levels = OnceLock::new();
        out.ring = None;
        out.shifted = None;
        for i in 0..n {
            for j in 0..n {
                let k = i * n + j;
                let e = |m: usize| Complex64::from_polar(1.0, chi[k] - chi[m]);
                out.link_x[k] = self.link_x[k] * e(self.index(i + 1, j));
                out.link_y[k] = self.link_y[k] * e(self.index(i, j + 1));
            }
        }
        Ok(out)
    }

    /// `out = M ψ` with `M` the 5-point Peierls stencil of `(−i∇ + 2A)²`.
    pub fn apply(&self, psi: &[Complex64], out: &mut [Complex64]) {
        let n = self.n;
        let s = 1.0 / (self.h() * self.h());
        for i in 0..n {
            let ip = (i + 1) % n;
            let im = (i + n - 1) % n;
            for j in 0..n {
                let jp = (j + 1) % n;
                let jm = (j + n - 1) % n;
                let k = i * n + j;
                let hop = self.link_x[k].conj() * psi[ip * n + j]
                    + self.link_x[im * n + j] * psi[im * n + j]
                    + self.link_y[k].conj() * psi[i * n + jp]
                    + self.link_y[i * n + jm] * psi[i * n + jm];
                out[k] = (psi[k] * 4.0 - hop) * s;
            }
        }
    }

    pub fn apply_vec(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        self.apply(psi, &mut out);
        out
    }

    /// `x ← M⁻¹ rhs`, with `x` as the starting guess when iterating.
    pub fn solve(&self, rhs: &[Complex64], x: &mut [Complex64]) -> Result<()> {
        match &self.ring {
            Some(ring) => {
                x.copy_from_slice(rhs);
                ring.solve(x);
            }
            None => {
                conjugate_gradient(self, rhs, x)?;
            }
        }
        Ok(())
    }

    pub fn has_direct_solver(&self) -> bool {
        self.shifted.is_some()
    }

    /// `x ← (M + 2B)⁻¹ x` when a direct solver exists; identity otherwise.
    pub fn precondition(&self, x: &mut [Complex64]) {
        if let Some(ring) = &self.shifted {
            ring.solve(x);
        }
    }

    /// Lowest levels of `M`, computed once per cell.
    pub fn levels(&self) -> Result<&LandauLevels> {
        if let Some(l) = self.levels.get() {
            return Ok(l);
        }
        let computed = landau_levels(self)?;
        Ok(self.levels.get_or_init(|| computed))
    }

    /// Magnetic translation by `(sx, sy)` sites, if one commutes with `M`.
    pub fn translation(&self, sx: usize, sy: usize) -> Option<MagneticTranslation> {
        let n = self.n;
        let hop_x = |i: usize, j: usize| self.link_x(i, j).conj();
        let hop_y = |i: usize, j: usize| self.link_y(i, j).conj();
        // G(Y) = G(X) · hop(X+τ → Y+τ) / hop(X → Y) along a spanning tree.
        let mut gauge = vec![Complex64::new(0.0, 0.0); n * n];
        gauge[0] = Complex64::new(1.0, 0.0);
        for j in 1..n {
            gauge[j] = gauge[j - 1] * hop_y(sx, j - 1 + sy) / hop_y(0, j - 1);
        }
        for i in 1..n {
            for j in 0..n {
                gauge[i * n + j] =
                    gauge[(i - 1) * n + j] * hop_x(i - 1 + sx, j + sy) / hop_x(i - 1, j);
            }
        }
        for i in 0..n {
            for j in 0..n {
                let g = gauge[i * n + j];
                let gx = gauge[self.index(i + 1, j)];
                let gy = gauge[self.index(i, j + 1)];
                let ex = g * hop_x(i + sx, j + sy) - hop_x(i, j) * gx;
                let ey = g * hop_y(i + sx, j + sy) - hop_y(i, j) * gy;
                if ex.norm() > 1e-12 || ey.norm() > 1e-12 {
                    return None;
                }
            }
        }
        Some(MagneticTranslation { sx, sy, gauge })
    }
}

/// `(Tψ)(X) = G(X) ψ(X + τ)`.
#[derive(Debug, Clone)]
pub struct MagneticTranslation {
    pub sx: usize,
    pub sy: usize,
    gauge: Vec<Complex64>,
}

impl MagneticTranslation {
    pub fn apply(&self, cell: &MagneticCell, psi: &[Complex64]) -> Vec<Complex64> {
        let n = cell.n();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let k = i * n + j;
                out[k] = self.gauge[k] * psi[cell.index(i + self.sx, j + self.sy)];
            }
        }
        out
    }
}
