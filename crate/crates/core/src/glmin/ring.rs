//! Direct solver for the magnetic Laplacian in its native Landau gauge.
//!
//! A DFT along `y` maps `(i, k)` to the ring site `n = kN/2 + i` for each
//! parity of `k`, and `M` becomes two cyclic tridiagonal matrices of length
//! `N²/2` with diagonal `(4 − 2cos(4πn/N²))/h²` and off-diagonal `−1/h²`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Thomas factorization of a cyclic symmetric tridiagonal matrix with
/// constant off-diagonal, corners handled by Sherman–Morrison.
#[derive(Debug, Clone)]
struct CyclicTridiagonal {
    off: f64,
    gamma: f64,
    cprime: Vec<f64>,
    denom: Vec<f64>,
    z: Vec<f64>,
    factor: f64,
}

impl CyclicTridiagonal {
    fn new(diag: &[f64], off: f64) -> Self {
        let m = diag.len();
        let gamma = -diag[0];
        let mut b = diag.to_vec();
        b[0] -= gamma;
        b[m - 1] -= off * off / gamma;
        let mut cprime = vec![0.0; m];
        let mut denom = vec![0.0; m];
        denom[0] = b[0];
        cprime[0] = off / b[0];
        for k in 1..m {
            denom[k] = b[k] - off * cprime[k - 1];
            cprime[k] = off / denom[k];
        }
        let mut solver = Self {
            off,
            gamma,
            cprime,
            denom,
            z: Vec::new(),
            factor: 0.0,
        };
        let mut u = vec![0.0; m];
        u[0] = gamma;
        u[m - 1] = off;
        solver.z = solver.thomas_real(&u);
        solver.factor = 1.0 + solver.z[0] + off * solver.z[m - 1] / gamma;
        solver
    }

    fn thomas_real(&self, rhs: &[f64]) -> Vec<f64> {
        let m = rhs.len();
        let mut y = vec![0.0; m];
        y[0] = rhs[0] / self.denom[0];
        for k in 1..m {
            y[k] = (rhs[k] - self.off * y[k - 1]) / self.denom[k];
        }
        for k in (0..m - 1).rev() {
            y[k] -= self.cprime[k] * y[k + 1];
        }
        y
    }

    fn solve(&self, x: &mut [Complex64]) {
        let m = x.len();
        x[0] /= self.denom[0];
        for k in 1..m {
            x[k] = (x[k] - x[k - 1] * self.off) / self.denom[k];
        }
        for k in (0..m - 1).rev() {
            x[k] -= x[k + 1] * self.cprime[k];
        }
        let corr = (x[0] + x[m - 1] * (self.off / self.gamma)) / self.factor;
        for (xk, zk) in x.iter_mut().zip(&self.z) {
            *xk -= corr * zk;
        }
    }
}

/// Exact `(M + σ)⁻¹` for a cell built by `MagneticCell::new`.
#[derive(Clone)]
pub struct RingSolver {
    n: usize,
    rings: [CyclicTridiagonal; 2],
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for RingSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RingSolver").field("n", &self.n).finish()
    }
}

impl RingSolver {
    pub fn new(n: usize, h: f64, shift: f64) -> Self {
        let s = 1.0 / (h * h);
        let m = n * n / 2;
        let ring = |parity: usize| {
            let diag: Vec<f64> = (0..m)
                .map(|r| {
                    let site = (r + parity * n / 2) as f64;
                    (4.0 - 2.0 * (4.0 * PI * site / (n * n) as f64).cos()) * s + shift
                })
                .collect();
            CyclicTridiagonal::new(&diag, -s)
        };
        let mut planner = FftPlanner::new();
        Self {
            n,
            rings: [ring(0), ring(1)],
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// Ring position of `(i, k)` within its parity class.
    fn site(&self, i: usize, k: usize) -> usize {
        let n = self.n;
        (k / 2) * n + i
    }

    /// Overwrites `x` with `(M + σ)⁻¹ x`.
    pub fn solve(&self, x: &mut [Complex64]) {
        let n = self.n;
        for row in x.chunks_mut(n) {
            self.forward.process(row);
        }
        let m = n * n / 2;
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for parity in 0..2 {
            for i in 0..n {
                for k in (parity..n).step_by(2) {
                    buf[self.site(i, k)] = x[i * n + k];
                }
            }
            self.rings[parity].solve(&mut buf);
            for i in 0..n {
                for k in (parity..n).step_by(2) {
                    x[i * n + k] = buf[self.site(i, k)];
                }
            }
        }
        let scale = 1.0 / n as f64;
        for row in x.chunks_mut(n) {
            self.inverse.process(row);
            for z in row.iter_mut() {
                *z *= scale;
            }
        }
    }
}
