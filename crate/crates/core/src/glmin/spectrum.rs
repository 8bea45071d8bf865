use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::glmin::cell::MagneticCell;

const BLOCK: usize = 6;
const CONVERGED: usize = 4;
const RITZ_TOL: f64 = 1e-10;
const CG_TOL: f64 = 1e-13;
const MAX_OUTER: usize = 200;
const SEED: u64 = 0x6c6c6c;

/// Ritz values of the magnetic Laplacian at the bottom of its spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct LandauLevels {
    /// Ascending Ritz values.
    pub ritz: Vec<f64>,
    pub lowest: f64,
    /// Number of Ritz values within `1e−8` relative of `lowest`.
    pub degeneracy: usize,
    /// First Ritz value clearly above the lowest level.
    pub next: f64,
    pub outer_iterations: usize,
    /// Eigenvector for `lowest`, normalized to unit cell average of `|φ|²`.
    #[serde(skip)]
    pub ground_state: Vec<Complex64>,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Conjugate gradients for `M x = rhs`, starting from `x`.
pub fn conjugate_gradient(
    cell: &MagneticCell,
    rhs: &[Complex64],
    x: &mut [Complex64],
) -> Result<usize> {
    let len = rhs.len();
    let mut r: Vec<Complex64> = cell
        .apply_vec(x)
        .iter()
        .zip(rhs)
        .map(|(ax, b)| b - ax)
        .collect();
    let mut p = r.clone();
    let mut ap = vec![Complex64::new(0.0, 0.0); len];
    let target = CG_TOL * norm(rhs);
    let mut rr = dot(&r, &r).re;
    let max_iter = 20 * len.max(100);
    for it in 0..max_iter {
        if rr.sqrt() <= target {
            return Ok(it);
        }
        cell.apply(&p, &mut ap);
        let alpha = rr / dot(&p, &ap).re;
        for k in 0..len {
            x[k] += p[k] * alpha;
            r[k] -= ap[k] * alpha;
        }
        let rr_new = dot(&r, &r).re;
        let beta = rr_new / rr;
        rr = rr_new;
        for k in 0..len {
            p[k] = r[k] + p[k] * beta;
        }
    }
    Err(Error::NonConvergence {
        solver: "conjugate gradient",
        iterations: max_iter,
        residual: rr.sqrt() / norm(rhs),
    })
}

fn orthonormalize(vs: &mut [Vec<Complex64>]) {
    for _ in 0..2 {
        for a in 0..vs.len() {
            for b in 0..a {
                let c = dot(&vs[b], &vs[a]);
                let (head, tail) = vs.split_at_mut(a);
                for (x, y) in tail[0].iter_mut().zip(&head[b]) {
                    *x -= y * c;
                }
            }
            let s = 1.0 / norm(&vs[a]);
            for x in vs[a].iter_mut() {
                *x *= s;
            }
        }
    }
}

/// Block inverse iteration with Rayleigh–Ritz on `BLOCK` vectors.
pub fn landau_levels(cell: &MagneticCell) -> Result<LandauLevels> {
    let len = cell.len();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut basis: Vec<Vec<Complex64>> = (0..BLOCK)
        .map(|_| {
            (0..len)
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect()
        })
        .collect();
    orthonormalize(&mut basis);
    let mut theta = vec![1.0; BLOCK];
    for outer in 1..=MAX_OUTER {
        let mut next: Vec<Vec<Complex64>> = Vec::with_capacity(BLOCK);
        for (v, &t) in basis.iter().zip(&theta) {
            let mut x: Vec<Complex64> = v.iter().map(|z| z / t).collect();
            cell.solve(v, &mut x)?;
            next.push(x);
        }
        orthonormalize(&mut next);
        let applied: Vec<Vec<Complex64>> = next.iter().map(|v| cell.apply_vec(v)).collect();
        let h = DMatrix::from_fn(BLOCK, BLOCK, |a, b| dot(&next[a], &applied[b]));
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..BLOCK).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let mut residual: f64 = 0.0;
        basis = Vec::with_capacity(BLOCK);
        theta = Vec::with_capacity(BLOCK);
        for (rank, &c) in order.iter().enumerate() {
            let q = eig.eigenvectors.column(c);
            let mut v = vec![Complex64::new(0.0, 0.0); len];
            let mut mv = vec![Complex64::new(0.0, 0.0); len];
            for a in 0..BLOCK {
                for k in 0..len {
                    v[k] += next[a][k] * q[a];
                    mv[k] += applied[a][k] * q[a];
                }
            }
            let t = eig.eigenvalues[c];
            if rank < CONVERGED {
                let r: f64 = mv
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a - b * t).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                residual = residual.max(r / t.abs());
            }
            basis.push(v);
            theta.push(t);
        }
        if residual <= RITZ_TOL {
            let lowest = theta[0];
            let degeneracy = theta
                .iter()
                .take_while(|&&t| t - lowest <= 1e-8 * lowest)
                .count();
            let next = theta[degeneracy..].first().copied().unwrap_or(f64::NAN);
            let scale = (len as f64).sqrt();
            let ground_state = basis[0].iter().map(|z| z * scale).collect();
            return Ok(LandauLevels {
                ritz: theta,
                lowest,
                degeneracy,
                next,
                outer_iterations: outer,
                ground_state,
            });
        }
    }
    Err(Error::NonConvergence {
        solver: "block inverse iteration",
        iterations: MAX_OUTER,
        residual: f64::NAN,
    })
}

/// Lowest eigenvalue of the discrete magnetic Laplacian.
pub fn lowest_landau_eigenvalue(cell: &MagneticCell) -> Result<f64> {
    Ok(cell.levels()?.lowest)
}
