use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::grid::RadialGrid;
use crate::model::radial::{sinc, RadialFunction, RadialMomentumFunction};
use crate::model::Potential;
use crate::symbols::kernels::{kt_inverse, kt_inverse_dt, kt_symbol};

const POWER_TOL: f64 = 1e-13;
const POWER_MAX_ITER: usize = 2000;

/// Discretization knobs for the gap problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapConfig {
    /// Gauss–Legendre nodes per panel, both grids.
    pub order: usize,
    /// Radial panel width in units of the potential's length scale.
    pub r_panel_factor: f64,
    /// Momentum panel width in units of the inverse length scale.
    pub p_panel_factor: f64,
    /// Momentum cutoff is `√μ₊ + p_cutoff_factor / a`.
    pub p_cutoff_factor: f64,
    /// Temperature bracket for the root search; the momentum grid resolves
    /// the Fermi surface down to `t_lo`.
    pub t_lo: f64,
    /// Upper end of the bracket; `None` uses `max V / 2`, where `η ≤ 1`.
    pub t_hi: Option<f64>,
    /// Smallest acceptable spectral gap above the ground state.
    pub kappa_tol: f64,
}

impl Default for GapConfig {
    fn default() -> Self {
        Self {
            order: 16,
            r_panel_factor: 0.5,
            p_panel_factor: 0.5,
            p_cutoff_factor: 10.0,
            t_lo: 5e-3,
            t_hi: None,
            kappa_tol: 1e-8,
        }
    }
}

/// Composite momentum grid on `[0, p_max]` with geometrically graded panels
/// around the Fermi momentum `√μ` (or around `0` when `μ ≤ 0`), fine enough
/// to resolve `K_T` for every `T ≥ t_floor`.
pub fn momentum_grid(
    mu: f64,
    t_floor: f64,
    p_max: f64,
    max_width: f64,
    order: usize,
) -> Result<RadialGrid> {
    if !(t_floor > 0.0 && p_max > 0.0 && max_width > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "momentum grid needs positive t_floor, p_max, width (got {t_floor}, {p_max}, {max_width})"
        )));
    }
    let mut mandatory = vec![0.0, p_max];
    let (center, mut delta) = if mu > 0.0 {
        let pf = mu.sqrt();
        (pf, 0.25 * t_floor / pf)
    } else {
        (0.0, 0.5 * t_floor.sqrt())
    };
    while delta < max_width {
        for x in [center - delta, center + delta] {
            if x > 0.0 && x < p_max {
                mandatory.push(x);
            }
        }
        delta *= 2.0;
    }
    if center > 0.0 && center < p_max {
        mandatory.push(center);
    }
    RadialGrid::with_max_width(&mandatory, max_width, order)
}

/// Radial potential and the two quadrature grids on which `K_T − V` is
/// discretized.
///
/// With `j_ik = j₀(p_k r_i)` the factor matrix is
/// `C_ik = r_i √w_i V(r_i)^{1/2} j_ik p_k √(2u_k/π)`, so that the
/// Birman–Schwinger matrix is `C diag(K_T⁻¹) Cᵀ` and `K_T − V` in the
/// normalized momentum basis is `diag(K_T) − CᵀC`.
#[derive(Debug, Clone)]
pub struct GapProblem {
    pub mu: f64,
    pub length_scale: f64,
    pub config: GapConfig,
    source: Option<Potential>,
    v: RadialFunction,
    pgrid: RadialGrid,
    j0: DMatrix<f64>,
    c: DMatrix<f64>,
    /// `CᵀC`, shared by the gap operator and the momentum-space eigensolve.
    ctc: DMatrix<f64>,
}

impl GapProblem {
    pub fn new(potential: &Potential, mu: f64, config: GapConfig) -> Result<Self> {
        let v = potential.sample(config.r_panel_factor, config.order)?;
        let mut problem = Self::from_sampled(v, mu, potential.length_scale(), config)?;
        problem.source = Some(potential.clone());
        Ok(problem)
    }

    /// Builds the problem from samples of `V` on an arbitrary radial grid.
    pub fn from_sampled(
        v: RadialFunction,
        mu: f64,
        length_scale: f64,
        config: GapConfig,
    ) -> Result<Self> {
        if v.values().iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::InvalidParameter {
                name: "V",
                reason: "potential must be nonnegative".into(),
            });
        }
        if !(length_scale > 0.0) {
            return Err(Error::InvalidParameter {
                name: "length_scale",
                reason: format!("must be positive, got {length_scale}"),
            });
        }
        let p_max = mu.max(0.0).sqrt() + config.p_cutoff_factor / length_scale;
        let pgrid = momentum_grid(
            mu,
            config.t_lo,
            p_max,
            config.p_panel_factor / length_scale,
            config.order,
        )?;
        Ok(Self::assemble(v, None, pgrid, mu, length_scale, config))
    }

    fn assemble(
        v: RadialFunction,
        source: Option<Potential>,
        pgrid: RadialGrid,
        mu: f64,
        length_scale: f64,
        config: GapConfig,
    ) -> Self {
        let (nr, np) = (v.len(), pgrid.len());
        let j0 = DMatrix::from_fn(nr, np, |i, k| sinc(pgrid.nodes()[k] * v.nodes()[i]));
        let row: Vec<f64> = (0..nr)
            .map(|i| v.nodes()[i] * v.weights()[i].sqrt() * v.values()[i].sqrt())
            .collect();
        let col: Vec<f64> = (0..np)
            .map(|k| pgrid.nodes()[k] * (2.0 * pgrid.weights()[k] / PI).sqrt())
            .collect();
        let c = DMatrix::from_fn(nr, np, |i, k| row[i] * j0[(i, k)] * col[k]);
        let ctc = c.tr_mul(&c);
        Self {
            mu,
            length_scale,
            config,
            source,
            v,
            pgrid,
            j0,
            c,
            ctc,
        }
    }

    /// Same problem with every panel of both grids split in half.
    ///
    /// Problems built from raw samples keep their radial grid, since `V`
    /// cannot be re-evaluated.
    pub fn refined(&self) -> Self {
        let v = match &self.source {
            Some(p) => RadialFunction::from_fn(self.v.grid().refined(), |r| p.eval(r)),
            None => self.v.clone(),
        };
        Self::assemble(
            v,
            self.source.clone(),
            self.pgrid.refined(),
            self.mu,
            self.length_scale,
            self.config,
        )
    }

    pub fn source(&self) -> Option<&Potential> {
        self.source.as_ref()
    }

    pub fn potential(&self) -> &RadialFunction {
        &self.v
    }

    pub fn rgrid(&self) -> &RadialGrid {
        self.v.grid()
    }

    pub fn pgrid(&self) -> &RadialGrid {
        &self.pgrid
    }

    /// `K_T(p_k² − μ)` on the momentum grid.
    pub fn kt_diag(&self, t: f64) -> DVector<f64> {
        DVector::from_iterator(
            self.pgrid.len(),
            self.pgrid
                .nodes()
                .iter()
                .map(|&p| kt_symbol(p * p - self.mu, t)),
        )
    }

    pub fn kt_inverse_diag(&self, t: f64) -> DVector<f64> {
        DVector::from_iterator(
            self.pgrid.len(),
            self.pgrid
                .nodes()
                .iter()
                .map(|&p| kt_inverse(p * p - self.mu, t)),
        )
    }

    pub fn birman_schwinger(&self, t: f64) -> BirmanSchwingerOperator {
        let d = self.kt_inverse_diag(t);
        let mut x = self.c.clone();
        for (k, mut col) in x.column_iter_mut().enumerate() {
            col *= d[k].sqrt();
        }
        let mut m = &x * x.transpose();
        let n = m.nrows();
        for i in 0..n {
            for j in 0..i {
                let s = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = s;
                m[(j, i)] = s;
            }
        }
        BirmanSchwingerOperator { t, matrix: m }
    }

    /// Top Birman–Schwinger eigenpair by a dense solve on the smaller side.
    ///
    /// `C D Cᵀ` and `D^{1/2} CᵀC D^{1/2}` share their nonzero spectrum, and
    /// `φ = C D^{1/2} ψ / √η` maps a momentum-space eigenvector back.
    pub fn top_eigenpair_dense(&self, t: f64) -> Result<(f64, DVector<f64>)> {
        let (nr, np) = self.c.shape();
        if nr <= np {
            return self.birman_schwinger(t).top_eigenpair();
        }
        let s = self.kt_inverse_diag(t).map(f64::sqrt);
        let m = DMatrix::from_fn(np, np, |k, l| {
            let (a, b) = if k >= l { (k, l) } else { (l, k) };
            s[k] * self.ctc[(a, b)] * s[l]
        });
        let (eta, psi) = BirmanSchwingerOperator { t, matrix: m }.top_eigenpair()?;
        if !(eta > 0.0) {
            return Err(Error::DivisionGuard("Birman-Schwinger top eigenvalue"));
        }
        let mut phi = &self.c * psi.component_mul(&s);
        let n = phi.norm();
        if n == 0.0 {
            return Err(Error::DivisionGuard("C D^{1/2} psi"));
        }
        phi /= n;
        Ok((eta, phi))
    }

    /// `x ↦ C diag(K_T⁻¹) Cᵀ x` without forming the matrix.
    pub fn apply_birman_schwinger(&self, d: &DVector<f64>, x: &DVector<f64>) -> DVector<f64> {
        let mut y = self.c.tr_mul(x);
        y.component_mul_assign(d);
        &self.c * y
    }

    /// Power iteration for the top Birman–Schwinger eigenpair, started from
    /// `guess`. Returns `None` if the residual does not reach
    /// `POWER_TOL · η` within `POWER_MAX_ITER` steps.
    pub fn top_eigenpair_power(&self, t: f64, guess: &DVector<f64>) -> Option<(f64, DVector<f64>)> {
        let d = self.kt_inverse_diag(t);
        let mut x = guess.normalize();
        for _ in 0..POWER_MAX_ITER {
            let y = self.apply_birman_schwinger(&d, &x);
            let eta = x.dot(&y);
            let resid = (&y - eta * &x).norm();
            if eta > 0.0 && resid <= POWER_TOL * eta {
                return Some((eta, x));
            }
            let n = y.norm();
            if n == 0.0 {
                return None;
            }
            x = y / n;
        }
        None
    }

    /// `dη/dT` at a unit top eigenvector `phi` (Hellmann–Feynman).
    pub fn eta_derivative(&self, t: f64, phi: &DVector<f64>) -> f64 {
        let ct_phi = self.c.tr_mul(phi);
        self.pgrid
            .nodes()
            .iter()
            .zip(ct_phi.iter())
            .map(|(&p, &y)| y * y * kt_inverse_dt(p * p - self.mu, t))
            .sum()
    }

    /// Discretized `K_T − V` in the normalized momentum basis
    /// `v_k = √(u_k / 2π²) p_k α̂(p_k)`.
    pub fn gap_operator(&self, t: f64) -> DMatrix<f64> {
        let mut h = -self.ctc.clone();
        let k = self.kt_diag(t);
        for i in 0..h.nrows() {
            h[(i, i)] += k[i];
        }
        h
    }

    /// `α̂` on the momentum grid from a top eigenvector of the
    /// Birman–Schwinger matrix, normalized so that `‖α‖₂ = 1`.
    pub(crate) fn alpha_hat_from_eigenvector(
        &self,
        t: f64,
        phi: &DVector<f64>,
    ) -> Result<RadialMomentumFunction> {
        let mut v = self.c.tr_mul(phi);
        let d = self.kt_inverse_diag(t);
        v.component_mul_assign(&d);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::DivisionGuard("K_T^{-1} C^T phi"));
        }
        v /= norm;
        let values = self
            .pgrid
            .nodes()
            .iter()
            .zip(self.pgrid.weights())
            .zip(v.iter())
            .map(|((&p, &u), &vk)| vk / ((u / (2.0 * PI * PI)).sqrt() * p))
            .collect();
        RadialMomentumFunction::new(self.pgrid.clone(), values)
    }

    /// `α(r_i)` from `α̂` on the momentum grid, by the discrete inverse transform.
    pub fn alpha_on_rgrid(&self, alpha_hat: &[f64]) -> Vec<f64> {
        let weighted: DVector<f64> = DVector::from_iterator(
            self.pgrid.len(),
            self.pgrid
                .nodes()
                .iter()
                .zip(self.pgrid.weights())
                .zip(alpha_hat)
                .map(|((&p, &u), &a)| u * p * p * a / (2.0 * PI * PI)),
        );
        (&self.j0 * weighted).iter().copied().collect()
    }

    /// Forward transform of samples on the radial grid onto the momentum grid.
    pub fn transform_rgrid(&self, f: &[f64]) -> Vec<f64> {
        let rg = self.rgrid();
        let weighted: DVector<f64> = DVector::from_iterator(
            rg.len(),
            rg.nodes()
                .iter()
                .zip(rg.weights())
                .zip(f)
                .map(|((&r, &w), &x)| 4.0 * PI * w * r * r * x),
        );
        self.j0.tr_mul(&weighted).iter().copied().collect()
    }
}

/// `V^{1/2} K_T⁻¹ V^{1/2}` restricted to radial functions, in the
/// symmetric Nyström form `(√w_i r_i) V_i^{1/2} G_T(r_i, r_j) V_j^{1/2} (r_j √w_j)`.
#[derive(Debug, Clone)]
pub struct BirmanSchwingerOperator {
    pub t: f64,
    pub matrix: DMatrix<f64>,
}

impl BirmanSchwingerOperator {
    /// `max |M − Mᵀ| / max |M|`.
    pub fn symmetry_error(&self) -> f64 {
        let scale = self.matrix.amax();
        if scale == 0.0 {
            return 0.0;
        }
        (&self.matrix - self.matrix.transpose()).amax() / scale
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Largest eigenvalue and its unit eigenvector.
    pub fn top_eigenpair(&self) -> Result<(f64, DVector<f64>)> {
        if self.matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonConvergence {
                solver: "symmetric eigensolver",
                iterations: 0,
                residual: f64::NAN,
            });
        }
        let eig = SymmetricEigen::try_new(self.matrix.clone(), f64::EPSILON, 10_000).ok_or(
            Error::NonConvergence {
                solver: "symmetric eigensolver",
                iterations: 10_000,
                residual: f64::NAN,
            },
        )?;
        let (idx, &eta) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty operator");
        Ok((eta, eig.eigenvectors.column(idx).into_owned()))
    }
}
