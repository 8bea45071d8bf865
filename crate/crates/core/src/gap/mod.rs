//! Translation-invariant gap problem.
//!
//! `T_c` is the temperature at which the largest eigenvalue `η(T)` of the
//! Birman–Schwinger operator `V^{1/2} K_T⁻¹ V^{1/2}` equals one; the
//! corresponding zero mode of `K_{T_c} − V` is the pair wave function `α*`.
//! Everything is restricted to radial functions. `V` lives on a composite
//! Gauss–Legendre grid in `r`, `K_T` on one in `p`, and the two are coupled
//! by the quadrature of the radial Fourier transform.

pub mod kernel;
pub mod moments;
pub mod problem;
pub mod solve;

pub use kernel::swave_kt_inverse_kernel;
pub use moments::{moment_check, MomentEntry, MomentReport};
pub use problem::{momentum_grid, BirmanSchwingerOperator, GapConfig, GapProblem};
pub use solve::{
    bs_top_eigenpair, critical_temperature, gap_residual_hat, spectral_gap, GapSolution,
    GapSummary, SpectralGap,
};
