//! Ginzburg–Landau minimization on the magnetic unit cell.
//!
//! The field is along `e₃` and the order parameter is taken constant in `X₃`,
//! so the problem lives on a square cross-section of side `√(2π/B)`. The
//! charge-2 potential `2A` enters through Peierls phases; the cell carries two
//! flux quanta of the effective field `2B`, and the lowest eigenvalue of the
//! continuum operator is `2B`.
//!
//! ```
//! use bcsgl::glmin::MagneticCell;
//!
//! let cell = MagneticCell::new(1.0, 32).unwrap();
//! let levels = cell.levels().unwrap();
//! assert!((levels.lowest - 2.0).abs() < 0.05);
//! assert_eq!(levels.degeneracy, 2);
//! ```

pub mod cell;
pub mod energy;
pub mod minimize;
pub mod ring;
pub mod spectrum;

pub use cell::{MagneticCell, MagneticTranslation};
pub use energy::{gl_energy, mean_norm, GlFunctional, OrderParameterField};
pub use minimize::{
    egl_curve, fit_exponent, initial_field, lowest_mode, minimize_gl, one_mode_amplitude2,
    scaling_check, EglPoint, GLResult, Init, MinimizerConfig, ScalingReport, SCALING_TOL,
};
pub use spectrum::{conjugate_gradient, landau_levels, lowest_landau_eigenvalue, LandauLevels};

#[cfg(test)]
mod tests;
