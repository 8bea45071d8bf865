//! Numerical core of the BCS to Ginzburg–Landau reduction for radial pair
//! potentials.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod gap;
pub mod glcoeff;
pub mod glmin;
pub mod model;
pub mod sum;
pub mod symbols;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/symbols.md")]
    mod symbols {}
    #[doc = include_str!("../../../book/src/gap.md")]
    mod gap {}
    #[doc = include_str!("../../../book/src/coefficients.md")]
    mod coefficients {}
    #[doc = include_str!("../../../book/src/magnetic-cell.md")]
    mod magnetic_cell {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
