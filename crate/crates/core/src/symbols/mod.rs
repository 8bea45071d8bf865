//! Scalar symbols: the BCS kernel `K_T`, its two-momentum relative `L_T`,
//! the auxiliary functions `g₁`, `g₂`, Matsubara sums, the free resolvent
//! kernel and the contour representation of `K_T`.

pub mod contour;
pub mod kernels;
pub mod matsubara;
pub mod resolvent;

pub use contour::{
    kt_contour_eval, ray_tail_bound, speaker_path, ContourPath, Segment, SegmentKind,
};
pub use kernels::{
    g1, g1_exponential, g1_over_z, g2, g2_exponential, kt_inverse, kt_inverse_dt, kt_symbol,
    ln_cosh, lt_energies, lt_symbol, sech2,
};
pub use matsubara::{
    cosh2_matsubara_sum, g1_matsubara_sum, matsubara_frequency, trigamma, MatsubaraConfig,
    MatsubaraEstimate,
};
pub use resolvent::{
    f_decay, g0_decay_ratio, g0_kernel, g0_weighted_l1, g0_weighted_l1_quadrature, resolvent_root,
};
