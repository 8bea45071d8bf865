use serde::Serialize;

/// Identity groups, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Symbols,
    Gap,
    Coefficients,
    Minimizer,
}

impl Group {
    pub const ALL: [Group; 4] = [
        Group::Symbols,
        Group::Gap,
        Group::Coefficients,
        Group::Minimizer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::Symbols => "symbols",
            Group::Gap => "gap",
            Group::Coefficients => "coefficients",
            Group::Minimizer => "minimizer",
        }
    }
}

impl std::str::FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Group::ALL
            .into_iter()
            .find(|g| g.name() == s.trim())
            .ok_or_else(|| {
                format!("unknown group `{s}` (expected symbols, gap, coefficients or minimizer)")
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub name: &'static str,
    pub group: Group,
    /// Which identity of the theory the check exercises.
    pub anchor: &'static str,
    pub tol: f64,
}

const fn t(name: &'static str, group: Group, anchor: &'static str, tol: f64) -> Tolerance {
    Tolerance {
        name,
        group,
        anchor,
        tol,
    }
}

use Group::*;

/// Every check of the suite with its tolerance. Sign conditions are encoded
/// as a nonnegative violation with tolerance 0.
pub const TOLERANCES: &[Tolerance] = &[
    t(
        "resolvent_l1_closed_form",
        Symbols,
        "weighted L1 norm of the free resolvent kernel",
        1e-6,
    ),
    t(
        "matsubara_cosh2",
        Symbols,
        "Matsubara sum of (iω − z)^-2",
        1e-8,
    ),
    t(
        "matsubara_g1",
        Symbols,
        "Matsubara sum of (ω² + E²)^-2 against g1",
        1e-8,
    ),
    t(
        "contour_kt",
        Symbols,
        "Cauchy representation of K_T along the speaker path",
        1e-6,
    ),
    t(
        "g1_g2_transcriptions",
        Symbols,
        "hyperbolic and exponential forms of g1, g2",
        1e-12,
    ),
    t(
        "eta_at_tc",
        Gap,
        "largest Birman–Schwinger eigenvalue equals one at Tc",
        1e-10,
    ),
    t("gap_residual", Gap, "K_Tc α* = V α*", 1e-8),
    t("alpha_norm", Gap, "‖α*‖₂ = 1", 1e-10),
    t(
        "spectral_gap_positive",
        Gap,
        "nondegenerate ground state of K_Tc − V",
        0.0,
    ),
    t(
        "tc_grid_doubling",
        Gap,
        "Tc stable under grid refinement",
        1e-5,
    ),
    t(
        "alpha_gradient_fd",
        Gap,
        "spectral gradient of α* against finite differences",
        1e-6,
    ),
    t(
        "lambda2_fd",
        Coefficients,
        "Λ2 as the T-derivative of the K_T^-1 integral",
        1e-5,
    ),
    t(
        "lambda0_hessian",
        Coefficients,
        "Λ0 from the angular-averaged q-Hessian of L_Tc",
        1e-4,
    ),
    t(
        "lambda0_cross_form",
        Coefficients,
        "Λ0 with exponential g1, g2",
        1e-8,
    ),
    t(
        "lambda3_matsubara",
        Coefficients,
        "Λ3 by direct quadrature and by Matsubara sum",
        1e-8,
    ),
    t(
        "dc_identity",
        Coefficients,
        "Dc Λ2 = 2 Λ0",
        4.0 * f64::EPSILON,
    ),
    t(
        "landau_lowest",
        Minimizer,
        "lowest eigenvalue of the charge-2 magnetic Laplacian is 2",
        1e-2,
    ),
    t(
        "landau_order",
        Minimizer,
        "second-order convergence of the lowest level",
        1e-1,
    ),
    t(
        "translation_commutator",
        Minimizer,
        "magnetic translations commute with the Laplacian",
        1e-12,
    ),
    t(
        "gl_gradient_fd",
        Minimizer,
        "analytic GL gradient against central differences",
        1e-6,
    ),
    t("gl_phase_invariance", Minimizer, "E(e^{iθ}Ψ) = E(Ψ)", 1e-12),
    t(
        "gl_threshold_below",
        Minimizer,
        "E^GL(D) = 0 for D ≤ Dc",
        1e-6,
    ),
    t(
        "gl_threshold_above",
        Minimizer,
        "E^GL(D) < 0 for D > Dc",
        0.0,
    ),
    t(
        "gl_descent",
        Minimizer,
        "minimizer energy does not exceed the initial energy",
        0.0,
    ),
    t(
        "gl_exponent",
        Minimizer,
        "E^GL(D) ∝ (D − Dc)² near threshold",
        1e-1,
    ),
    t(
        "gl_scaling",
        Minimizer,
        "E^GL independent of B after rescaling",
        1e-3,
    ),
];

pub fn tolerance(name: &str) -> &'static Tolerance {
    TOLERANCES
        .iter()
        .find(|t| t.name == name)
        .unwrap_or_else(|| panic!("no tolerance entry named {name}"))
}
