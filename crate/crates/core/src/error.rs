use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("truncation error: tail estimate {tail:.3e} exceeds tolerance {tol:.3e} ({context})")]
    Truncation {
        context: &'static str,
        tail: f64,
        tol: f64,
    },

    #[error("singular evaluation: {0}")]
    Singular(&'static str),

    #[error("divergent quantity: {0}")]
    Divergence(&'static str),

    #[error("branch violation: {0}")]
    Branch(String),

    #[error("{solver} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("bracket does not straddle eta = 1: eta(T_lo) = {eta_lo}, eta(T_hi) = {eta_hi}")]
    NoRoot { eta_lo: f64, eta_hi: f64 },

    #[error("division guard: {0} is zero")]
    DivisionGuard(&'static str),

    #[error("contour quadrature failed: {0}")]
    Contour(String),

    #[error("decay violation: {0}")]
    Decay(String),

    #[error("nondegeneracy violated: spectral gap {kappa:.3e} below {tol:.3e}")]
    Degenerate { kappa: f64, tol: f64 },

    #[error("prerequisite failed: {0}")]
    Dependency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
