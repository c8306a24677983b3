//! Special functions and quadrature used by the coverage and rate formulas.
//!
//! Everything here is a pure function of its arguments.

mod gamma;
mod hyper;
mod incgamma;
mod quad;
mod rho;

pub use gamma::{gamma_fn, recip_gamma};
pub use hyper::gauss_2f1;
pub use incgamma::upper_incomplete_gamma;
pub use quad::{
    integrate, integrate_semi_infinite, try_integrate_semi_infinite, QuadratureSpec,
    SemiInfiniteError,
};
pub use rho::{rho, rho_hypergeometric, rho_with};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("gamma function has a pole at {0}")]
    GammaPole(f64),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("series did not converge within {terms} terms (last partial sum {partial})")]
    NonConvergence { terms: usize, partial: f64 },
    #[error("quadrature tolerance not reached: estimate {estimate}, error bound {error_bound}")]
    ToleranceNotReached { estimate: f64, error_bound: f64 },
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, NumericsError>;

/// True when `x` is 0, -1, -2, ...
pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}
