//! Analytic objects attached to spectral data: the canonical product `A`, the
//! Herglotz ratio `B/A`, the phase, reproducing kernels, Clark data and real
//! roots of Cauchy transforms.

mod cauchy;
mod clark;
mod kernel;
mod phase;
mod point;
mod product;
mod roots;

pub use cauchy::{b_at_node, b_over_a, cauchy_derivative_real, cauchy_real, cauchy_transform, SpaceElement};
pub use clark::{clark_data, exceptional_alpha, ClarkData};
pub use kernel::{inner_product, kernel_coeffs, kernel_eval, kernel_value, norm};
pub use phase::{m_at_infinity, m_real, phase, phase_derivative, theta_prime_on_r};
pub use point::RealPoint;
pub use product::{a_prime_at_node, log_a, log_a_real, log_a_unchecked};
pub use roots::{count_sign_changes, find_real_roots};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("EvaluationAtNode: point coincides with node {index}")]
    EvaluationAtNode { index: usize },
    #[error("PhaseBracketFailure: cannot bracket phase level {target}")]
    PhaseBracketFailure { target: f64 },
    #[error("NoSignChange: no sign change of the Cauchy transform on ({lo}, {hi})")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("IndexOutOfRange: {index} not below {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("LengthMismatch: {got} coefficients for {len} nodes")]
    LengthMismatch { got: usize, len: usize },
}

/// CoefficientVector in the orthogonal kernel basis; the norm is `π·‖a‖₂`.
pub type CoefficientVector = Vec<num_complex::Complex64>;

/// Real coefficients widened to complex.
pub fn complexify(a: &[f64]) -> CoefficientVector {
    a.iter().map(|&x| num_complex::Complex64::new(x, 0.0)).collect()
}
