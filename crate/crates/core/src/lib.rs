//! Numerical laboratory for de Branges spaces given by spectral data `(T, μ)`.
//!
//! The space consists of `F(z) = A(z)·Σ a_n μ_n^{1/2}/(z − t_n)` with
//! `A(z) = Π(1 − z/t_n)` and norm `‖F‖ = π‖a‖₂`.

pub mod classifier;
pub mod defect;
pub mod evaluator;
pub mod fock;
pub mod forge;
pub mod numeric;
pub mod spectral;

pub use spectral::{SpectralData, TailModel};
