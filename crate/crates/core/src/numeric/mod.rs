//! Low-level numerical building blocks shared by the evaluator and the forge.

pub mod logval;
pub mod quad;
pub mod sum;

pub use logval::{LogComplex, SignedLog};
pub use sum::{CompensatedSum, ComplexSum};
