//! Exact algebra of formal G-amplitudes over finite groups acting by affine
//! maps on `Rᵈ`: truncated symbols, their star composition, the cochain
//! complex with its Maurer–Cartan equation, and a linear-algebra solver for
//! order-by-order extension and rigidity.

pub mod amplitude_dga;
pub mod error;
pub mod formal_symbols;
pub mod function_algebra;
pub mod group_model;
pub mod mc_solver;

#[cfg(any(test, feature = "testing"))]
pub mod testing;

pub use error::{AlgebraError, Result};
