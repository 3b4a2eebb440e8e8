//! The truncated symbol space, its operators and their composition law.

pub mod amplitude;
pub mod symbol;
pub mod xi_poly;

pub use amplitude::Amplitude;
pub use symbol::{FormalFunction, FormalSymbol};
pub use xi_poly::XiPolynomial;
