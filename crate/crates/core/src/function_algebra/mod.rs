//! Coefficient functions (polynomials in `x` over `Q(i)`) and the affine
//! diffeomorphisms acting on them by pullback.

pub mod affine;
pub mod poly;
pub mod scalar;

pub use affine::{AffineDiffeo, Matrix};
pub use poly::{MultiIndex, PolyFunction, PowerTable};
pub use scalar::{GaussianInteger, GaussianRational};
