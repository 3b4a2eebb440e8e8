//! The cochain complex of formal G-amplitudes: differential, graded star
//! product, Maurer–Cartan elements and the checks built on them.

pub mod checks;
pub mod cochain;

pub use checks::{
    additive_cocycle_check, coboundary_intertwiner_check, conjugate_by_unit, constant_cochain,
    cup_star, differential_d, gauge_relation_check, mc_residual, representation_check,
    twisted_differential, twisted_differential_checked, xi_free_cochain,
    xi_multiplicative_cocycle_check, CocycleReport, GaugeReport, IntertwinerReport, MCElement,
    RepresentationReport, Witness,
};
pub use cochain::{first_nonzero, Cochain};
