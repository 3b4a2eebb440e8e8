//! Windows of the level-`n` twisted complex, exact ranks, and the
//! order-by-order Maurer–Cartan and gauge solvers.

pub mod cohomology;
pub mod linalg;
pub mod oracle;
pub mod solver;
pub mod split;
pub mod window;

pub use cohomology::{cohomology_report, CohomologyReport};
pub use linalg::{ExactMatrix, LinearObstruction};
pub use oracle::{
    averaging_homotopy_oracle, closed_form_twisted_differential, h0_character_formula,
    h0_fixed_points, OracleOutcome,
};
pub use solver::{
    mc_extend, mc_extend_with, mc_rhs, rigidity_gauge, rigidity_gauge_with, solve_in_window,
    solve_order, solve_order_with, DifferentialProvider, Extension, Gauge,
    ObstructionCertificate, SolveError, SolvedStep, TwistedDifferential,
};
pub use split::{group_coboundary, trivial_action_split_check, SplitReport};
pub use window::{degree_growth, matrix_of_twisted_d, CochainVector, GradedBasis, LinearMap, Window};
