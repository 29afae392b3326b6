//! Angles, deflating decompositions, separations, and a-priori error bounds
//! for Ritz values, Ritz vectors and refined Ritz vectors.

mod angles;
mod bounds;
mod deflation;
mod diagnostics;

pub use angles::{stacked_angle_inequality_check, stacked_subspace_angle, subspace_angle, vector_angle, SubspaceAngle};
pub use bounds::{
    elsner_bound, perturbation_triple, refined_residual_identity, refined_residual_identity_check, refined_vector_bound,
    ritz_vector_bound, PerturbationTriple,
};
pub use deflation::{deflate, residual_angle_bound, sep, Deflation, DEFLATE_RESIDUAL_TOL};
pub use diagnostics::{full_diagnostics, DiagnosticsReport};
