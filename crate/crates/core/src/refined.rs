//! Refined Ritz vectors: keep the Ritz value `μ` and replace the Ritz vector
//! by the unit vector of `span{Q}` that minimizes `‖(μ²M + μD + K)Qz‖`.

use num_complex::Complex64;

use crate::error::Result;
use crate::kernels::{sin_angle, smallest_right_singular, ComplexMatrix, ComplexVector, SingularMode};
use crate::pencil::QuadraticPencil;
use crate::projection::{check_orthonormal, project, ritz_pairs, select_ritz};

#[derive(Debug, Clone, PartialEq)]
pub struct RefinedRitz {
    pub value: Complex64,
    /// Minimizer `ẑ` in the coefficient space.
    pub coeff: ComplexVector,
    /// `z̃ = Qẑ`.
    pub vector: ComplexVector,
    /// Smallest singular value of `(μ²M + μD + K)Q`.
    pub sigma_min: f64,
    /// `‖(μ²M + μD + K)z̃‖` evaluated directly.
    pub residual_norm: f64,
    pub mode: SingularMode,
    /// The two smallest singular values nearly coincide, so the minimizer is
    /// not unique.
    pub ambiguous: bool,
}

/// Refined Ritz vector for the value `mu` with respect to `span{Q}`.
pub fn refined_ritz(p: &QuadraticPencil, q: &ComplexMatrix, mu: Complex64, mode: SingularMode) -> Result<RefinedRitz> {
    check_orthonormal(q)?;
    let g = p.evaluate(mu) * q;
    let s = smallest_right_singular(&g, mode)?;
    let ambiguous = s.gap.is_some_and(|gap| gap <= 1e-12 * s.sigma_max);
    if ambiguous {
        log::warn!("refined Ritz minimizer is not unique at mu = {mu}");
    }
    let vector = q * &s.vector;
    let (_, residual_norm) = p.residual(mu, &vector)?;
    Ok(RefinedRitz {
        value: mu,
        coeff: s.vector,
        vector,
        sigma_min: s.sigma_min,
        residual_norm,
        mode,
        ambiguous,
    })
}

/// Accuracy of a Ritz vector and the refined vector against a known eigenvector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionComparison {
    pub ritz_angle: f64,
    pub refined_angle: f64,
    pub ritz_residual: f64,
    pub refined_residual: f64,
}

/// Compares a given Ritz vector with the refined vector for the same `mu`.
pub fn compare_with_ritz_vector(
    p: &QuadraticPencil,
    q: &ComplexMatrix,
    mu: Complex64,
    ritz_vector: &ComplexVector,
    x1: &ComplexVector,
    mode: SingularMode,
) -> Result<(ExtractionComparison, RefinedRitz)> {
    let refined = refined_ritz(p, q, mu, mode)?;
    let (_, ritz_residual) = p.residual(mu, ritz_vector)?;
    let cmp = ExtractionComparison {
        ritz_angle: sin_angle(x1, ritz_vector)?,
        refined_angle: sin_angle(x1, &refined.vector)?,
        ritz_residual,
        refined_residual: refined.residual_norm,
    };
    Ok((cmp, refined))
}

/// Runs Rayleigh–Ritz, picks the Ritz pair nearest `mu` and compares its
/// vector with the refined vector. Angles are sines against `x1`.
pub fn compare_extractions(
    p: &QuadraticPencil,
    q: &ComplexMatrix,
    mu: Complex64,
    x1: &ComplexVector,
) -> Result<ExtractionComparison> {
    let pp = project(p, q)?;
    let ritz = select_ritz(&ritz_pairs(&pp, p)?, mu)?;
    compare_with_ritz_vector(p, q, ritz.value, &ritz.vector, x1, SingularMode::FullSvd).map(|(c, _)| c)
}
