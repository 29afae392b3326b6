use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{c64, spectral_norm, ComplexMatrix, ComplexVector};
use crate::pencil::QuadraticPencil;
use crate::projection::{check_orthonormal, ProjectedPencil};
use crate::solver::companion_matrix;

use super::angles::subspace_angle;

/// Relative slack applied when checking the triple's invariants.
const TRIPLE_SLACK: f64 = 1e-12;

/// Rank-one perturbations of the projected pencil that make `(λ₁, q̂₁)` an
/// exact eigenpair, where `q̂₁ = Qᴴx₁/‖Qᴴx₁‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationTriple {
    pub em: ComplexMatrix,
    pub ed: ComplexMatrix,
    pub ek: ComplexMatrix,
    /// Upper bounds on `‖E_M‖`, `‖E_D‖`, `‖E_K‖` in terms of `tanθ₁`.
    pub norm_bounds: [f64; 3],
    /// `‖E_M‖`, `‖E_D‖`, `‖E_K‖`.
    pub norms: [f64; 3],
    pub lambda: Complex64,
    pub qhat: ComplexVector,
    /// `‖(λ₁²M̂ + λ₁D̂ + K̂)q̂₁‖` before perturbation.
    pub r1_norm: f64,
    pub tan_theta: f64,
    /// `‖(λ₁²(M̂+E_M) + λ₁(D̂+E_D) + K̂+E_K)q̂₁‖`.
    pub annihilation_residual: f64,
    /// `|λ₁|²m0 + |λ₁|d0 + k0` for the full pencil.
    pub scale: f64,
}

impl PerturbationTriple {
    /// The three norm bounds hold and the perturbed pencil annihilates `q̂₁`,
    /// both up to `1e-12` relative slack.
    pub fn invariants_hold(&self) -> bool {
        let norms_ok = self
            .norms
            .iter()
            .zip(self.norm_bounds.iter())
            .all(|(n, b)| *n <= b * (1.0 + TRIPLE_SLACK) + TRIPLE_SLACK * self.scale);
        norms_ok && self.annihilation_residual <= TRIPLE_SLACK * self.scale.max(f64::MIN_POSITIVE)
    }

    /// The perturbed projected pencil `(M̂+E_M, D̂+E_D, K̂+E_K)`.
    pub fn perturbed(&self, pp: &ProjectedPencil) -> Result<QuadraticPencil> {
        QuadraticPencil::new(pp.mhat() + &self.em, pp.dhat() + &self.ed, pp.khat() + &self.ek)
    }
}

/// Builds the rank-one triple for the eigenpair `(λ₁, x₁)` of `p` with respect
/// to the projection `pp`.
pub fn perturbation_triple(
    p: &QuadraticPencil,
    pp: &ProjectedPencil,
    lambda: Complex64,
    x1: &ComplexVector,
) -> Result<PerturbationTriple> {
    if lambda == c64(0.0, 0.0) {
        return Err(Error::ZeroEigenvalue);
    }
    let angle = subspace_angle(pp.basis(), x1)?;
    if angle.cos <= 1e-14 {
        return Err(Error::OrthogonalSubspace);
    }
    let q1 = pp.basis().adjoint() * x1;
    let qhat = &q1 / c64(q1.norm(), 0.0);
    let (r1, r1_norm) = pp.pencil().residual(lambda, &qhat)?;
    let outer = &r1 * qhat.adjoint();
    let third = c64(-1.0 / 3.0, 0.0);
    let em = &outer * (third / (lambda * lambda));
    let ed = &outer * (third / lambda);
    let ek = &outer * third;
    let a = lambda.norm();
    let tan = angle.tan();
    let (m0, d0, k0) = (p.m0(), p.d0(), p.k0());
    let norm_bounds = [
        (m0 + d0 / a + k0 / (a * a)) * tan / 3.0,
        (a * m0 + d0 + k0 / a) * tan / 3.0,
        (a * a * m0 + a * d0 + k0) * tan / 3.0,
    ];
    let norms = [r1_norm / (3.0 * a * a), r1_norm / (3.0 * a), r1_norm / 3.0];
    let perturbed = (pp.mhat() + &em) * (lambda * lambda) + (pp.dhat() + &ed) * lambda + pp.khat() + &ek;
    let annihilation_residual = (perturbed * &qhat).norm();
    Ok(PerturbationTriple {
        em,
        ed,
        ek,
        norm_bounds,
        norms,
        lambda,
        qhat,
        r1_norm,
        tan_theta: tan,
        annihilation_residual,
        scale: p.scale_at(lambda),
    })
}

/// Elsner's bound `(‖Ĉ‖+‖C̃‖)^{1−1/(2m)}‖Ĉ−C̃‖^{1/(2m)}` on the distance from
/// `λ₁` to the nearest Ritz value, with `Ĉ = B̂⁻¹Â` for the projected pencil
/// and `C̃` the same matrix for the perturbed projected pencil.
pub fn elsner_bound(pp: &ProjectedPencil, pert: &PerturbationTriple) -> Result<f64> {
    let c_hat = companion_matrix(pp.pencil()).map_err(|_| Error::Singular("projected M"))?;
    let c_tilde = companion_matrix(&pert.perturbed(pp)?).map_err(|_| Error::Singular("perturbed projected M"))?;
    let diff = spectral_norm(&(&c_hat - &c_tilde));
    if diff == 0.0 {
        return Ok(0.0);
    }
    let order = (2 * pp.dim()) as f64;
    let sum = spectral_norm(&c_hat) + spectral_norm(&c_tilde);
    Ok(sum.powf(1.0 - 1.0 / order) * diff.powf(1.0 / order))
}

/// `sinθ₁ + (|λ₁|²m0 + |λ₁|d0 + k0)/sep_proj · tanθ₁`, or `+∞` when `sep_proj`
/// is negligible against the numerator scale.
pub fn ritz_vector_bound(lambda: Complex64, m0: f64, d0: f64, k0: f64, theta: f64, sep_proj: f64) -> f64 {
    let a = lambda.norm();
    let scale = a * a * m0 + a * d0 + k0;
    if sep_proj == 0.0 || sep_proj <= 1e-14 * scale {
        return f64::INFINITY;
    }
    theta.sin() + scale / sep_proj * theta.tan()
}

/// `√(1+|λ₁|²)(|λ₁−μ₁|(‖B‖+‖A−μ₁B‖) + ‖A−μ₁B‖sinθ₁)/(cosθ₁·sep_full)`, or
/// `+∞` when `sep_full` is negligible against `‖B‖ + ‖A−μ₁B‖`.
pub fn refined_vector_bound(lambda: Complex64, mu: Complex64, norm_b: f64, norm_a_minus: f64, theta: f64, sep_full: f64) -> f64 {
    if sep_full == 0.0 || sep_full <= 1e-14 * (norm_b + norm_a_minus) {
        return f64::INFINITY;
    }
    let numerator = (lambda - mu).norm() * (norm_b + norm_a_minus) + norm_a_minus * theta.sin();
    (1.0 + lambda.norm_sqr()).sqrt() * numerator / (theta.cos() * sep_full)
}

/// Both sides of `‖(A−μB)[μQz; Qz]‖ = ‖(μ²M+μD+K)Qz‖` for unit `z`.
pub fn refined_residual_identity(p: &QuadraticPencil, q: &ComplexMatrix, mu: Complex64, z: &ComplexVector) -> Result<(f64, f64)> {
    check_orthonormal(q)?;
    if q.nrows() != p.n() || q.ncols() != z.len() {
        return Err(Error::DimensionMismatch("refined_residual_identity".into()));
    }
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::BadNorm(z.norm()));
    }
    let n = p.n();
    let w = q * z;
    let stacked = ComplexVector::from_fn(2 * n, |i, _| if i < n { w[i] * mu } else { w[i - n] });
    let lp = p.linearize();
    let lhs = ((&lp.a - &lp.b * mu) * stacked).norm();
    let (_, rhs) = p.residual(mu, &w)?;
    Ok((lhs, rhs))
}

/// The identity above holds within `1e-12·(|μ|²m0 + |μ|d0 + k0 + 1 + |μ|)`.
pub fn refined_residual_identity_check(p: &QuadraticPencil, q: &ComplexMatrix, mu: Complex64, z: &ComplexVector) -> Result<bool> {
    let (lhs, rhs) = refined_residual_identity(p, q, mu, z)?;
    Ok((lhs - rhs).abs() <= 1e-12 * (p.scale_at(mu) + 1.0 + mu.norm()))
}
