//! Rayleigh–Ritz projection of a quadratic pencil onto `span{Q}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{c64, orthonormality_defect, spectral_norm, svd, ComplexMatrix, ComplexVector};
use crate::pencil::{is_hermitian_pd, QuadraticPencil};
use crate::solver::{nearest_index, solve_full};

/// Orthonormality tolerance for projection bases.
pub const ORTHONORMAL_TOL: f64 = 1e-12;
/// Ritz values closer than this times `max|μ|` are flagged as clustered.
pub const RITZ_CLUSTER_TOL: f64 = 1e-8;
/// `σ_min(M̂) < MASS_SINGULAR_TOL·‖M̂‖` aborts the extraction.
pub const MASS_SINGULAR_TOL: f64 = 1e-12;

/// `(QᴴMQ, QᴴDQ, QᴴKQ)` together with the basis `Q`.
#[derive(Debug, Clone)]
pub struct ProjectedPencil {
    q: ComplexMatrix,
    pencil: QuadraticPencil,
}

impl ProjectedPencil {
    pub fn basis(&self) -> &ComplexMatrix {
        &self.q
    }
    /// The projected triple as a pencil in its own right.
    pub fn pencil(&self) -> &QuadraticPencil {
        &self.pencil
    }
    pub fn dim(&self) -> usize {
        self.q.ncols()
    }
    pub fn mhat(&self) -> &ComplexMatrix {
        self.pencil.m()
    }
    pub fn dhat(&self) -> &ComplexMatrix {
        self.pencil.d()
    }
    pub fn khat(&self) -> &ComplexMatrix {
        self.pencil.k()
    }
}

pub fn check_orthonormal(q: &ComplexMatrix) -> Result<()> {
    let defect = orthonormality_defect(q);
    if defect > ORTHONORMAL_TOL {
        Err(Error::NotOrthonormal(defect))
    } else {
        Ok(())
    }
}

fn hermitian_part(a: ComplexMatrix) -> ComplexMatrix {
    (&a + a.adjoint()) * c64(0.5, 0.0)
}

/// Projects `p` onto the orthonormal basis `q` (n×m, m ≤ n).
pub fn project(p: &QuadraticPencil, q: &ComplexMatrix) -> Result<ProjectedPencil> {
    if q.nrows() != p.n() || q.ncols() > q.nrows() || q.ncols() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "basis is {}x{} for order {}",
            q.nrows(),
            q.ncols(),
            p.n()
        )));
    }
    check_orthonormal(q)?;
    let qh = q.adjoint();
    let mut mhat = &qh * p.m() * q;
    if p.hermitian_pd() {
        // exact Hermitian symmetry lets the HPD property survive rounding
        mhat = hermitian_part(mhat);
    } else {
        log::warn!("M is not Hermitian positive definite; the projected mass matrix may be singular");
    }
    let dhat = &qh * p.d() * q;
    let khat = &qh * p.k() * q;
    let pencil = QuadraticPencil::new(mhat, dhat, khat)?;
    if p.hermitian_pd() {
        assert!(
            is_hermitian_pd(pencil.m()),
            "projection of an HPD mass matrix lost definiteness"
        );
    }
    Ok(ProjectedPencil { q: q.clone(), pencil })
}

/// A Ritz value with its coefficient vector and the lifted Ritz vector.
#[derive(Debug, Clone, PartialEq)]
pub struct RitzPair {
    pub value: Complex64,
    /// `x̂`, unit norm in the coefficient space.
    pub coeff: ComplexVector,
    /// `x̃ = Qx̂`.
    pub vector: ComplexVector,
    /// `‖(μ²M + μD + K)x̃‖` on the full pencil.
    pub residual_norm: f64,
    /// Another Ritz value is within `RITZ_CLUSTER_TOL·max|μ|`; the coefficient
    /// vector is then not determined by the projected problem.
    pub clustered: bool,
}

/// All `2m` Ritz pairs of `p` with respect to `span{Q}`.
pub fn ritz_pairs(pp: &ProjectedPencil, p: &QuadraticPencil) -> Result<Vec<RitzPair>> {
    let mhat = pp.mhat();
    let s = svd(mhat)?;
    if s.sigma_min() < MASS_SINGULAR_TOL * s.sigma[0] || s.sigma[0] == 0.0 {
        return Err(Error::Singular("projected M"));
    }
    let pairs = solve_full(pp.pencil())?;
    let max_abs = pairs.iter().map(|e| e.value.norm()).fold(0.0, f64::max);
    let radius = RITZ_CLUSTER_TOL * max_abs;
    pairs
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let vector = pp.basis() * &e.vector;
            let (_, residual_norm) = p.residual(e.value, &vector)?;
            let clustered = pairs
                .iter()
                .enumerate()
                .any(|(j, f)| j != i && (f.value - e.value).norm() <= radius);
            Ok(RitzPair {
                value: e.value,
                coeff: e.vector.clone(),
                vector,
                residual_norm,
                clustered,
            })
        })
        .collect()
}

/// The Ritz pair whose value is nearest `target`.
pub fn select_ritz(pairs: &[RitzPair], target: Complex64) -> Result<RitzPair> {
    let i = nearest_index(pairs, target, |r| (r.value, r.residual_norm))?;
    Ok(pairs[i].clone())
}

/// `‖(μ²M̂ + μD̂ + K̂)x̂‖` for a Ritz pair.
pub fn projected_residual(pp: &ProjectedPencil, pair: &RitzPair) -> f64 {
    pp.pencil()
        .residual(pair.value, &pair.coeff)
        .map(|(_, r)| r)
        .unwrap_or(f64::INFINITY)
}

/// `‖Qᴴ(μ²M + μD + K)x̃‖`, the Galerkin defect of a Ritz pair.
pub fn galerkin_defect(p: &QuadraticPencil, pp: &ProjectedPencil, pair: &RitzPair) -> f64 {
    let r = p.evaluate(pair.value) * &pair.vector;
    (pp.basis().adjoint() * r).norm()
}

/// `‖M̂⁻¹‖₂`, infinite when `M̂` is singular.
pub fn projected_mass_inverse_norm(pp: &ProjectedPencil) -> f64 {
    match svd(pp.mhat()) {
        Ok(s) if s.sigma_min() > 0.0 => 1.0 / s.sigma_min(),
        _ => f64::INFINITY,
    }
}

/// `‖QᴴMQ − M̂‖` style consistency helper used by tests and reports.
pub fn projection_error(p: &QuadraticPencil, pp: &ProjectedPencil) -> f64 {
    let q = pp.basis();
    let qh = q.adjoint();
    [
        spectral_norm(&(&qh * p.m() * q - pp.mhat())),
        spectral_norm(&(&qh * p.d() * q - pp.dhat())),
        spectral_norm(&(&qh * p.k() * q - pp.khat())),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}
