use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{c64, spectral_norm, svd, unitary_completion, ComplexMatrix, ComplexVector};

/// Eigenvector residual tolerance accepted by [`deflate`], relative to
/// `‖A‖ + |λ|‖B‖`.
pub const DEFLATE_RESIDUAL_TOL: f64 = 1e-8;

/// Block-triangular form of a pencil `(A, B)` at an eigenpair `(λ, v)`:
///
/// ```text
/// [y₁ Y]ᴴ A [v X] = [α sᴴ; 0 L],   [y₁ Y]ᴴ B [v X] = [β tᴴ; 0 N]
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct Deflation {
    pub alpha: Complex64,
    pub beta: Complex64,
    /// `s` with `sᴴ = y₁ᴴAX`.
    pub s: ComplexVector,
    /// `t` with `tᴴ = y₁ᴴBX`.
    pub t: ComplexVector,
    pub l: ComplexMatrix,
    pub n: ComplexMatrix,
    pub v1: ComplexVector,
    pub y1: ComplexVector,
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    /// `‖Av − λBv‖` for the input pair.
    pub residual_norm: f64,
    /// `‖YᴴAv‖`, the (2,1) block of the transformed `A`; bounded by
    /// `residual_norm` up to rounding.
    pub coupling_a: f64,
    /// `‖YᴴBv‖`, zero up to rounding by the choice of `y₁`.
    pub coupling_b: f64,
}

impl Deflation {
    /// `α/β`.
    pub fn eigenvalue(&self) -> Complex64 {
        self.alpha / self.beta
    }

    /// Order of the deflated pencil `(L, N)`.
    pub fn order(&self) -> usize {
        self.l.nrows()
    }
}

/// Deflates `(A, B)` at the eigenpair `(λ, v)` with `y₁ = Bv/‖Bv‖`.
pub fn deflate(a: &ComplexMatrix, b: &ComplexMatrix, lambda: Complex64, v: &ComplexVector) -> Result<Deflation> {
    let k = a.nrows();
    if a.ncols() != k || b.shape() != (k, k) || v.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "deflate: pencil of order {k}, vector of length {}",
            v.len()
        )));
    }
    let nv = v.norm();
    if nv == 0.0 {
        return Err(Error::ZeroVector);
    }
    let v1 = v / c64(nv, 0.0);
    let norm_a = spectral_norm(a);
    let norm_b = spectral_norm(b);
    let av = a * &v1;
    let bv = b * &v1;
    let residual_norm = (&av - &bv * lambda).norm();
    let tolerance = DEFLATE_RESIDUAL_TOL * (norm_a + lambda.norm() * norm_b);
    if residual_norm > tolerance {
        return Err(Error::NotAnEigenpair {
            residual: residual_norm,
            tolerance,
        });
    }
    let nbv = bv.norm();
    if nbv <= 1e-14 * norm_b || nbv == 0.0 {
        return Err(Error::ZeroBv);
    }
    let y1 = &bv / c64(nbv, 0.0);
    let x = unitary_completion(&v1)?;
    let y = unitary_completion(&y1)?;
    let yh = y.adjoint();
    let alpha = y1.dotc(&av);
    let beta = y1.dotc(&bv);
    let s = x.adjoint() * (a.adjoint() * &y1);
    let t = x.adjoint() * (b.adjoint() * &y1);
    let l = &yh * a * &x;
    let n = &yh * b * &x;
    let coupling_a = (&yh * &av).norm();
    let coupling_b = (&yh * &bv).norm();
    Ok(Deflation {
        alpha,
        beta,
        s,
        t,
        l,
        n,
        v1,
        y1,
        x,
        y,
        residual_norm,
        coupling_a,
        coupling_b,
    })
}

/// `sep(μ, (L, N)) = σ_min(L − μN)`; `+∞` for an empty pencil, which has no
/// eigenvalues to separate from.
pub fn sep(mu: Complex64, l: &ComplexMatrix, n: &ComplexMatrix) -> f64 {
    if l.nrows() == 0 {
        return f64::INFINITY;
    }
    let g = l - n * mu;
    match svd(&g) {
        Ok(s) => s.sigma_min(),
        Err(_) => 0.0,
    }
}

/// `‖r‖/sep`, or `+∞` when `sep` vanishes relative to `‖r‖`.
pub fn residual_angle_bound(r_norm: f64, sep_val: f64) -> f64 {
    if r_norm == 0.0 && sep_val > 0.0 {
        return 0.0;
    }
    if sep_val == 0.0 || sep_val <= 1e-14 * r_norm {
        return f64::INFINITY;
    }
    r_norm / sep_val
}
