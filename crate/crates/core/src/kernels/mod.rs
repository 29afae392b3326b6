//! Dense complex linear algebra used by every other module.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>` (column-major storage). The
//! factorizations themselves (Householder QR, Hessenberg + shifted QR,
//! one-sided Jacobi SVD, Hermitian Jacobi) live here so that their tolerances
//! and iteration budgets are explicit.

mod eig;
mod jacobi;
mod lu;
mod qr;
mod svd;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eig::{eig_standard, StandardEigenpair, CLUSTER_TOL, QR_ITERATION_BUDGET};
pub use jacobi::{hermitian_eig, HermitianEigen};
pub use lu::{solve_linear, solve_matrix, Lu, PIVOT_TOL};
pub use qr::{householder_qr, orthonormalize, unitary_completion};
pub use svd::{smallest_right_singular, spectral_norm, svd, SingularMode, SmallestSingular, Svd, SVD_SWEEP_BUDGET};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Shorthand for a complex number.
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a complex matrix from real row-major data.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    assert_eq!(data.len(), rows * cols);
    ComplexMatrix::from_fn(rows, cols, |i, j| c64(data[i * cols + j], 0.0))
}

/// Builds a complex vector from real data.
pub fn real_vector(data: &[f64]) -> ComplexVector {
    ComplexVector::from_iterator(data.len(), data.iter().map(|&x| c64(x, 0.0)))
}

pub fn is_finite_matrix(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn ensure_finite(a: &ComplexMatrix) -> Result<()> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    if is_finite_matrix(a) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// `‖QᴴQ − I‖₂` for an n×k matrix.
pub fn orthonormality_defect(q: &ComplexMatrix) -> f64 {
    let mut g = q.adjoint() * q;
    for i in 0..g.nrows() {
        g[(i, i)] -= ONE;
    }
    spectral_norm(&g)
}

/// Sine of the acute angle between two nonzero vectors, invariant to phase.
pub fn sin_angle(x: &ComplexVector, y: &ComplexVector) -> Result<f64> {
    let nx = x.norm();
    let ny = y.norm();
    if nx == 0.0 || ny == 0.0 {
        return Err(Error::ZeroVector);
    }
    let xu = x / c64(nx, 0.0);
    let yu = y / c64(ny, 0.0);
    let cos = xu.dotc(&yu).norm().min(1.0);
    // ‖y − x(xᴴy)‖ is accurate for tiny angles where √(1 − cos²) cancels
    let resid = (&yu - &xu * xu.dotc(&yu)).norm();
    let sin = if cos > 0.9 { resid } else { (1.0 - cos * cos).max(0.0).sqrt() };
    Ok(sin.min(1.0))
}

/// Deterministic, non-degenerate start vectors for iterative kernels; distinct
/// `variant`s give linearly independent directions.
pub(crate) fn probe_vector(n: usize, variant: usize) -> ComplexVector {
    let f = 0.754_877_666 * (1.0 + variant as f64 * 0.618_033_988);
    let v = ComplexVector::from_fn(n, |j, _| {
        let t = j as f64 + 1.0;
        c64((t * f).sin() + 1.1, (t * 0.569_840_290 * (1.0 + variant as f64)).cos() * 0.7)
    });
    let nrm = v.norm();
    v / c64(nrm, 0.0)
}
