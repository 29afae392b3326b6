//! Quadratic pencils `Q(λ) = λ²M + λD + K`, their shift transform and the
//! companion linearization `(A, B)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{c64, ensure_finite, hermitian_eig, spectral_norm, ComplexMatrix, ComplexVector, ONE, ZERO};

/// The triple `(M, D, K)` with cached spectral norms.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticPencil {
    m: ComplexMatrix,
    d: ComplexMatrix,
    k: ComplexMatrix,
    m0: f64,
    d0: f64,
    k0: f64,
    hermitian_pd: bool,
}

/// True when `a` is Hermitian and its smallest eigenvalue exceeds `1e-12·‖a‖`.
pub fn is_hermitian_pd(a: &ComplexMatrix) -> bool {
    let scale = spectral_norm(a);
    if scale == 0.0 {
        return false;
    }
    let skew = spectral_norm(&(a - a.adjoint()));
    if skew > 1e-14 * scale * (a.nrows() as f64) {
        return false;
    }
    match hermitian_eig(a) {
        Ok(e) => e.values[0] > 1e-12 * scale,
        Err(_) => false,
    }
}

impl QuadraticPencil {
    pub fn new(m: ComplexMatrix, d: ComplexMatrix, k: ComplexMatrix) -> Result<Self> {
        for (name, x) in [("M", &m), ("D", &d), ("K", &k)] {
            ensure_finite(x)?;
            if !x.is_square() {
                return Err(Error::DimensionMismatch(format!("{name} is {}x{}", x.nrows(), x.ncols())));
            }
        }
        if m.nrows() != d.nrows() || m.nrows() != k.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "M, D, K have orders {}, {}, {}",
                m.nrows(),
                d.nrows(),
                k.nrows()
            )));
        }
        let m0 = spectral_norm(&m);
        let d0 = spectral_norm(&d);
        let k0 = spectral_norm(&k);
        let hermitian_pd = is_hermitian_pd(&m);
        Ok(Self {
            m,
            d,
            k,
            m0,
            d0,
            k0,
            hermitian_pd,
        })
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }
    pub fn m(&self) -> &ComplexMatrix {
        &self.m
    }
    pub fn d(&self) -> &ComplexMatrix {
        &self.d
    }
    pub fn k(&self) -> &ComplexMatrix {
        &self.k
    }
    /// `‖M‖₂`
    pub fn m0(&self) -> f64 {
        self.m0
    }
    /// `‖D‖₂`
    pub fn d0(&self) -> f64 {
        self.d0
    }
    /// `‖K‖₂`
    pub fn k0(&self) -> f64 {
        self.k0
    }
    pub fn hermitian_pd(&self) -> bool {
        self.hermitian_pd
    }

    /// `|λ|²‖M‖ + |λ|‖D‖ + ‖K‖`, an upper bound on `‖Q(λ)‖`.
    pub fn scale_at(&self, lambda: Complex64) -> f64 {
        let a = lambda.norm();
        a * a * self.m0 + a * self.d0 + self.k0
    }

    /// The matrix `λ²M + λD + K`.
    pub fn evaluate(&self, lambda: Complex64) -> ComplexMatrix {
        &self.m * (lambda * lambda) + &self.d * lambda + &self.k
    }

    /// `(λ²M + λD + K)x` and its norm. `x` is used as given.
    pub fn residual(&self, lambda: Complex64, x: &ComplexVector) -> Result<(ComplexVector, f64)> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for order {}",
                x.len(),
                self.n()
            )));
        }
        let r = &self.m * x * (lambda * lambda) + &self.d * x * lambda + &self.k * x;
        let nrm = r.norm();
        Ok((r, nrm))
    }

    /// Pencil in the shifted variable `λ − τ`:
    /// `M_τ = M`, `D_τ = 2τM + D`, `K_τ = τ²M + τD + K`.
    pub fn shift(&self, tau: Complex64) -> Self {
        let m = self.m.clone();
        let d = &self.m * (tau * 2.0) + &self.d;
        let k = self.evaluate(tau);
        let d0 = spectral_norm(&d);
        let k0 = spectral_norm(&k);
        Self {
            m,
            d,
            k,
            m0: self.m0,
            d0,
            k0,
            hermitian_pd: self.hermitian_pd,
        }
    }

    /// Companion linearization `A = [−D −K; I 0]`, `B = [M 0; 0 I]`.
    pub fn linearize(&self) -> LinearPencil {
        let n = self.n();
        let mut a = ComplexMatrix::zeros(2 * n, 2 * n);
        let mut b = ComplexMatrix::zeros(2 * n, 2 * n);
        a.view_mut((0, 0), (n, n)).copy_from(&(-&self.d));
        a.view_mut((0, n), (n, n)).copy_from(&(-&self.k));
        b.view_mut((0, 0), (n, n)).copy_from(&self.m);
        for i in 0..n {
            a[(n + i, i)] = ONE;
            b[(n + i, n + i)] = ONE;
        }
        LinearPencil { a, b }
    }
}

/// The 2n×2n pair `(A, B)` from [`QuadraticPencil::linearize`].
#[derive(Debug, Clone, PartialEq)]
pub struct LinearPencil {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

impl LinearPencil {
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// Checks the block layout against `p` entrywise.
    pub fn matches(&self, p: &QuadraticPencil) -> bool {
        let n = p.n();
        if self.a.shape() != (2 * n, 2 * n) || self.b.shape() != (2 * n, 2 * n) {
            return false;
        }
        for i in 0..n {
            for j in 0..n {
                let eye = if i == j { ONE } else { ZERO };
                if self.a[(i, j)] != -p.d[(i, j)]
                    || self.a[(i, n + j)] != -p.k[(i, j)]
                    || self.a[(n + i, j)] != eye
                    || self.a[(n + i, n + j)] != ZERO
                    || self.b[(i, j)] != p.m[(i, j)]
                    || self.b[(i, n + j)] != ZERO
                    || self.b[(n + i, j)] != ZERO
                    || self.b[(n + i, n + j)] != eye
                {
                    return false;
                }
            }
        }
        true
    }
}

/// An eigenpair of a quadratic pencil.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: Complex64,
    /// Unit norm.
    pub vector: ComplexVector,
    /// `‖(λ²M + λD + K)x‖`.
    pub residual_norm: f64,
    /// The eigenvalue sits in a cluster; the vector is not well determined.
    pub clustered: bool,
}

/// `[λx; x]/√(1 + |λ|²)` for a unit `x`.
pub fn stack_vector(lambda: Complex64, x: &ComplexVector) -> Result<ComplexVector> {
    let nrm = x.norm();
    if (nrm - 1.0).abs() > 1e-13 {
        return Err(Error::BadNorm(nrm));
    }
    let n = x.len();
    let s = c64(1.0 / (1.0 + lambda.norm_sqr()).sqrt(), 0.0);
    Ok(ComplexVector::from_fn(2 * n, |i, _| {
        if i < n {
            x[i] * lambda * s
        } else {
            x[i - n] * s
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example::{example31_eigenvector, example31_pencil};
    use crate::kernels::{real_matrix, real_vector};

    fn unit_pencil() -> QuadraticPencil {
        let i = ComplexMatrix::identity(2, 2);
        QuadraticPencil::new(i.clone(), ComplexMatrix::zeros(2, 2), -i).unwrap()
    }

    #[test]
    fn example_eigenpair_has_zero_residual() {
        let p = example31_pencil();
        let (_, nrm) = p.residual(ONE, &example31_eigenvector()).unwrap();
        assert!(nrm <= 1e-14);
    }

    #[test]
    fn trivial_residual() {
        let (_, nrm) = unit_pencil().residual(ONE, &real_vector(&[1.0, 0.0])).unwrap();
        assert_eq!(nrm, 0.0);
    }

    #[test]
    fn residual_dimension_mismatch() {
        assert!(matches!(
            unit_pencil().residual(ONE, &real_vector(&[1.0])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn cached_norms() {
        let p = example31_pencil();
        assert!((p.m0() - spectral_norm(p.m())).abs() <= 1e-12 * p.m0());
        assert!(p.hermitian_pd());
        assert!(!QuadraticPencil::new(p.d().clone(), p.d().clone(), p.k().clone())
            .unwrap()
            .hermitian_pd());
    }

    #[test]
    fn rejects_mismatched_orders() {
        let a = ComplexMatrix::identity(2, 2);
        let b = ComplexMatrix::identity(3, 3);
        assert!(QuadraticPencil::new(a.clone(), b, a).is_err());
    }

    #[test]
    fn zero_shift_is_identity() {
        let p = example31_pencil();
        let s = p.shift(ZERO);
        assert_eq!(s.m(), p.m());
        assert_eq!(s.d(), p.d());
        assert_eq!(s.k(), p.k());
    }

    #[test]
    fn unit_shift_moves_eigenvalue_to_zero() {
        let s = example31_pencil().shift(ONE);
        assert!((s.k() * example31_eigenvector()).norm() < 1e-14);
    }

    #[test]
    fn shifted_scalar_pencil() {
        // λ² − 1 at λ = μ + 1 gives μ² + 2μ with roots 0 and −2
        let s = unit_pencil().shift(ONE);
        assert!(s.k().norm() < 1e-15);
        assert_eq!(s.d()[(0, 0)], c64(2.0, 0.0));
    }

    #[test]
    fn scalar_linearization() {
        let one = real_matrix(1, 1, &[1.0]);
        let p = QuadraticPencil::new(one.clone(), real_matrix(1, 1, &[0.0]), -one).unwrap();
        let lp = p.linearize();
        assert_eq!(lp.a, real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        assert_eq!(lp.b, ComplexMatrix::identity(2, 2));
        assert!(lp.matches(&p));
    }

    #[test]
    fn example_linearized_relation() {
        let p = example31_pencil();
        let lp = p.linearize();
        let x = example31_eigenvector();
        let v = ComplexVector::from_fn(6, |i, _| x[i % 3]);
        let lhs = &lp.a * &v;
        let rhs = &lp.b * &v;
        assert!((lhs - rhs).norm() <= 1e-13);
    }

    #[test]
    fn stacking() {
        let x = real_vector(&[0.0, 0.0, 1.0]);
        let v = stack_vector(ONE, &x).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((v - real_vector(&[0.0, 0.0, s, 0.0, 0.0, s])).norm() < 1e-16);
        let v0 = stack_vector(ZERO, &x).unwrap();
        assert_eq!(v0, real_vector(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0]));
        let vi = stack_vector(c64(0.0, 1.0), &x).unwrap();
        assert!((vi.norm() - 1.0).abs() < 1e-15);
        assert!(matches!(stack_vector(ONE, &real_vector(&[2.0])), Err(Error::BadNorm(_))));
    }
}
