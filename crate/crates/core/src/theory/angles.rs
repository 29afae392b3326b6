use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{sin_angle, ComplexMatrix, ComplexVector};
use crate::pencil::stack_vector;
use crate::projection::check_orthonormal;

/// The acute angle `θ` between a unit vector and a subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceAngle {
    /// `‖(I − QQᴴ)x‖`
    pub sin: f64,
    /// `‖Qᴴx‖`
    pub cos: f64,
}

impl SubspaceAngle {
    pub fn tan(&self) -> f64 {
        if self.cos == 0.0 {
            f64::INFINITY
        } else {
            self.sin / self.cos
        }
    }

    pub fn radians(&self) -> f64 {
        self.sin.atan2(self.cos)
    }
}

fn check_unit(x: &ComplexVector) -> Result<()> {
    let nrm = x.norm();
    if (nrm - 1.0).abs() > 1e-12 {
        Err(Error::BadNorm(nrm))
    } else {
        Ok(())
    }
}

/// Angle between unit `x` and `span{Q}` for orthonormal `Q`.
pub fn subspace_angle(q: &ComplexMatrix, x: &ComplexVector) -> Result<SubspaceAngle> {
    check_orthonormal(q)?;
    check_unit(x)?;
    if q.nrows() != x.len() {
        return Err(Error::DimensionMismatch("subspace_angle".into()));
    }
    let coeff = q.adjoint() * x;
    let perp = x - q * &coeff;
    Ok(SubspaceAngle {
        sin: perp.norm().min(1.0),
        cos: coeff.norm().min(1.0),
    })
}

/// Acute angle in radians between two nonzero vectors, independent of phase.
pub fn vector_angle(x: &ComplexVector, y: &ComplexVector) -> Result<f64> {
    Ok(sin_angle(x, y)?.asin())
}

/// Sine of the angle between `[λx; x]/√(1+|λ|²)` and `span{diag(Q, Q)}`,
/// computed by projecting onto the block-diagonal basis.
pub fn stacked_subspace_angle(q: &ComplexMatrix, lambda: Complex64, x: &ComplexVector) -> Result<f64> {
    check_orthonormal(q)?;
    check_unit(x)?;
    let (n, m) = q.shape();
    let v = stack_vector(lambda, &(x / Complex64::new(x.norm(), 0.0)))?;
    let mut w = ComplexMatrix::zeros(2 * n, 2 * m);
    w.view_mut((0, 0), (n, m)).copy_from(q);
    w.view_mut((n, m), (n, m)).copy_from(q);
    let perp = &v - &w * (w.adjoint() * &v);
    Ok(perp.norm().min(1.0))
}

/// Checks `sin∠(u₁, ũ₁) ≤ min{‖u‖, ‖ũ‖}·sin∠(u, ũ)` for stacked vectors
/// `u = [u₂; u₁]` whose lower blocks `u₁`, `ũ₁` have unit norm.
pub fn stacked_angle_inequality_check(u: &ComplexVector, u_tilde: &ComplexVector) -> Result<bool> {
    let len = u.len();
    if len != u_tilde.len() || !len.is_multiple_of(2) || len == 0 {
        return Err(Error::DimensionMismatch("stacked vectors must share an even length".into()));
    }
    let n = len / 2;
    let lower = u.rows(n, n).into_owned();
    let lower_tilde = u_tilde.rows(n, n).into_owned();
    for b in [&lower, &lower_tilde] {
        if (b.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::BadNorm(b.norm()));
        }
    }
    let lhs = sin_angle(&lower, &lower_tilde)?;
    let rhs = u.norm().min(u_tilde.norm()) * sin_angle(u, u_tilde)?;
    Ok(lhs <= rhs + 1e-12)
}
