//! Built-in 3×3 test problem whose Rayleigh–Ritz projection onto a basis
//! that contains the eigenvector `e₃` collapses to a double Ritz value.

use crate::kernels::{c64, real_matrix, real_vector, sin_angle, ComplexMatrix, ComplexVector, SingularMode, ONE};
use crate::pencil::QuadraticPencil;
use crate::projection::{project, ritz_pairs};
use crate::refined::refined_ritz;

pub fn example31_m() -> ComplexMatrix {
    real_matrix(3, 3, &[1.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0])
}

pub fn example31_d() -> ComplexMatrix {
    real_matrix(3, 3, &[-5.5, -5.0, 0.0, -5.0, -11.0, -3.0, 0.0, -3.0, -4.0])
}

pub fn example31_k() -> ComplexMatrix {
    real_matrix(3, 3, &[6.0, 6.0, 0.0, 6.0, 9.0, 2.0, 0.0, 2.0, 2.0])
}

/// `M`, `D`, `K` symmetric with `M`, `K` positive definite; `(1, e₃)` is an eigenpair.
pub fn example31_pencil() -> QuadraticPencil {
    QuadraticPencil::new(example31_m(), example31_d(), example31_k()).expect("built-in pencil is valid")
}

/// Orthonormal basis `[e₃, (8, −3, 0)ᵀ/√73]`, which contains the eigenvector exactly.
pub fn example31_basis() -> ComplexMatrix {
    let r = 73f64.sqrt();
    real_matrix(3, 2, &[0.0, 8.0 / r, 0.0, -3.0 / r, 1.0, 0.0])
}

pub fn example31_eigenvector() -> ComplexVector {
    real_vector(&[0.0, 0.0, 1.0])
}

pub const EXAMPLE31_EIGENVALUE: f64 = 1.0;

/// Outcome of one golden-value check on the built-in example.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenCheck {
    pub name: &'static str,
    pub passed: bool,
    /// The measured error the check compares against its tolerance.
    pub error: f64,
    pub tolerance: f64,
}

fn check(name: &'static str, error: f64, tolerance: f64) -> GoldenCheck {
    GoldenCheck {
        name,
        passed: error <= tolerance,
        error,
        tolerance,
    }
}

fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The five golden checks on the exact basis. `perturb_d` is added to every
/// entry of `D` first; any nonzero value must break the checks.
pub fn golden_checks(perturb_d: f64) -> Vec<GoldenCheck> {
    let d = example31_d().map(|z| z + c64(perturb_d, 0.0));
    let p = QuadraticPencil::new(example31_m(), d, example31_k()).expect("built-in pencil is valid");
    let q = example31_basis();
    let pp = project(&p, &q).expect("built-in basis is orthonormal");
    let r = 73f64.sqrt();
    let expected_mass = real_matrix(2, 2, &[2.0, -3.0 / r, -3.0 / r, 34.0 / 73.0]);
    let mut checks = vec![
        check("projected mass matrix", max_abs(&(pp.mhat() - expected_mass)), 1e-13),
        check(
            "projected pencil vanishes at 1",
            max_abs(&(pp.mhat() + pp.dhat() + pp.khat())),
            1e-13,
        ),
    ];
    // the two Ritz values nearest 1 must sit at 1, the third must not
    let double = match ritz_pairs(&pp, &p) {
        Ok(pairs) => {
            let mut dist: Vec<f64> = pairs.iter().map(|e| (e.value - ONE).norm()).collect();
            dist.sort_by(f64::total_cmp);
            if dist.len() > 2 && dist[2] > 1e-6 {
                dist[1]
            } else {
                f64::INFINITY
            }
        }
        Err(_) => f64::INFINITY,
    };
    checks.push(check("double Ritz value 1", double, 1e-10));
    let (coeff_err, vector_err) = match refined_ritz(&p, &q, ONE, SingularMode::FullSvd) {
        Ok(z) => (
            sin_angle(&z.coeff, &real_vector(&[1.0, 0.0])).unwrap_or(f64::INFINITY),
            sin_angle(&z.vector, &example31_eigenvector()).unwrap_or(f64::INFINITY),
        ),
        Err(_) => (f64::INFINITY, f64::INFINITY),
    };
    checks.push(check("refined coefficient vector [1, 0]", coeff_err, 1e-12));
    checks.push(check("refined vector e3", vector_err, 1e-12));
    checks
}
