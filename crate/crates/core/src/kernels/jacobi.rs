use num_complex::Complex64;

use super::{c64, ComplexMatrix, ZERO};
use crate::error::{Error, Result};

const SWEEP_BUDGET: usize = 30;

/// Complex Jacobi rotation `J = [[c, s·e^{iφ}], [−s·e^{−iφ}, c]]` that
/// diagonalizes the Hermitian 2×2 `[[alpha, gamma], [conj(gamma), beta]]`
/// under `JᴴGJ`. Returns `(c, s·e^{iφ})`.
pub(crate) fn rotation(alpha: f64, beta: f64, gamma: Complex64) -> (f64, Complex64) {
    let g = gamma.norm();
    let phase = gamma / g;
    let zeta = (beta - alpha) / (2.0 * g);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, phase * (c * t))
}

/// Right-multiplies columns `p`, `q` of `a` by the rotation from [`rotation`].
pub(crate) fn rotate_columns(a: &mut ComplexMatrix, p: usize, q: usize, c: f64, se: Complex64) {
    for i in 0..a.nrows() {
        let ap = a[(i, p)];
        let aq = a[(i, q)];
        a[(i, p)] = ap * c - aq * se.conj();
        a[(i, q)] = ap * se + aq * c;
    }
}

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, column `j` for `values[j]`.
    pub vectors: ComplexMatrix,
}

/// Cyclic Jacobi eigensolver for a Hermitian matrix. Only the Hermitian part
/// `(A + Aᴴ)/2` is used.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "hermitian_eig requires a square matrix");
    let mut h = (a + a.adjoint()) * c64(0.5, 0.0);
    let mut v = ComplexMatrix::identity(n, n);
    let scale = h.norm();
    let mut converged = scale == 0.0 || n == 1;
    let mut sweeps = 0;
    while !converged {
        if sweeps == SWEEP_BUDGET {
            return Err(Error::NoConvergence("Hermitian Jacobi sweeps"));
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let gamma = h[(p, q)];
                if gamma.norm() <= f64::EPSILON * 1e-2 * scale {
                    continue;
                }
                let app = h[(p, p)].re;
                let aqq = h[(q, q)].re;
                if gamma.norm() <= f64::EPSILON * 0.5 * (app.abs() * aqq.abs()).sqrt() && gamma.norm() <= f64::EPSILON * scale {
                    continue;
                }
                rotated = true;
                let (c, se) = rotation(app, aqq, gamma);
                rotate_columns(&mut h, p, q, c, se);
                for j in 0..n {
                    let hp = h[(p, j)];
                    let hq = h[(q, j)];
                    h[(p, j)] = hp * c - hq * se;
                    h[(q, j)] = hp * se.conj() + hq * c;
                }
                h[(p, q)] = ZERO;
                h[(q, p)] = ZERO;
                h[(p, p)] = c64(h[(p, p)].re, 0.0);
                h[(q, q)] = c64(h[(q, q)].re, 0.0);
                rotate_columns(&mut v, p, q, c, se);
            }
        }
        converged = !rotated;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| h[(i, i)].re.total_cmp(&h[(j, j)].re));
    let values = order.iter().map(|&i| h[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}
