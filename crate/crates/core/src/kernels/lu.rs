use num_complex::Complex64;

use super::{c64, ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};

/// Relative pivot threshold: a pivot below `PIVOT_TOL·‖C‖_F` means singular.
pub const PIVOT_TOL: f64 = 1e-14;

/// LU factorization with partial pivoting, `PC = LU`, stored packed.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Factors `c`, failing with `Singular` when a pivot drops below the threshold.
    pub fn factor(c: &ComplexMatrix) -> Result<Self> {
        let scale = c.norm();
        Self::factor_impl(c, Some(PIVOT_TOL * scale), None)
    }

    /// Factors `c`, replacing pivots smaller than `floor` by `floor`. Used by
    /// inverse iteration where near-singularity is the point.
    pub(crate) fn factor_regularized(c: &ComplexMatrix, floor: f64) -> Self {
        Self::factor_impl(c, None, Some(floor)).expect("regularized factorization cannot fail")
    }

    fn factor_impl(c: &ComplexMatrix, fail_below: Option<f64>, floor: Option<f64>) -> Result<Self> {
        let n = c.nrows();
        assert_eq!(n, c.ncols(), "LU requires a square matrix");
        let mut lu = c.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if let Some(tol) = fail_below {
                if pmax <= tol || pmax == 0.0 {
                    return Err(Error::Singular("pivot below threshold"));
                }
            }
            if p != k {
                lu.swap_rows(p, k);
                perm.swap(p, k);
            }
            if let Some(f) = floor {
                if lu[(k, k)].norm() < f {
                    let ph = if lu[(k, k)].norm() > 0.0 {
                        lu[(k, k)] / lu[(k, k)].norm()
                    } else {
                        c64(1.0, 0.0)
                    };
                    lu[(k, k)] = ph * f;
                }
            }
            let piv = lu[(k, k)];
            for i in (k + 1)..n {
                let l = lu[(i, k)] / piv;
                lu[(i, k)] = l;
                if l.norm() == 0.0 {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve(&self, b: &ComplexVector) -> ComplexVector {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: Complex64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: Complex64 = ((i + 1)..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        ComplexVector::from_vec(x)
    }

    pub fn solve_matrix(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(b.nrows(), b.ncols());
        for j in 0..b.ncols() {
            let col = self.solve(&b.column(j).into_owned());
            out.set_column(j, &col);
        }
        out
    }
}

/// Solves `Cx = b` by partially pivoted LU.
pub fn solve_linear(c: &ComplexMatrix, b: &ComplexVector) -> Result<ComplexVector> {
    if c.nrows() != c.ncols() || c.nrows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with rhs of length {}",
            c.nrows(),
            c.ncols(),
            b.len()
        )));
    }
    Ok(Lu::factor(c)?.solve(b))
}

/// Solves `CX = B` column by column.
pub fn solve_matrix(c: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if c.nrows() != c.ncols() || c.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch("solve_matrix".into()));
    }
    Ok(Lu::factor(c)?.solve_matrix(b))
}
