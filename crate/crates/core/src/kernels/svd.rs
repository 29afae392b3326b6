use super::jacobi::{hermitian_eig, rotate_columns, rotation};
use super::{c64, ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};

/// Maximum number of one-sided Jacobi sweeps.
pub const SVD_SWEEP_BUDGET: usize = 30;

/// Full singular value decomposition `G = U·diag(sigma)·Vᴴ`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// n×n unitary.
    pub u: ComplexMatrix,
    /// Nonincreasing, length `min(n, m)`.
    pub sigma: Vec<f64>,
    /// m×m unitary.
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn sigma_min(&self) -> f64 {
        *self.sigma.last().unwrap_or(&0.0)
    }
}

/// One-sided Jacobi on the columns of `g` (requires rows ≥ cols). Returns the
/// rotated columns `W = GV` and the accumulated `V`.
fn one_sided_jacobi(g: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let m = g.ncols();
    let mut w = g.clone();
    let mut v = ComplexMatrix::identity(m, m);
    for _ in 0..SVD_SWEEP_BUDGET {
        let mut rotated = false;
        for p in 0..m {
            for q in (p + 1)..m {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = w.column(p).dotc(&w.column(q));
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, se) = rotation(alpha, beta, gamma);
                rotate_columns(&mut w, p, q, c, se);
                rotate_columns(&mut v, p, q, c, se);
            }
        }
        if !rotated {
            return Ok((w, v));
        }
    }
    Err(Error::NoConvergence("SVD Jacobi sweeps"))
}

/// Extends orthonormal columns to a full n×n unitary matrix.
///
/// Each step adds the coordinate vector with the largest component outside
/// the current span; with k < n columns that component is at least √((n−k)/n).
fn complete_basis(cols: Vec<ComplexVector>, n: usize) -> ComplexMatrix {
    let mut basis = cols;
    while basis.len() < n {
        let best = (0..n)
            .map(|i| {
                let mut e = ComplexVector::zeros(n);
                e[i] = c64(1.0, 0.0);
                for _ in 0..2 {
                    for b in &basis {
                        let proj = b.dotc(&e);
                        e -= b * proj;
                    }
                }
                e
            })
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .expect("n > 0 when columns are missing");
        let nrm = best.norm();
        basis.push(best / c64(nrm, 0.0));
    }
    ComplexMatrix::from_columns(&basis)
}

fn svd_tall(g: &ComplexMatrix, want_u: bool) -> Result<Svd> {
    let (n, m) = g.shape();
    let (w, v) = one_sided_jacobi(g)?;
    let norms: Vec<f64> = (0..m).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let v_sorted = ComplexMatrix::from_fn(m, m, |r, c| v[(r, order[c])]);
    let u = if want_u {
        let cols: Vec<ComplexVector> = order
            .iter()
            .filter(|&&j| norms[j] > 0.0)
            .map(|&j| w.column(j) / c64(norms[j], 0.0))
            .collect();
        complete_basis(cols, n)
    } else {
        ComplexMatrix::zeros(0, 0)
    };
    Ok(Svd { u, sigma, v: v_sorted })
}

fn svd_impl(g: &ComplexMatrix, want_u: bool) -> Result<Svd> {
    super::ensure_finite(g)?;
    if g.nrows() >= g.ncols() {
        svd_tall(g, want_u)
    } else {
        let t = svd_tall(&g.adjoint(), true)?;
        Ok(Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        })
    }
}

/// Singular value decomposition by one-sided Jacobi rotations.
pub fn svd(g: &ComplexMatrix) -> Result<Svd> {
    svd_impl(g, true)
}

/// Spectral norm `σ₁(A)`. Zero for an all-zero matrix.
pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    let tall = if a.nrows() >= a.ncols() { a.clone() } else { a.adjoint() };
    match svd_tall(&tall, false) {
        Ok(s) => s.sigma[0],
        // Jacobi on a finite matrix converges well inside the budget; fall back
        // to the Frobenius norm (an upper bound) rather than panicking.
        Err(_) => a.norm(),
    }
}

/// How the smallest right singular vector is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SingularMode {
    /// Full SVD of `G`.
    #[default]
    FullSvd,
    /// Hermitian eigendecomposition of `GᴴG`: cheaper, roughly half the digits.
    CrossProduct,
}

impl std::str::FromStr for SingularMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "full-svd" | "full" => Ok(SingularMode::FullSvd),
            "cross-product" | "cross" => Ok(SingularMode::CrossProduct),
            other => Err(format!("unknown singular mode '{other}'")),
        }
    }
}

impl std::fmt::Display for SingularMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SingularMode::FullSvd => "full-svd",
            SingularMode::CrossProduct => "cross-product",
        })
    }
}

/// Smallest right singular triplet of an n×m matrix with n ≥ m.
#[derive(Debug, Clone)]
pub struct SmallestSingular {
    pub sigma_min: f64,
    /// Unit right singular vector.
    pub vector: ComplexVector,
    /// `σ_{m−1} − σ_m`, or `None` when m = 1.
    pub gap: Option<f64>,
    /// `σ₁`.
    pub sigma_max: f64,
}

/// Minimizer of `‖Gz‖` over unit `z`.
///
/// In cross-product mode `sigma_min` is reported as `‖Gv‖` for the computed
/// `v`, which is more accurate than the square root of the smallest
/// eigenvalue of `GᴴG`.
pub fn smallest_right_singular(g: &ComplexMatrix, mode: SingularMode) -> Result<SmallestSingular> {
    let (n, m) = g.shape();
    if n < m || m == 0 {
        return Err(Error::DimensionMismatch(format!(
            "smallest_right_singular needs rows >= cols >= 1, got {n}x{m}"
        )));
    }
    match mode {
        SingularMode::FullSvd => {
            let s = svd_impl(g, false)?;
            let gap = (m > 1).then(|| s.sigma[m - 2] - s.sigma[m - 1]);
            Ok(SmallestSingular {
                sigma_min: s.sigma[m - 1],
                vector: s.v.column(m - 1).into_owned(),
                gap,
                sigma_max: s.sigma[0],
            })
        }
        SingularMode::CrossProduct => {
            super::ensure_finite(g)?;
            let gram = g.adjoint() * g;
            let e = hermitian_eig(&gram)?;
            let v = e.vectors.column(0).into_owned();
            let sigma_min = (g * &v).norm();
            let root = |x: f64| x.max(0.0).sqrt();
            let gap = (m > 1).then(|| (root(e.values[1]) - sigma_min).max(0.0));
            Ok(SmallestSingular {
                sigma_min,
                vector: v,
                gap,
                sigma_max: root(e.values[m - 1]),
            })
        }
    }
}
