use num_complex::Complex64;

use super::{c64, svd, ComplexMatrix, ComplexVector, ONE, ZERO};
use crate::error::{Error, Result};

/// Householder reflector `H = I − 2wwᴴ/(wᴴw)` mapping `x` onto a multiple of `e₁`.
/// Returns `(w, alpha)` with `Hx = alpha·e₁`; `w` is `None` when `x = 0`.
fn reflector(x: &[Complex64]) -> (Option<Vec<Complex64>>, Complex64) {
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return (None, ZERO);
    }
    let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
    let alpha = -phase * norm;
    let mut w = x.to_vec();
    w[0] -= alpha;
    (Some(w), alpha)
}

/// Applies `I − 2wwᴴ/(wᴴw)` from the left to rows `offset..` of columns `cols` of `a`.
fn apply_left(a: &mut ComplexMatrix, w: &[Complex64], offset: usize, cols: std::ops::Range<usize>) {
    let wn: f64 = w.iter().map(|z| z.norm_sqr()).sum();
    if wn == 0.0 {
        return;
    }
    for j in cols {
        let mut dot = ZERO;
        for (i, wi) in w.iter().enumerate() {
            dot += wi.conj() * a[(offset + i, j)];
        }
        let f = dot * (2.0 / wn);
        for (i, wi) in w.iter().enumerate() {
            a[(offset + i, j)] -= wi * f;
        }
    }
}

/// Thin Householder QR: `V = QR` with `Q` n×k orthonormal and `R` k×k upper
/// triangular with a real nonnegative diagonal. Requires `n ≥ k`.
pub fn householder_qr(v: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let (n, k) = v.shape();
    assert!(n >= k, "householder_qr requires rows >= cols");
    let mut a = v.clone();
    let mut reflectors = Vec::with_capacity(k);
    for j in 0..k {
        let x: Vec<Complex64> = (j..n).map(|i| a[(i, j)]).collect();
        let (w, _) = reflector(&x);
        if let Some(w) = &w {
            apply_left(&mut a, w, j, j..k);
        }
        reflectors.push(w);
    }
    let mut q = ComplexMatrix::identity(n, k);
    for (j, w) in reflectors.iter().enumerate().rev() {
        if let Some(w) = w {
            apply_left(&mut q, w, j, 0..k);
        }
    }
    let mut r = ComplexMatrix::from_fn(k, k, |i, j| if i <= j { a[(i, j)] } else { ZERO });
    for j in 0..k {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let ph = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= ph;
            }
            for c in 0..k {
                r[(j, c)] *= ph.conj();
            }
            r[(j, j)] = c64(r[(j, j)].re.abs(), 0.0);
        }
    }
    (q, r)
}

/// Orthonormal basis of `span{V}` with the same number of columns.
///
/// Any orthonormal basis of the span is equivalent downstream, so callers
/// compare subspaces rather than individual columns.
pub fn orthonormalize(v: &ComplexMatrix) -> Result<ComplexMatrix> {
    super::ensure_finite(v)?;
    let (n, k) = v.shape();
    if k > n {
        return Err(Error::RankDeficient { rank: n, expected: k });
    }
    let s = svd(v)?;
    let top = s.sigma[0];
    let rank = s.sigma.iter().filter(|&&x| x > 1e-12 * top).count();
    if top == 0.0 || rank < k {
        return Err(Error::RankDeficient {
            rank: if top == 0.0 { 0 } else { rank },
            expected: k,
        });
    }
    let (q, _) = householder_qr(v);
    Ok(q)
}

/// Columns `X` (k×(k−1)) making `[v, X]` unitary, for a unit vector `v`.
pub fn unitary_completion(v: &ComplexVector) -> Result<ComplexMatrix> {
    let k = v.len();
    let nrm = v.norm();
    if (nrm - 1.0).abs() > 1e-13 * (k as f64).sqrt().max(1.0) {
        return Err(Error::BadNorm(nrm));
    }
    if k == 1 {
        return Ok(ComplexMatrix::zeros(1, 0));
    }
    let x: Vec<Complex64> = v.iter().copied().collect();
    let (w, _) = reflector(&x);
    // H is Hermitian and unitary with H e₁ ∝ v, so its trailing columns span v^⊥
    let mut h = ComplexMatrix::identity(k, k);
    if let Some(w) = w {
        apply_left(&mut h, &w, 0, 0..k);
    }
    Ok(h.columns(1, k - 1).into_owned())
}
