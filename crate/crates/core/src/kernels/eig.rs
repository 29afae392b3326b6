use num_complex::Complex64;

use super::lu::Lu;
use super::{c64, probe_vector, spectral_norm, ComplexMatrix, ComplexVector, ONE, ZERO};
use crate::error::{Error, Result};

/// Iteration budget per eigenvalue for the shifted QR sweep.
pub const QR_ITERATION_BUDGET: usize = 30_000;
/// Eigenvalues closer than `CLUSTER_TOL·‖C‖` are flagged as clustered.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Relative offset added to each eigenvalue before inverse iteration.
const SHIFT_OFFSET: f64 = 1e-13;
const INVERSE_ITERATIONS: usize = 5;

#[derive(Debug, Clone)]
pub struct StandardEigenpair {
    pub value: Complex64,
    /// Unit norm; largest component real and positive.
    pub vector: ComplexVector,
    /// Another eigenvalue lies within `CLUSTER_TOL·‖C‖`.
    pub clustered: bool,
}

fn hessenberg(c: &ComplexMatrix) -> ComplexMatrix {
    let n = c.nrows();
    let mut h = c.clone();
    for j in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = ((j + 1)..n).map(|i| h[(i, j)]).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let mut w = x;
        w[0] += phase * norm;
        let wn: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        for col in j..n {
            let mut dot = ZERO;
            for (k, wk) in w.iter().enumerate() {
                dot += wk.conj() * h[(j + 1 + k, col)];
            }
            let f = dot * (2.0 / wn);
            for (k, wk) in w.iter().enumerate() {
                h[(j + 1 + k, col)] -= wk * f;
            }
        }
        for row in 0..n {
            let mut dot = ZERO;
            for (k, wk) in w.iter().enumerate() {
                dot += h[(row, j + 1 + k)] * wk;
            }
            let f = dot * (2.0 / wn);
            for (k, wk) in w.iter().enumerate() {
                h[(row, j + 1 + k)] -= f * wk.conj();
            }
        }
        for i in (j + 2)..n {
            h[(i, j)] = ZERO;
        }
    }
    h
}

/// Eigenvalue of the trailing 2×2 `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Givens pair `(c, s)` with `[[c, s], [−s̄, c]]·[x; y] = [r; 0]`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let r = (ax * ax + y.norm_sqr()).sqrt();
    if r == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / y.norm());
    }
    (ax / r, (x / ax) * y.conj() / r)
}

/// One implicit single-shift QR sweep on the active window `lo..=hi`.
fn qr_sweep(h: &mut ComplexMatrix, lo: usize, hi: usize, shift: Complex64) {
    let mut x = h[(lo, lo)] - shift;
    let mut y = h[(lo + 1, lo)];
    for k in lo..hi {
        if k > lo {
            x = h[(k, k - 1)];
            y = h[(k + 1, k - 1)];
        }
        let (c, s) = givens(x, y);
        let first_col = if k > lo { k - 1 } else { lo };
        for j in first_col..=hi {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = a * c + s * b;
            h[(k + 1, j)] = -s.conj() * a + b * c;
        }
        let last_row = (k + 2).min(hi);
        for i in lo..=last_row {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = a * c + b * s.conj();
            h[(i, k + 1)] = -a * s + b * c;
        }
        if k > lo {
            h[(k + 1, k - 1)] = ZERO;
        }
    }
}

/// Eigenvalues by Hessenberg reduction and implicitly shifted QR.
fn eigenvalues(c: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = c.nrows();
    let mut h = hessenberg(c);
    let scale = h.norm();
    let mut values = Vec::with_capacity(n);
    if n == 0 {
        return Ok(values);
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    loop {
        if hi == 0 {
            values.push(h[(0, 0)]);
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            let reference = if diag > 0.0 { diag } else { scale };
            if sub <= f64::EPSILON * reference || sub < f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            values.push(h[(hi, hi)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > QR_ITERATION_BUDGET {
            return Err(Error::NoConvergence("shifted QR iteration budget"));
        }
        let shift = if iter.is_multiple_of(10) {
            h[(hi, hi)] + c64(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    Ok(values)
}

fn normalize_phase(v: &mut ComplexVector) {
    let nrm = v.norm();
    if nrm == 0.0 {
        return;
    }
    let (imax, _) = v.iter().enumerate().fold(
        (0, -1.0),
        |acc, (i, z)| if z.norm() > acc.1 + 1e-14 * nrm { (i, z.norm()) } else { acc },
    );
    let ph = v[imax] / v[imax].norm();
    *v /= ph * nrm;
}

fn residual(c: &ComplexMatrix, lambda: Complex64, v: &ComplexVector) -> f64 {
    (c * v - v * lambda).norm()
}

/// Start vector with a substantial component outside `span{against}`.
fn start_vector(n: usize, against: &[ComplexVector]) -> ComplexVector {
    let mut fallback = probe_vector(n, 0);
    for variant in 0..=n {
        let mut v = probe_vector(n, variant);
        for _ in 0..2 {
            for u in against {
                let p = u.dotc(&v);
                v -= u * p;
            }
        }
        let nrm = v.norm();
        if nrm > 0.1 {
            return v / c64(nrm, 0.0);
        }
        if variant == 0 && nrm > 0.0 {
            fallback = v / c64(nrm, 0.0);
        }
    }
    fallback
}

/// Inverse iteration for `lambda`, optionally orthogonalized against the
/// eigenvectors already found for nearby eigenvalues.
fn inverse_iteration(c: &ComplexMatrix, lu: &Lu, lambda: Complex64, against: &[ComplexVector], scale: f64) -> ComplexVector {
    let mut v = start_vector(c.nrows(), against);
    let mut best = v.clone();
    let mut best_res = f64::INFINITY;
    for _ in 0..INVERSE_ITERATIONS {
        v = lu.solve(&v);
        for _ in 0..2 {
            for u in against {
                let p = u.dotc(&v);
                v -= u * p;
            }
        }
        let nrm = v.norm();
        if nrm == 0.0 || !nrm.is_finite() {
            break;
        }
        v /= c64(nrm, 0.0);
        let r = residual(c, lambda, &v);
        if r < best_res {
            best_res = r;
            best = v.clone();
        }
        if r <= 1e-15 * scale {
            break;
        }
    }
    best
}

/// All eigenpairs of a square matrix, with multiplicity.
///
/// Eigenvectors come from inverse iteration on `C − (λ + δ)I` with
/// `δ = 1e-13·‖C‖`. Members of an eigenvalue cluster are orthogonalized
/// against each other when that keeps the residual small, so a semisimple
/// multiple eigenvalue yields independent eigenvectors.
pub fn eig_standard(c: &ComplexMatrix) -> Result<Vec<StandardEigenpair>> {
    super::ensure_finite(c)?;
    let n = c.nrows();
    if n != c.ncols() {
        return Err(Error::DimensionMismatch(format!("eig_standard on {}x{}", n, c.ncols())));
    }
    let mut values = eigenvalues(c)?;
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let scale = spectral_norm(c);
    if scale == 0.0 {
        return Ok((0..n)
            .map(|j| {
                let mut e = ComplexVector::zeros(n);
                e[j] = ONE;
                StandardEigenpair {
                    value: ZERO,
                    vector: e,
                    clustered: n > 1,
                }
            })
            .collect());
    }
    let cluster_radius = CLUSTER_TOL * scale;
    let mut pairs: Vec<StandardEigenpair> = Vec::with_capacity(n);
    for (i, &lambda) in values.iter().enumerate() {
        let neighbours: Vec<usize> = (0..i).filter(|&j| (values[j] - lambda).norm() <= cluster_radius).collect();
        let clustered = values
            .iter()
            .enumerate()
            .any(|(j, &mu)| j != i && (mu - lambda).norm() <= cluster_radius);
        let mut shifted = c.clone();
        let sigma = lambda + c64(SHIFT_OFFSET * scale, 0.0);
        for d in 0..n {
            shifted[(d, d)] -= sigma;
        }
        let lu = Lu::factor_regularized(&shifted, f64::EPSILON * scale);
        let plain = inverse_iteration(c, &lu, lambda, &[], scale);
        let mut vector = plain.clone();
        if !neighbours.is_empty() {
            let previous: Vec<ComplexVector> = neighbours.iter().map(|&j| pairs[j].vector.clone()).collect();
            let ortho = inverse_iteration(c, &lu, lambda, &previous, scale);
            let r_plain = residual(c, lambda, &plain);
            let r_ortho = residual(c, lambda, &ortho);
            if r_ortho <= (1e-10 * scale).max(10.0 * r_plain) {
                vector = ortho;
            }
        }
        normalize_phase(&mut vector);
        pairs.push(StandardEigenpair {
            value: lambda,
            vector,
            clustered,
        });
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{real_matrix, real_vector, sin_angle};

    #[test]
    fn diagonal() {
        let c = real_matrix(2, 2, &[2.0, 0.0, 0.0, 3.0]);
        let e = eig_standard(&c).unwrap();
        assert!((e[0].value - c64(2.0, 0.0)).norm() < 1e-14);
        assert!((e[1].value - c64(3.0, 0.0)).norm() < 1e-14);
        assert!(sin_angle(&e[0].vector, &real_vector(&[1.0, 0.0])).unwrap() < 1e-13);
        assert!(sin_angle(&e[1].vector, &real_vector(&[0.0, 1.0])).unwrap() < 1e-13);
    }

    #[test]
    fn swap_matrix() {
        let c = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let e = eig_standard(&c).unwrap();
        assert!((e[0].value + ONE).norm() < 1e-14);
        assert!((e[1].value - ONE).norm() < 1e-14);
        assert!(sin_angle(&e[0].vector, &real_vector(&[1.0, -1.0])).unwrap() < 1e-13);
        assert!(sin_angle(&e[1].vector, &real_vector(&[1.0, 1.0])).unwrap() < 1e-13);
    }

    #[test]
    fn semisimple_double_eigenvalue_gets_independent_vectors() {
        let c = ComplexMatrix::identity(3, 3) * c64(2.0, 0.0);
        let e = eig_standard(&c).unwrap();
        let v = ComplexMatrix::from_columns(&e.iter().map(|p| p.vector.clone()).collect::<Vec<_>>());
        assert!(crate::kernels::orthonormality_defect(&v) < 1e-12);
        assert!(e.iter().all(|p| p.clustered));
    }

    #[test]
    fn zero_matrix() {
        let e = eig_standard(&ComplexMatrix::zeros(2, 2)).unwrap();
        assert_eq!(e.len(), 2);
        assert!(e.iter().all(|p| p.value == ZERO));
    }

    #[test]
    fn rotation_has_complex_eigenvalues() {
        let c = real_matrix(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let e = eig_standard(&c).unwrap();
        let mut ims: Vec<f64> = e.iter().map(|p| p.value.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-14 && (ims[1] - 1.0).abs() < 1e-14);
        for p in &e {
            assert!(residual(&c, p.value, &p.vector) < 1e-13);
        }
    }

    #[test]
    fn one_by_one() {
        let c = ComplexMatrix::from_element(1, 1, c64(-4.0, 2.0));
        let e = eig_standard(&c).unwrap();
        assert_eq!(e[0].value, c64(-4.0, 2.0));
        assert!((e[0].vector[0] - ONE).norm() < 1e-15);
    }
}
