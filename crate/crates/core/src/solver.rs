//! Dense solution of a small QEP through `B⁻¹A`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{c64, eig_standard, spectral_norm, svd, ComplexMatrix, ComplexVector, Lu, CLUSTER_TOL, ONE};
use crate::pencil::{Eigenpair, QuadraticPencil};

/// Lower-block norm below which the upper block is used to recover `x`.
const LOWER_BLOCK_FLOOR: f64 = 1e-8;

/// `B⁻¹A = [−M⁻¹D  −M⁻¹K; I  0]`.
pub fn companion_matrix(p: &QuadraticPencil) -> Result<ComplexMatrix> {
    let n = p.n();
    let lu = Lu::factor(p.m()).map_err(|_| Error::Singular("M"))?;
    let top_left = -lu.solve_matrix(p.d());
    let top_right = -lu.solve_matrix(p.k());
    let mut c = ComplexMatrix::zeros(2 * n, 2 * n);
    c.view_mut((0, 0), (n, n)).copy_from(&top_left);
    c.view_mut((0, n), (n, n)).copy_from(&top_right);
    for i in 0..n {
        c[(n + i, i)] = ONE;
    }
    Ok(c)
}

/// Recovers the QEP eigenvector from a unit eigenvector of the linearization.
pub fn extract_eigenvector(v: &ComplexVector, n: usize) -> ComplexVector {
    let bottom = v.rows(n, n).into_owned();
    let nb = bottom.norm();
    let x = if nb >= LOWER_BLOCK_FLOOR * v.norm() {
        bottom
    } else {
        v.rows(0, n).into_owned()
    };
    let nx = x.norm();
    x / c64(nx, 0.0)
}

/// All `2n` eigenpairs of `p`. Requires `M` numerically nonsingular.
///
/// Clustered eigenvalues are refined at the quadratic level: the cluster
/// mean is accurate even when the computed members of a defective eigenvalue
/// are split by `O(√ε)`, and the null vectors of `Q(mean)` are well
/// determined whenever the null space itself is. A member takes the refined
/// pair only if that lowers its residual.
pub fn solve_full(p: &QuadraticPencil) -> Result<Vec<Eigenpair>> {
    let c = companion_matrix(p)?;
    let n = p.n();
    let scale = spectral_norm(&c);
    let raw = eig_standard(&c)?;
    let mut pairs = raw
        .iter()
        .map(|pair| {
            let vector = extract_eigenvector(&pair.vector, n);
            let (_, residual_norm) = p.residual(pair.value, &vector)?;
            Ok(Eigenpair {
                value: pair.value,
                vector,
                residual_norm,
                clustered: pair.clustered,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for cluster in clusters(&pairs, CLUSTER_TOL * scale) {
        refine_cluster(p, &mut pairs, &cluster)?;
    }
    Ok(pairs)
}

/// Groups of indices whose eigenvalues chain together within `radius`.
fn clusters(pairs: &[Eigenpair], radius: f64) -> Vec<Vec<usize>> {
    let mut seen = vec![false; pairs.len()];
    let mut out = Vec::new();
    for start in 0..pairs.len() {
        if seen[start] || !pairs[start].clustered {
            continue;
        }
        seen[start] = true;
        let mut group = vec![start];
        let mut head = 0;
        while head < group.len() {
            let i = group[head];
            head += 1;
            for j in 0..pairs.len() {
                if !seen[j] && (pairs[j].value - pairs[i].value).norm() <= radius {
                    seen[j] = true;
                    group.push(j);
                }
            }
        }
        if group.len() > 1 {
            group.sort_unstable();
            out.push(group);
        }
    }
    out
}

fn refine_cluster(p: &QuadraticPencil, pairs: &mut [Eigenpair], cluster: &[usize]) -> Result<()> {
    let n = p.n();
    let k = cluster.len() as f64;
    let mean = cluster.iter().map(|&i| pairs[i].value).sum::<Complex64>() / k;
    let worst = cluster.iter().map(|&i| pairs[i].residual_norm).fold(0.0, f64::max);
    let s = svd(&p.evaluate(mean))?;
    let null_dim = s.sigma.iter().filter(|&&x| x <= worst).count().clamp(1, n);
    for (t, &i) in cluster.iter().enumerate() {
        let col = n - 1 - (t % null_dim);
        let x = s.v.column(col).into_owned();
        let (_, r) = p.residual(mean, &x)?;
        if r < pairs[i].residual_norm {
            pairs[i].value = mean;
            pairs[i].vector = x;
            pairs[i].residual_norm = r;
        }
    }
    Ok(())
}

/// Index of the item nearest `target`; ties go to the smaller residual, then
/// the earlier index.
pub(crate) fn nearest_index<T>(items: &[T], target: Complex64, key: impl Fn(&T) -> (Complex64, f64)) -> Result<usize> {
    if items.is_empty() {
        return Err(Error::EmptyList);
    }
    let mut best = 0;
    let (v0, r0) = key(&items[0]);
    let mut best_key = ((v0 - target).norm(), r0);
    for (i, item) in items.iter().enumerate().skip(1) {
        let (v, r) = key(item);
        let k = ((v - target).norm(), r);
        if k.0 < best_key.0 || (k.0 == best_key.0 && k.1 < best_key.1) {
            best = i;
            best_key = k;
        }
    }
    Ok(best)
}

/// The eigenpair whose eigenvalue is nearest `target`.
pub fn select_eigenpair(pairs: &[Eigenpair], target: Complex64) -> Result<Eigenpair> {
    let i = nearest_index(pairs, target, |p| (p.value, p.residual_norm))?;
    Ok(pairs[i].clone())
}
