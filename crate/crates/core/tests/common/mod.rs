//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qritz::kernels::{c64, ComplexMatrix, ComplexVector};
use qritz::pencil::QuadraticPencil;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    DMatrix::from_fn(rows, cols, |_, _| c64(normal(rng), normal(rng)))
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> ComplexVector {
    ComplexVector::from_fn(n, |_, _| c64(normal(rng), normal(rng)))
}

pub fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> ComplexVector {
    let v = random_vector(rng, n);
    let nv = v.norm();
    v / c64(nv, 0.0)
}

/// `GᴴG/n + I`, Hermitian positive definite and well conditioned.
pub fn random_hpd(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n, n);
    g.adjoint() * &g * c64(1.0 / n as f64, 0.0) + ComplexMatrix::identity(n, n)
}

/// HPD mass matrix with Gaussian damping and stiffness.
pub fn random_pencil(rng: &mut ChaCha8Rng, n: usize) -> QuadraticPencil {
    let m = random_hpd(rng, n);
    let d = random_matrix(rng, n, n);
    let k = random_matrix(rng, n, n);
    QuadraticPencil::new(m, d, k).unwrap()
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

/// `10^u` with `u` uniform in `[lo, hi)`.
pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf(uniform(rng, lo, hi))
}

/// Distance from `z` to the nearest element of `others`.
pub fn distance_to_set(z: Complex64, others: &[Complex64]) -> f64 {
    others.iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min)
}

/// Greedy matching distance between two multisets of equal size.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for &x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, &y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Orthonormal `n×m` basis whose angle to the unit vector `x` has sine `sin`:
/// the first column is `cosθ·x + sinθ·w` and the rest are orthogonal to both
/// `x` and `w`.
pub fn subspace_at_angle(rng: &mut ChaCha8Rng, x: &ComplexVector, m: usize, sin: f64) -> ComplexMatrix {
    let n = x.len();
    assert!(m < n, "need room for the off-subspace direction");
    let mut cols = vec![x.clone()];
    let raw = random_matrix(rng, n, m);
    for j in 0..m {
        let mut c = raw.column(j).into_owned();
        for _ in 0..2 {
            for q in &cols {
                let h = q.dotc(&c);
                c -= q * h;
            }
        }
        let nc = c.norm();
        cols.push(c / c64(nc, 0.0));
    }
    let cos = (1.0 - sin * sin).sqrt();
    let first = &cols[0] * c64(cos, 0.0) + &cols[1] * c64(sin, 0.0);
    let mut basis = vec![first];
    basis.extend(cols.into_iter().skip(2));
    ComplexMatrix::from_columns(&basis)
}
