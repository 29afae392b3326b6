//! Projection subspaces: an eigenvector plus companions under seeded Gaussian
//! noise, and a minimal second-order Krylov builder.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::kernels::{c64, orthonormalize, unitary_completion, ComplexMatrix, ComplexVector, Lu};
use crate::pencil::QuadraticPencil;

/// A new Krylov direction shorter than this (relative to its pre-orthogonal
/// length) ends the recurrence.
pub const BREAKDOWN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceKind {
    PerturbedEigenvector,
    SecondOrderKrylov,
}

impl FromStr for SubspaceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "perturbed-eigenvector" | "perturbed" => Ok(Self::PerturbedEigenvector),
            "second-order-krylov" | "krylov" => Ok(Self::SecondOrderKrylov),
            other => Err(Error::Parse {
                line: 0,
                msg: format!("unknown subspace kind '{other}'"),
            }),
        }
    }
}

impl fmt::Display for SubspaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PerturbedEigenvector => "perturbed-eigenvector",
            Self::SecondOrderKrylov => "second-order-krylov",
        })
    }
}

/// Parameters describing how a projection subspace is generated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceSpec {
    pub kind: SubspaceKind,
    pub dim: usize,
    pub epsilon: f64,
    pub seed: u64,
    /// Shift for the Krylov builder.
    pub target: Complex64,
}

impl SubspaceSpec {
    pub fn new(kind: SubspaceKind, dim: usize, epsilon: f64, seed: u64, target: Complex64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("subspace dimension must be at least 1".into()));
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::DimensionMismatch(format!(
                "perturbation magnitude {epsilon} must be finite and nonnegative"
            )));
        }
        Ok(Self {
            kind,
            dim,
            epsilon,
            seed,
            target,
        })
    }
}

/// `rows×cols` matrix whose real and imaginary parts are independent standard
/// normal draws from ChaCha20 seeded with `seed`, filled column by column.
pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        data.push(c64(re, im));
    }
    ComplexMatrix::from_vec(rows, cols, data)
}

/// `orthonormalize([x₁, companions] + ε·G)` with `G` from [`gaussian_matrix`].
pub fn perturbed_subspace(x1: &ComplexVector, companions: &ComplexMatrix, epsilon: f64, seed: u64) -> Result<ComplexMatrix> {
    let n = x1.len();
    if companions.nrows() != n && companions.ncols() > 0 {
        return Err(Error::DimensionMismatch(format!(
            "companions have {} rows for vectors of length {n}",
            companions.nrows()
        )));
    }
    let m = companions.ncols() + 1;
    let mut v = ComplexMatrix::zeros(n, m);
    v.set_column(0, x1);
    if m > 1 {
        v.columns_mut(1, m - 1).copy_from(companions);
    }
    if epsilon > 0.0 {
        v += gaussian_matrix(n, m, seed) * c64(epsilon, 0.0);
    }
    orthonormalize(&v)
}

/// Basis from [`second_order_krylov`]; `breakdown` holds the dimension reached
/// when the recurrence stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct KrylovBasis {
    pub basis: ComplexMatrix,
    pub breakdown: Option<usize>,
}

/// Orthonormal basis from `m` steps of `u_{j+1} ∝ −K_τ⁻¹(D_τu_j + M_τu_{j−1})`
/// on the pencil shifted by `τ`, with full reorthogonalization.
pub fn second_order_krylov(p: &QuadraticPencil, start: &ComplexVector, m: usize, tau: Complex64) -> Result<KrylovBasis> {
    let n = p.n();
    if start.len() != n || m == 0 || m > n {
        return Err(Error::DimensionMismatch(format!(
            "krylov: start of length {}, m = {m}, n = {n}",
            start.len()
        )));
    }
    let ns = start.norm();
    if ns == 0.0 {
        return Err(Error::ZeroVector);
    }
    let shifted = p.shift(tau);
    let lu = Lu::factor(shifted.k()).map_err(|_| Error::Singular("K_tau"))?;
    let mut basis: Vec<ComplexVector> = vec![start / c64(ns, 0.0)];
    let mut previous = ComplexVector::zeros(n);
    while basis.len() < m {
        let current = basis.last().expect("basis is never empty");
        let rhs = shifted.d() * current + shifted.m() * &previous;
        let mut w = -lu.solve(&rhs);
        let before = w.norm();
        for _ in 0..2 {
            for u in &basis {
                let h = u.dotc(&w);
                w -= u * h;
            }
        }
        let after = w.norm();
        if before == 0.0 || after <= BREAKDOWN_TOL * before {
            log::warn!("second-order Krylov recurrence broke down at dimension {}", basis.len());
            let k = basis.len();
            return Ok(KrylovBasis {
                basis: ComplexMatrix::from_columns(&basis),
                breakdown: Some(k),
            });
        }
        previous = current.clone();
        basis.push(w / c64(after, 0.0));
    }
    Ok(KrylovBasis {
        basis: ComplexMatrix::from_columns(&basis),
        breakdown: None,
    })
}

/// Builds the subspace described by `spec` around `x1`.
///
/// The perturbed kind pads `x1` with the leading columns of the unitary
/// completion of `x1`; the Krylov kind starts the recurrence at `x1`.
pub fn build_subspace(p: &QuadraticPencil, spec: &SubspaceSpec, x1: &ComplexVector) -> Result<ComplexMatrix> {
    match spec.kind {
        SubspaceKind::PerturbedEigenvector => {
            if spec.dim > x1.len() {
                return Err(Error::DimensionMismatch(format!(
                    "dimension {} exceeds order {}",
                    spec.dim,
                    x1.len()
                )));
            }
            let unit = x1 / c64(x1.norm(), 0.0);
            let completion = unitary_completion(&unit)?;
            let companions = completion.columns(0, spec.dim - 1).into_owned();
            perturbed_subspace(&unit, &companions, spec.epsilon, spec.seed)
        }
        SubspaceKind::SecondOrderKrylov => Ok(second_order_krylov(p, x1, spec.dim, spec.target)?.basis),
    }
}
