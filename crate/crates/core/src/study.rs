//! Convergence study: perturb a subspace containing the eigenvector by a
//! seeded Gaussian matrix scaled by ε and record how Ritz and refined Ritz
//! extraction respond.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::example::{example31_basis, example31_eigenvector, example31_pencil, EXAMPLE31_EIGENVALUE};
use crate::io::{format_number, StudyRow};
use crate::kernels::{c64, unitary_completion, ComplexMatrix};
use crate::pencil::{Eigenpair, QuadraticPencil};
use crate::solver::{select_eigenpair, solve_full};
use crate::subspace::perturbed_subspace;
use crate::theory::full_diagnostics;

/// `1e-2, 1e-3, …, 1e-12`.
pub const DEFAULT_EPS_LIST: [f64; 11] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12];
pub const DEFAULT_SEED: u64 = 20070611;
/// Ratio between an extracted angle and `sinθ₁` above which an extraction is
/// considered to lag behind the subspace.
pub const VERDICT_RATIO: f64 = 100.0;
/// Angles at or below this are rounding noise and never count as lagging.
pub const VERDICT_FLOOR: f64 = 1e-13;

/// The pencil, the reference eigenpair and the columns that complete the
/// unperturbed subspace.
#[derive(Debug, Clone)]
pub struct StudyInput {
    pub pencil: QuadraticPencil,
    pub reference: Eigenpair,
    /// `n×(m−1)`; the unperturbed subspace is `[x₁, companions]`.
    pub companions: ComplexMatrix,
}

impl StudyInput {
    /// The built-in example with its exact eigenpair `(1, e₃)` and the second
    /// column of its exact basis.
    pub fn example31() -> Self {
        let pencil = example31_pencil();
        let vector = example31_eigenvector();
        let (_, residual_norm) = pencil
            .residual(c64(EXAMPLE31_EIGENVALUE, 0.0), &vector)
            .expect("orders agree");
        Self {
            pencil,
            reference: Eigenpair {
                value: c64(EXAMPLE31_EIGENVALUE, 0.0),
                vector,
                residual_norm,
                clustered: false,
            },
            companions: example31_basis().columns(1, 1).into_owned(),
        }
    }

    /// The eigenpair of `pencil` nearest `target` from a dense solve, padded to
    /// dimension `dim` by the leading columns of its unitary completion.
    pub fn from_pencil(pencil: QuadraticPencil, target: Complex64, dim: usize) -> Result<Self> {
        let n = pencil.n();
        if dim == 0 || dim > n {
            return Err(Error::DimensionMismatch(format!("subspace dimension {dim} for order {n}")));
        }
        let reference = select_eigenpair(&solve_full(&pencil)?, target)?;
        let companions = unitary_completion(&reference.vector)?.columns(0, dim - 1).into_owned();
        Ok(Self {
            pencil,
            reference,
            companions,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    /// The Ritz vector lags the subspace by more than [`VERDICT_RATIO`].
    pub ritz_stagnant: bool,
    /// The refined vector keeps up with the subspace.
    pub refined_ok: bool,
}

impl Verdict {
    pub fn classify(sin_theta: f64, ritz_angle: f64, refined_angle: f64) -> Self {
        let limit = (VERDICT_RATIO * sin_theta).max(VERDICT_FLOOR);
        Self {
            ritz_stagnant: ritz_angle > limit,
            refined_ok: refined_angle <= limit,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ritz = if self.ritz_stagnant { "RITZ-STAGNANT" } else { "RITZ-OK" };
        let refined = if self.refined_ok { "REFINED-OK" } else { "REFINED-LAGGING" };
        write!(f, "{ritz} {refined}")
    }
}

/// One evaluated ε.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyOutcome {
    pub row: StudyRow,
    /// `None` when the angles needed for a verdict are unavailable.
    pub verdict: Option<Verdict>,
    /// Errors from the row, one per failed stage.
    pub failures: Vec<String>,
}

impl StudyOutcome {
    pub fn verdict_line(&self) -> String {
        let eps = format_number(self.row.epsilon);
        match self.verdict {
            Some(v) if self.failures.is_empty() => format!("eps={eps} {v}"),
            Some(v) => format!("eps={eps} {v} (partial: {})", self.failures.join("; ")),
            None => format!("eps={eps} FAILED {}", self.failures.join("; ")),
        }
    }
}

/// Evaluates a single ε. Every ε uses the same seeded noise matrix, so rows
/// differ only by its scale.
pub fn run_row(input: &StudyInput, epsilon: f64, seed: u64) -> StudyOutcome {
    let x1 = &input.reference.vector;
    let report = perturbed_subspace(x1, &input.companions, epsilon, seed)
        .and_then(|q| full_diagnostics(&input.pencil, &q, input.reference.value, Some(&input.reference)));
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            return StudyOutcome {
                row: StudyRow::failed(epsilon),
                verdict: None,
                failures: vec![e.to_string()],
            };
        }
    };
    let row = StudyRow {
        epsilon,
        sin_theta: Some(report.sin_theta1),
        ritz_value_err: report.ritz_value_error,
        ritz_angle: report.ritz_angle,
        refined_angle: report.refined_angle,
        ritz_residual: report.ritz_residual,
        refined_residual: report.refined_residual,
        sep_projected: report.sep_projected,
        sep_full: report.sep_full,
        elsner_bound: report.elsner_bound,
        thm23_bound: report.ritz_vector_bound,
        thm33_bound: report.refined_vector_bound,
    };
    let verdict = match (report.ritz_angle, report.refined_angle) {
        (Some(r), Some(z)) => Some(Verdict::classify(report.sin_theta1, r, z)),
        _ => None,
    };
    StudyOutcome {
        row,
        verdict,
        failures: report.failures,
    }
}

/// Rows in the order of `eps_list`.
pub fn run_study(input: &StudyInput, eps_list: &[f64], seed: u64) -> Vec<StudyOutcome> {
    eps_list.iter().map(|&eps| run_row(input, eps, seed)).collect()
}
