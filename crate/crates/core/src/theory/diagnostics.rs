use num_complex::Complex64;

use crate::error::Result;
use crate::kernels::{sin_angle, spectral_norm, ComplexMatrix, SingularMode};
use crate::pencil::{stack_vector, Eigenpair, QuadraticPencil};
use crate::projection::{project, ritz_pairs, select_ritz};
use crate::refined::refined_ritz;
use crate::solver::{select_eigenpair, solve_full};

use super::angles::subspace_angle;
use super::bounds::{elsner_bound, perturbation_triple, refined_vector_bound, ritz_vector_bound};
use super::deflation::{deflate, sep};

/// Angles, separations and a-priori bounds for one eigenpair `(λ₁, x₁)` and
/// one projection subspace.
///
/// `None` marks a quantity that could not be computed because an earlier
/// stage failed (see `failures`); `f64::INFINITY` in a bound means its
/// separation hypothesis fails numerically.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub lambda1: Complex64,
    pub mu1: Option<Complex64>,
    pub sin_theta1: f64,
    pub tan_theta1: f64,
    /// `|μ₁ − λ₁|`.
    pub ritz_value_error: Option<f64>,
    /// `sin∠(x₁, x̃₁)`.
    pub ritz_angle: Option<f64>,
    /// `sin∠(x₁, z̃₁)`.
    pub refined_angle: Option<f64>,
    pub ritz_residual: Option<f64>,
    pub refined_residual: Option<f64>,
    pub ritz_clustered: bool,
    pub refined_ambiguous: bool,
    /// `sep(μ₁, (L, N))` from the unprojected linearization.
    pub sep_full: Option<f64>,
    /// `sep(λ₁, (L̂, N̂))` from the projected linearization.
    pub sep_projected: Option<f64>,
    pub perturbation_norms: Option<[f64; 3]>,
    pub elsner_bound: Option<f64>,
    pub ritz_vector_bound: Option<f64>,
    pub refined_vector_bound: Option<f64>,
    /// `stage: error` for every stage that failed.
    pub failures: Vec<String>,
}

fn record<T>(failures: &mut Vec<String>, stage: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            log::debug!("{stage} failed: {e}");
            failures.push(format!("{stage}: {e}"));
            None
        }
    }
}

/// Full diagnostic pass for the eigenpair nearest `target`.
///
/// With `reference = None`, the eigenpair is computed by a dense solve of
/// `p`. The Ritz value compared against it is the one nearest `λ₁`.
pub fn full_diagnostics(
    p: &QuadraticPencil,
    q: &ComplexMatrix,
    target: Complex64,
    reference: Option<&Eigenpair>,
) -> Result<DiagnosticsReport> {
    let reference = match reference {
        Some(e) => e.clone(),
        None => select_eigenpair(&solve_full(p)?, target)?,
    };
    let lambda1 = reference.value;
    let x1 = &reference.vector;
    let angle = subspace_angle(q, x1)?;
    let theta = angle.radians();
    let mut failures = Vec::new();
    let mut report = DiagnosticsReport {
        lambda1,
        mu1: None,
        sin_theta1: angle.sin,
        tan_theta1: angle.tan(),
        ritz_value_error: None,
        ritz_angle: None,
        refined_angle: None,
        ritz_residual: None,
        refined_residual: None,
        ritz_clustered: false,
        refined_ambiguous: false,
        sep_full: None,
        sep_projected: None,
        perturbation_norms: None,
        elsner_bound: None,
        ritz_vector_bound: None,
        refined_vector_bound: None,
        failures: Vec::new(),
    };

    let pp = project(p, q)?;
    let ritz = record(
        &mut failures,
        "ritz",
        ritz_pairs(&pp, p).and_then(|pairs| select_ritz(&pairs, lambda1)),
    );
    let lp = p.linearize();

    if let Some(ritz) = &ritz {
        let mu1 = ritz.value;
        report.mu1 = Some(mu1);
        report.ritz_value_error = Some((mu1 - lambda1).norm());
        report.ritz_angle = record(&mut failures, "ritz angle", sin_angle(x1, &ritz.vector));
        report.ritz_residual = Some(ritz.residual_norm);
        report.ritz_clustered = ritz.clustered;

        if let Some(refined) = record(&mut failures, "refined", refined_ritz(p, q, mu1, SingularMode::FullSvd)) {
            report.refined_angle = record(&mut failures, "refined angle", sin_angle(x1, &refined.vector));
            report.refined_residual = Some(refined.residual_norm);
            report.refined_ambiguous = refined.ambiguous;
        }

        let full = stack_vector(lambda1, x1).and_then(|v1| deflate(&lp.a, &lp.b, lambda1, &v1));
        report.sep_full = record(&mut failures, "full deflation", full).map(|d| sep(mu1, &d.l, &d.n));

        let plp = pp.pencil().linearize();
        let projected = stack_vector(mu1, &ritz.coeff).and_then(|v| deflate(&plp.a, &plp.b, mu1, &v));
        report.sep_projected = record(&mut failures, "projected deflation", projected).map(|d| sep(lambda1, &d.l, &d.n));

        report.ritz_vector_bound = report
            .sep_projected
            .map(|s| ritz_vector_bound(lambda1, p.m0(), p.d0(), p.k0(), theta, s));
        let norm_b = spectral_norm(&lp.b);
        let norm_a_minus = spectral_norm(&(&lp.a - &lp.b * mu1));
        report.refined_vector_bound = report
            .sep_full
            .map(|s| refined_vector_bound(lambda1, mu1, norm_b, norm_a_minus, theta, s));
    }

    let triple = record(&mut failures, "perturbation", perturbation_triple(p, &pp, lambda1, x1));
    if let Some(t) = &triple {
        report.perturbation_norms = Some(t.norms);
        report.elsner_bound = record(&mut failures, "elsner", elsner_bound(&pp, t));
    }
    report.failures = failures;
    Ok(report)
}
