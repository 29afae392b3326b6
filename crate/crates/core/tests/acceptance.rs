//! Acceptance suite. Each test checks one criterion and writes a single
//! `PASS`/`FAIL` line straight to the process stdout, so the verdicts show up
//! in `cargo test` output without `--nocapture`.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::{log_uniform, random_matrix, random_pencil, random_unit, random_vector, rng, subspace_at_angle, uniform};
use num_complex::Complex64;
use qritz::example::{example31_basis, example31_pencil, golden_checks};
use qritz::kernels::{
    c64, eig_standard, orthonormality_defect, orthonormalize, real_vector, spectral_norm, svd, unitary_completion, ComplexMatrix,
    ComplexVector,
};
use qritz::pencil::{stack_vector, Eigenpair, QuadraticPencil};
use qritz::projection::project;
use qritz::solver::solve_full;
use qritz::study::{run_study, StudyInput, DEFAULT_EPS_LIST, DEFAULT_SEED};
use qritz::theory::{
    deflate, full_diagnostics, perturbation_triple, refined_residual_identity_check, sep, stacked_angle_inequality_check,
    stacked_subspace_angle, subspace_angle,
};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
/// Absolute slack for comparing a bound with an observed angle or distance;
/// covers rounding in the observed quantity only.
const ROUNDING_SLACK: f64 = 1e-14;

fn report(criterion: u32, passed: bool, elapsed: Duration, limit: Duration, detail: &str) {
    let passed = passed && elapsed < limit;
    let line = format!(
        "{} criterion {criterion}: {detail} [{:.3} s, limit {} s]\n",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    assert!(passed, "{}", line.trim_end());
}

/// Simple, nonzero eigenpairs of `p`.
fn simple_eigenpairs(p: &QuadraticPencil) -> Vec<Eigenpair> {
    solve_full(p)
        .unwrap()
        .into_iter()
        .filter(|e| !e.clustered && e.value.norm() > 1e-3)
        .collect()
}

fn pick<T: Clone>(r: &mut rand_chacha::ChaCha8Rng, items: &[T]) -> T {
    items[(uniform(r, 0.0, items.len() as f64) as usize).min(items.len() - 1)].clone()
}

#[test]
fn criterion_1_golden_example() {
    let start = Instant::now();
    let checks = golden_checks(0.0);
    let pp = project(&example31_pencil(), &example31_basis()).unwrap();
    let lp = pp.pencil().linearize();
    let d = deflate(&lp.a, &lp.b, ONE, &stack_vector(ONE, &real_vector(&[1.0, 0.0])).unwrap()).unwrap();
    let projected_sep = sep(ONE, &d.l, &d.n);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    let passed = failed.is_empty() && projected_sep <= 1e-12;
    let detail = format!(
        "{}/{} golden checks, sep(1,(L̂,N̂)) = {projected_sep:.2e} (≤ 1e-12){}",
        checks.len() - failed.len(),
        checks.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failed: {}", failed.join(", "))
        }
    );
    report(1, passed, start.elapsed(), Duration::from_secs(1), &detail);
}

#[test]
fn criterion_2_perturbed_example() {
    let start = Instant::now();
    let out = &run_study(&StudyInput::example31(), &[1e-12], DEFAULT_SEED)[0];
    let row = &out.row;
    let sin = row.sin_theta.unwrap();
    let value_err = row.ritz_value_err.unwrap_or(f64::INFINITY);
    let refined = row.refined_angle.unwrap_or(f64::INFINITY);
    let ritz = row.ritz_angle.unwrap_or(0.0);
    let passed = value_err <= 1e-8 && refined <= 100.0 * sin && ritz >= 1000.0 * sin;
    let detail = format!(
        "seed {DEFAULT_SEED}: sinθ₁ = {sin:.2e}, |μ₁−1| = {value_err:.2e}, sin∠(x₁,z̃₁) = {refined:.2e} ({:.1}·sinθ₁), sin∠(x₁,x̃₁) = {ritz:.2e} ({:.1e}·sinθ₁)",
        refined / sin,
        ritz / sin
    );
    report(2, passed, start.elapsed(), Duration::from_secs(1), &detail);
}

#[test]
fn criterion_3_bounds_dominate() {
    let start = Instant::now();
    let mut r = rng(3);
    let (mut elsner_violations, mut ritz_violations, mut refined_violations) = (0, 0, 0);
    let (mut ritz_checked, mut refined_checked, mut instances) = (0, 0, 0);
    while instances < 200 {
        let n = 2 + (uniform(&mut r, 0.0, 5.0) as usize).min(4);
        let p = random_pencil(&mut r, n);
        let pairs = simple_eigenpairs(&p);
        if pairs.is_empty() {
            continue;
        }
        let e = pick(&mut r, &pairs);
        let m = 1 + (uniform(&mut r, 0.0, (n - 1).min(4) as f64) as usize).min((n - 1).min(4) - 1);
        let sin = log_uniform(&mut r, -10.0, -2.0);
        let q = subspace_at_angle(&mut r, &e.vector, m, sin);
        let rep = full_diagnostics(&p, &q, e.value, Some(&e)).unwrap();
        instances += 1;
        match (rep.elsner_bound, rep.ritz_value_error) {
            (Some(b), Some(err)) if err <= b + ROUNDING_SLACK => {}
            _ => elsner_violations += 1,
        }
        if rep.sep_projected.is_some_and(|s| s > 1e-6) {
            ritz_checked += 1;
            match (rep.ritz_vector_bound, rep.ritz_angle) {
                (Some(b), Some(a)) if a <= b + ROUNDING_SLACK => {}
                _ => ritz_violations += 1,
            }
        }
        if rep.sep_full.is_some_and(|s| s > 1e-6) {
            refined_checked += 1;
            match (rep.refined_vector_bound, rep.refined_angle) {
                (Some(b), Some(a)) if a <= b + ROUNDING_SLACK => {}
                _ => refined_violations += 1,
            }
        }
    }
    let passed = elsner_violations + ritz_violations + refined_violations == 0 && ritz_checked > 0 && refined_checked > 0;
    let detail = format!(
        "{instances} instances; Ritz-value bound violated {elsner_violations}/{instances}, \
         Ritz-vector bound violated {ritz_violations}/{ritz_checked}, refined-vector bound violated {refined_violations}/{refined_checked}"
    );
    report(3, passed, start.elapsed(), Duration::from_secs(30), &detail);
}

#[test]
fn criterion_4_lemmas() {
    let start = Instant::now();
    let mut r = rng(4);

    let mut triples = 0;
    let mut triple_failures = 0;
    while triples < 100 {
        let n = 2 + (uniform(&mut r, 0.0, 5.0) as usize).min(4);
        let p = random_pencil(&mut r, n);
        let pairs = simple_eigenpairs(&p);
        if pairs.is_empty() {
            continue;
        }
        let e = pick(&mut r, &pairs);
        let m = 1 + (uniform(&mut r, 0.0, (n - 1) as f64) as usize).min(n - 2);
        let sin = log_uniform(&mut r, -10.0, -1.0);
        let q = subspace_at_angle(&mut r, &e.vector, m, sin);
        let t = perturbation_triple(&p, &project(&p, &q).unwrap(), e.value, &e.vector).unwrap();
        triples += 1;
        if !t.invariants_hold() {
            triple_failures += 1;
        }
    }

    let mut stacked_failures = 0;
    for _ in 0..500 {
        let n = 1 + (uniform(&mut r, 0.0, 6.0) as usize).min(5);
        let mut stacked = || {
            let lower = random_unit(&mut r, n);
            let upper = random_vector(&mut r, n) * c64(log_uniform(&mut r, -3.0, 1.0), 0.0);
            ComplexVector::from_fn(2 * n, |i, _| if i < n { upper[i] } else { lower[i - n] })
        };
        let (u, ut) = (stacked(), stacked());
        if !stacked_angle_inequality_check(&u, &ut).unwrap() {
            stacked_failures += 1;
        }
    }

    let mut angle_failures = 0;
    let mut identity_failures = 0;
    for _ in 0..200 {
        let n = 2 + (uniform(&mut r, 0.0, 5.0) as usize).min(4);
        let m = 1 + (uniform(&mut r, 0.0, (n - 1) as f64) as usize).min(n - 2);
        let q = orthonormalize(&random_matrix(&mut r, n, m)).unwrap();
        let x = random_unit(&mut r, n);
        let lambda = c64(common::normal(&mut r), common::normal(&mut r)) * log_uniform(&mut r, -2.0, 2.0);
        let plain = subspace_angle(&q, &x).unwrap().sin;
        if (stacked_subspace_angle(&q, lambda, &x).unwrap() - plain).abs() > 1e-12 {
            angle_failures += 1;
        }
        let p = random_pencil(&mut r, n);
        let z = random_unit(&mut r, m);
        if !refined_residual_identity_check(&p, &q, lambda, &z).unwrap() {
            identity_failures += 1;
        }
    }

    let passed = triple_failures + stacked_failures + angle_failures + identity_failures == 0;
    let detail = format!(
        "perturbation triple failures {triple_failures}/100, stacked inequality failures {stacked_failures}/500, \
         stacked-angle equality failures {angle_failures}/200, residual identity failures {identity_failures}/200"
    );
    report(4, passed, start.elapsed(), Duration::from_secs(10), &detail);
}

/// Every entry is at most ten times the smallest entry before it.
fn decreasing_within_envelope(values: &[f64]) -> bool {
    let mut best = f64::INFINITY;
    values.iter().all(|&v| {
        let ok = v <= 10.0 * best;
        best = best.min(v);
        ok
    })
}

#[test]
fn criterion_5_convergence_sweep() {
    let start = Instant::now();
    let mut inputs = vec![("example", StudyInput::example31())];
    for (seed, n, dim) in [(501u64, 5usize, 2usize), (502, 6, 3)] {
        let p = random_pencil(&mut rng(seed), n);
        inputs.push(("random", StudyInput::from_pencil(p, c64(0.0, 0.0), dim).unwrap()));
    }
    let at_1e10 = DEFAULT_EPS_LIST.iter().position(|&e| e == 1e-10).unwrap();
    let mut passed = true;
    let mut stagnant = 0;
    let mut parts = Vec::new();
    for (i, (name, input)) in inputs.iter().enumerate() {
        let rows = run_study(input, &DEFAULT_EPS_LIST, DEFAULT_SEED);
        let value_err: Vec<f64> = rows.iter().map(|o| o.row.ritz_value_err.unwrap_or(f64::INFINITY)).collect();
        let refined: Vec<f64> = rows.iter().map(|o| o.row.refined_angle.unwrap_or(f64::INFINITY)).collect();
        stagnant += rows.iter().filter(|o| o.verdict.is_some_and(|v| v.ritz_stagnant)).count();
        let ok = decreasing_within_envelope(&value_err)
            && decreasing_within_envelope(&refined)
            && value_err[at_1e10] <= 1e-9
            && refined[at_1e10] <= 1e-9;
        passed &= ok;
        parts.push(format!(
            "{name} #{i}: |μ₁−λ₁| {:.1e} and sin∠(x₁,z̃₁) {:.1e} at ε=1e-10{}",
            value_err[at_1e10],
            refined[at_1e10],
            if ok { "" } else { " (not converging)" }
        ));
    }
    passed &= stagnant > 0;
    let detail = format!("{}; {stagnant} RITZ-STAGNANT rows", parts.join("; "));
    report(5, passed, start.elapsed(), Duration::from_secs(10), &detail);
}

#[test]
fn criterion_6_kernel_contracts() {
    let start = Instant::now();
    let mut r = rng(6);
    let (mut eig_worst, mut svd_worst, mut orth_worst) = (0.0f64, 0.0f64, 0.0f64);
    for n in 1..=16 {
        for _ in 0..4 {
            let c = random_matrix(&mut r, n, n);
            let norm = spectral_norm(&c);
            for p in eig_standard(&c).unwrap().iter().filter(|p| !p.clustered) {
                eig_worst = eig_worst.max((&c * &p.vector - &p.vector * p.value).norm() / norm);
            }

            let cols = 1 + (uniform(&mut r, 0.0, 16.0) as usize).min(15);
            let g = random_matrix(&mut r, n, cols);
            let s = svd(&g).unwrap();
            let mut sigma = ComplexMatrix::zeros(n, cols);
            for i in 0..n.min(cols) {
                sigma[(i, i)] = c64(s.sigma[i], 0.0);
            }
            svd_worst = svd_worst.max(spectral_norm(&(&g - &s.u * sigma * s.v.adjoint())) / s.sigma[0]);

            let k = 1 + (uniform(&mut r, 0.0, n as f64) as usize).min(n - 1);
            let q = orthonormalize(&random_matrix(&mut r, n, k)).unwrap();
            let x = unitary_completion(&random_unit(&mut r, n)).unwrap();
            orth_worst = orth_worst.max(orthonormality_defect(&q)).max(orthonormality_defect(&x));
        }
    }
    let passed = eig_worst <= 1e-10 && svd_worst <= 1e-12 && orth_worst <= 1e-13;
    let detail = format!(
        "sizes 1..=16: eigen residual {eig_worst:.1e}·‖C‖ (≤ 1e-10), SVD reconstruction {svd_worst:.1e}·‖G‖ (≤ 1e-12), \
         orthonormality defect {orth_worst:.1e} (≤ 1e-13)"
    );
    report(6, passed, start.elapsed(), Duration::from_secs(30), &detail);
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = qritz::cli::run(std::iter::once("qritz").chain(args.iter().copied()), &mut out, &mut err);
    (code, out)
}

#[test]
fn criterion_7_determinism() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let csv = |name: &str| dir.path().join(name).display().to_string();
    let (a_path, b_path) = (csv("a.csv"), csv("b.csv"));
    let study = |path: &str| run_cli(&["study", "--builtin", "example31", "--seed", "11", "--out", path]);
    let (code_a, out_a) = study(&a_path);
    let (code_b, out_b) = study(&b_path);
    let files_equal = std::fs::read(&a_path).unwrap() == std::fs::read(&b_path).unwrap();
    let (code_c, out_c) = run_cli(&["study", "--builtin", "example31", "--eps-list", "1e-4,1e-8"]);
    let (_, out_d) = run_cli(&["study", "--builtin", "example31", "--eps-list", "1e-4,1e-8"]);
    let (code_e, out_e) = run_cli(&["example31"]);
    let (_, out_f) = run_cli(&["example31"]);
    let codes_ok = [code_a, code_b, code_c, code_e].iter().all(|&c| c == 0);
    let passed = codes_ok && files_equal && out_a == out_b && out_c == out_d && out_e == out_f;
    let detail = format!(
        "study CSV files identical: {files_equal}; study stdout identical: {}; example31 stdout identical: {}",
        out_a == out_b && out_c == out_d,
        out_e == out_f
    );
    report(7, passed, start.elapsed(), Duration::from_secs(30), &detail);
}
