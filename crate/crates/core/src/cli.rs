//! Command-line surface. Every command writes to the given streams and
//! returns its exit code, so the binary is a thin wrapper.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 I/O failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::error::Error;
use crate::example::golden_checks;
use crate::io::{format_number, format_optional, format_study_csv, read_matrix_market, write_study_csv};
use crate::kernels::{c64, orthonormalize, ComplexMatrix, ComplexVector, SingularMode};
use crate::pencil::{Eigenpair, QuadraticPencil};
use crate::projection::{check_orthonormal, project, ritz_pairs, RitzPair};
use crate::refined::refined_ritz;
use crate::solver::solve_full;
use crate::study::{run_study, StudyInput, DEFAULT_EPS_LIST, DEFAULT_SEED};
use crate::theory::{full_diagnostics, DiagnosticsReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Parse { .. } | Error::UnsupportedField(_) => EXIT_IO,
        Error::DimensionMismatch(_) => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (`j` is accepted for `i`).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("invalid complex number '{s}'");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().map(|re| c64(re, 0.0)).map_err(|_| bad());
    };
    // split before the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let parse_imag = |part: &str| -> Result<f64, String> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            p => p.parse().map_err(|_| bad()),
        }
    };
    let z = match split {
        Some(k) => c64(body[..k].parse().map_err(|_| bad())?, parse_imag(&body[k..])?),
        None => c64(0.0, parse_imag(body)?),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(bad())
    }
}

fn parse_epsilon(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        _ => Err(format!("perturbation magnitude '{s}' must be a finite nonnegative number")),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qritz",
    version,
    about = "Rayleigh-Ritz and refined Ritz extraction for quadratic eigenvalue problems"
)]
pub struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PencilFiles {
    /// Mass matrix M (Matrix Market).
    #[arg(long, env = "QRITZ_MASS")]
    pub mass: Option<PathBuf>,
    /// Damping matrix D (Matrix Market).
    #[arg(long, env = "QRITZ_DAMPING")]
    pub damping: Option<PathBuf>,
    /// Stiffness matrix K (Matrix Market).
    #[arg(long, env = "QRITZ_STIFFNESS")]
    pub stiffness: Option<PathBuf>,
}

impl PencilFiles {
    fn is_empty(&self) -> bool {
        self.mass.is_none() && self.damping.is_none() && self.stiffness.is_none()
    }

    fn load(&self) -> std::result::Result<QuadraticPencil, Failure> {
        let (Some(m), Some(d), Some(k)) = (&self.mass, &self.damping, &self.stiffness) else {
            return Err(Failure::Usage("--mass, --damping and --stiffness are all required".into()));
        };
        let pencil = QuadraticPencil::new(read_matrix_market(m)?, read_matrix_market(d)?, read_matrix_market(k)?)?;
        Ok(pencil)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Example31,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    FullSvd,
    CrossProduct,
}

impl From<ModeArg> for SingularMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::FullSvd => SingularMode::FullSvd,
            ModeArg::CrossProduct => SingularMode::CrossProduct,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dense solve; prints the eigenpairs nearest the target.
    Solve {
        #[command(flatten)]
        files: PencilFiles,
        #[arg(long, env = "QRITZ_TARGET", default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
        target: Complex64,
        /// Number of eigenpairs to print.
        #[arg(long, env = "QRITZ_COUNT", default_value_t = 1)]
        count: usize,
    },
    /// Rayleigh-Ritz projection onto a subspace, with diagnostics.
    Project {
        #[command(flatten)]
        files: PencilFiles,
        /// Basis of the projection subspace (Matrix Market, n×m).
        #[arg(long, env = "QRITZ_SUBSPACE")]
        subspace: PathBuf,
        #[arg(long, env = "QRITZ_TARGET", default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
        target: Complex64,
        /// Also print the refined Ritz vector.
        #[arg(long)]
        refined: bool,
        /// Orthonormalize the basis instead of rejecting it.
        #[arg(long)]
        orthonormalize: bool,
        /// Singular-vector method for the refined extraction.
        #[arg(long, env = "QRITZ_MODE", value_enum, default_value = "full-svd")]
        mode: ModeArg,
        /// Largest order for which the reference eigenpair is computed densely.
        #[arg(long, env = "QRITZ_DENSE_LIMIT", default_value_t = 400)]
        dense_limit: usize,
    },
    /// Convergence study over a list of perturbation magnitudes.
    Study {
        #[command(flatten)]
        files: PencilFiles,
        /// Use a built-in pencil instead of matrix files.
        #[arg(long, value_enum, env = "QRITZ_BUILTIN")]
        builtin: Option<Builtin>,
        /// Comma-separated perturbation magnitudes (default 1e-2,1e-3,…,1e-12).
        #[arg(long, env = "QRITZ_EPS_LIST", value_delimiter = ',', value_parser = parse_epsilon)]
        eps_list: Vec<f64>,
        /// Seed for the Gaussian perturbation; every ε reuses it.
        #[arg(long, env = "QRITZ_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the CSV here instead of standard output.
        #[arg(long, env = "QRITZ_OUT")]
        out: Option<PathBuf>,
        /// Target for selecting the eigenpair of a file pencil.
        #[arg(long, env = "QRITZ_TARGET", default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
        target: Complex64,
        /// Subspace dimension for a file pencil.
        #[arg(long, env = "QRITZ_DIM", default_value_t = 2)]
        dim: usize,
    },
    /// Golden-value checks on the built-in example.
    Example31 {
        /// Add this to every entry of D first (negative control).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        perturb_d: f64,
    },
}

/// Why a command did not succeed.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn num(z: Complex64) -> String {
    format!("{} {}", format_number(z.re), format_number(z.im))
}

fn write_vector(text: &mut String, label: &str, x: &ComplexVector) {
    for (i, z) in x.iter().enumerate() {
        let _ = writeln!(text, "  {label}[{}] = {}", i + 1, num(*z));
    }
}

/// Indices sorted by distance to `target`, then by position.
fn order_by_distance(values: &[Complex64], target: Complex64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| (values[a] - target).norm().total_cmp(&(values[b] - target).norm()));
    idx
}

fn cmd_solve(files: &PencilFiles, target: Complex64, count: usize, out: &mut String) -> CmdResult {
    let p = files.load()?;
    let pairs: Vec<Eigenpair> = solve_full(&p)?;
    let values: Vec<Complex64> = pairs.iter().map(|e| e.value).collect();
    let order = order_by_distance(&values, target);
    let _ = writeln!(
        out,
        "order {} with {} eigenvalues; nearest {} to target {}",
        p.n(),
        pairs.len(),
        count.min(pairs.len()),
        num(target)
    );
    for (rank, &i) in order.iter().take(count).enumerate() {
        let e = &pairs[i];
        let _ = writeln!(out, "eigenpair {}", rank + 1);
        let _ = writeln!(out, "  value = {}", num(e.value));
        let _ = writeln!(out, "  residual = {}", format_number(e.residual_norm));
        let _ = writeln!(out, "  clustered = {}", e.clustered);
        write_vector(out, "x", &e.vector);
    }
    Ok(EXIT_OK)
}

fn write_report(out: &mut String, r: &DiagnosticsReport) {
    let lines: [(&str, String); 17] = [
        ("lambda1", num(r.lambda1)),
        ("mu1", r.mu1.map_or_else(|| "NA".into(), num)),
        ("sin_theta1", format_number(r.sin_theta1)),
        ("tan_theta1", format_number(r.tan_theta1)),
        ("ritz_value_error", format_optional(r.ritz_value_error)),
        ("ritz_angle", format_optional(r.ritz_angle)),
        ("refined_angle", format_optional(r.refined_angle)),
        ("ritz_residual", format_optional(r.ritz_residual)),
        ("refined_residual", format_optional(r.refined_residual)),
        ("ritz_clustered", r.ritz_clustered.to_string()),
        ("refined_ambiguous", r.refined_ambiguous.to_string()),
        ("sep_full", format_optional(r.sep_full)),
        ("sep_projected", format_optional(r.sep_projected)),
        ("elsner_bound", format_optional(r.elsner_bound)),
        ("ritz_vector_bound", format_optional(r.ritz_vector_bound)),
        ("refined_vector_bound", format_optional(r.refined_vector_bound)),
        (
            "failures",
            if r.failures.is_empty() {
                "none".into()
            } else {
                r.failures.join("; ")
            },
        ),
    ];
    let _ = writeln!(out, "diagnostics");
    for (k, v) in lines {
        let _ = writeln!(out, "  {k} = {v}");
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_project(
    files: &PencilFiles,
    subspace: &PathBuf,
    target: Complex64,
    refined: bool,
    fix_basis: bool,
    mode: SingularMode,
    dense_limit: usize,
    out: &mut String,
) -> CmdResult {
    let p = files.load()?;
    let mut q: ComplexMatrix = read_matrix_market(subspace)?;
    if let Err(e) = check_orthonormal(&q) {
        if !fix_basis {
            return Err(Failure::Usage(format!("{e}; rerun with --orthonormalize to fix the basis")));
        }
        q = orthonormalize(&q)?;
    }
    let pp = project(&p, &q)?;
    let pairs: Vec<RitzPair> = ritz_pairs(&pp, &p)?;
    let values: Vec<Complex64> = pairs.iter().map(|r| r.value).collect();
    let order = order_by_distance(&values, target);
    let _ = writeln!(
        out,
        "order {}, subspace dimension {}, target {}",
        p.n(),
        pp.dim(),
        num(target)
    );
    let _ = writeln!(out, "ritz values (nearest target first)");
    for &i in &order {
        let r = &pairs[i];
        let _ = writeln!(
            out,
            "  {}  residual = {}{}",
            num(r.value),
            format_number(r.residual_norm),
            if r.clustered { "  clustered" } else { "" }
        );
    }
    let selected = &pairs[order[0]];
    let _ = writeln!(out, "selected ritz value = {}", num(selected.value));
    write_vector(out, "ritz_vector", &selected.vector);
    if refined {
        let z = refined_ritz(&p, &q, selected.value, mode)?;
        let _ = writeln!(out, "refined ({})", z.mode);
        let _ = writeln!(out, "  sigma_min = {}", format_number(z.sigma_min));
        let _ = writeln!(out, "  residual = {}", format_number(z.residual_norm));
        let _ = writeln!(out, "  ambiguous = {}", z.ambiguous);
        write_vector(out, "zhat", &z.coeff);
        write_vector(out, "refined_vector", &z.vector);
    }
    if p.n() <= dense_limit {
        let report = full_diagnostics(&p, &q, target, None)?;
        write_report(out, &report);
    } else {
        let _ = writeln!(
            out,
            "diagnostics skipped: order {} exceeds --dense-limit {dense_limit}",
            p.n()
        );
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_study(
    files: &PencilFiles,
    builtin: Option<Builtin>,
    eps_list: &[f64],
    seed: u64,
    csv_path: Option<&PathBuf>,
    target: Complex64,
    dim: usize,
    out: &mut String,
) -> CmdResult {
    let input = match (builtin, files.is_empty()) {
        (Some(Builtin::Example31), true) => StudyInput::example31(),
        (None, false) => StudyInput::from_pencil(files.load()?, target, dim)?,
        (Some(_), false) => return Err(Failure::Usage("--builtin cannot be combined with matrix files".into())),
        (None, true) => {
            return Err(Failure::Usage(
                "give --builtin example31 or --mass/--damping/--stiffness".into(),
            ))
        }
    };
    let eps: Vec<f64> = if eps_list.is_empty() {
        DEFAULT_EPS_LIST.to_vec()
    } else {
        eps_list.to_vec()
    };
    let outcomes = run_study(&input, &eps, seed);
    let rows: Vec<_> = outcomes.iter().map(|o| o.row).collect();
    match csv_path {
        Some(path) => write_study_csv(&rows, path)?,
        None => out.push_str(&format_study_csv(&rows)),
    }
    for o in &outcomes {
        let _ = writeln!(out, "{}", o.verdict_line());
    }
    let all_ok = outcomes.iter().all(|o| o.verdict.is_some());
    Ok(if all_ok { EXIT_OK } else { EXIT_NUMERICAL })
}

fn cmd_example31(perturb_d: f64, out: &mut String) -> CmdResult {
    let checks = golden_checks(perturb_d);
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{status}  {}  error = {}  tolerance = {}",
            c.name,
            format_number(c.error),
            format_number(c.tolerance)
        );
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(out, "{passed}/{} checks passed", checks.len());
    Ok(if passed == checks.len() { EXIT_OK } else { EXIT_NUMERICAL })
}

fn dispatch(cli: &Cli, out: &mut String) -> CmdResult {
    match &cli.command {
        Command::Solve { files, target, count } => cmd_solve(files, *target, *count, out),
        Command::Project {
            files,
            subspace,
            target,
            refined,
            orthonormalize,
            mode,
            dense_limit,
        } => cmd_project(
            files,
            subspace,
            *target,
            *refined,
            *orthonormalize,
            (*mode).into(),
            *dense_limit,
            out,
        ),
        Command::Study {
            files,
            builtin,
            eps_list,
            seed,
            out: csv,
            target,
            dim,
        } => cmd_study(files, *builtin, eps_list, *seed, csv.as_ref(), *target, *dim, out),
        Command::Example31 { perturb_d } => cmd_example31(*perturb_d, out),
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    // a second initialization (e.g. repeated in-process runs) is harmless
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .parse_env("QRITZ_LOG")
        .try_init();
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Normal output goes to `stdout`, diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    init_logging(cli.verbose);
    let mut out = String::new();
    let result = dispatch(&cli, &mut out);
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return EXIT_IO;
    }
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
