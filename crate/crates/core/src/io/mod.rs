//! Matrix Market input/output and the convergence-study CSV.

mod matrix_market;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub use matrix_market::{format_matrix_market, parse_matrix_market, read_matrix_market, write_matrix_market};

/// Marker written for a quantity that could not be computed.
pub const NOT_AVAILABLE: &str = "NA";

/// 17 significant digits in scientific notation; `inf` for the bound sentinel.
pub fn format_number(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// [`format_number`], or [`NOT_AVAILABLE`] for `None`.
pub fn format_optional(x: Option<f64>) -> String {
    x.map_or_else(|| NOT_AVAILABLE.to_string(), format_number)
}

/// One line of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StudyRow {
    pub epsilon: f64,
    pub sin_theta: Option<f64>,
    pub ritz_value_err: Option<f64>,
    pub ritz_angle: Option<f64>,
    pub refined_angle: Option<f64>,
    pub ritz_residual: Option<f64>,
    pub refined_residual: Option<f64>,
    pub sep_projected: Option<f64>,
    pub sep_full: Option<f64>,
    pub elsner_bound: Option<f64>,
    pub thm23_bound: Option<f64>,
    pub thm33_bound: Option<f64>,
}

pub const STUDY_HEADER: [&str; 12] = [
    "epsilon",
    "sin_theta",
    "ritz_value_err",
    "ritz_angle",
    "refined_angle",
    "ritz_residual",
    "refined_residual",
    "sep_projected",
    "sep_full",
    "elsner_bound",
    "thm23_bound",
    "thm33_bound",
];

impl StudyRow {
    /// A row whose every measured field is unavailable.
    pub fn failed(epsilon: f64) -> Self {
        Self {
            epsilon,
            ..Self::default()
        }
    }

    fn fields(&self) -> [String; 12] {
        [
            format_number(self.epsilon),
            format_optional(self.sin_theta),
            format_optional(self.ritz_value_err),
            format_optional(self.ritz_angle),
            format_optional(self.refined_angle),
            format_optional(self.ritz_residual),
            format_optional(self.refined_residual),
            format_optional(self.sep_projected),
            format_optional(self.sep_full),
            format_optional(self.elsner_bound),
            format_optional(self.thm23_bound),
            format_optional(self.thm33_bound),
        ]
    }
}

/// Header line plus one line per row.
pub fn format_study_csv(rows: &[StudyRow]) -> String {
    let mut out = STUDY_HEADER.join(",");
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.fields().join(","));
    }
    out
}

pub fn write_study_csv(rows: &[StudyRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_study_csv(rows)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
