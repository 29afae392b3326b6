use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{c64, ensure_finite, ComplexMatrix};

use super::format_number;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Array,
    Coordinate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

impl Symmetry {
    /// Value stored at `(j, i)` when `(i, j)` holds `z`.
    fn mirror(self, z: Complex64) -> Complex64 {
        match self {
            Symmetry::General | Symmetry::Symmetric => z,
            Symmetry::SkewSymmetric => -z,
            Symmetry::Hermitian => z.conj(),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_header(line: &str) -> Result<(Layout, Field, Symmetry)> {
    let lower = line.to_ascii_lowercase();
    let words: Vec<&str> = lower.split_whitespace().collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(parse_err(1, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'"));
    }
    let layout = match words[2] {
        "array" => Layout::Array,
        "coordinate" => Layout::Coordinate,
        other => return Err(parse_err(1, format!("unknown format '{other}'"))),
    };
    let field = match words[3] {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        other => return Err(Error::UnsupportedField(other.to_string())),
    };
    let symmetry = match words[4] {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(parse_err(1, format!("unknown symmetry '{other}'"))),
    };
    if symmetry == Symmetry::Hermitian && field != Field::Complex {
        return Err(parse_err(1, "hermitian symmetry requires the complex field"));
    }
    Ok((layout, field, symmetry))
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

fn parse_value<'a>(tokens: &mut impl Iterator<Item = &'a str>, field: Field, line: usize) -> Result<Complex64> {
    let mut next = |what: &str| -> Result<f64> {
        let tok = tokens.next().ok_or_else(|| parse_err(line, format!("missing {what}")))?;
        let v: f64 = tok.parse().map_err(|_| parse_err(line, format!("invalid number '{tok}'")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(parse_err(line, format!("non-finite value '{tok}'")))
        }
    };
    match field {
        Field::Real | Field::Integer => Ok(c64(next("value")?, 0.0)),
        Field::Complex => {
            let re = next("real part")?;
            let im = next("imaginary part")?;
            Ok(c64(re, im))
        }
    }
}

/// Parses Matrix Market text into a dense matrix, expanding symmetric,
/// skew-symmetric and Hermitian storage.
pub fn parse_matrix_market(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let (layout, field, symmetry) = parse_header(header)?;
    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body.next().ok_or_else(|| parse_err(2, "missing size line"))?;
    let mut tokens = size.split_whitespace();
    let rows = parse_usize(tokens.next(), size_line, "row count")?;
    let cols = parse_usize(tokens.next(), size_line, "column count")?;
    if rows == 0 || cols == 0 {
        return Err(parse_err(size_line, "matrix dimensions must be positive"));
    }
    if symmetry != Symmetry::General && rows != cols {
        return Err(parse_err(size_line, "symmetric storage requires a square matrix"));
    }
    let mut a = ComplexMatrix::zeros(rows, cols);
    let mut last_line = size_line;
    match layout {
        Layout::Coordinate => {
            let nnz = parse_usize(tokens.next(), size_line, "entry count")?;
            let mut seen = 0;
            for (line, text) in body {
                last_line = line;
                if seen == nnz {
                    return Err(parse_err(line, "more entries than declared"));
                }
                let mut tok = text.split_whitespace();
                let i = parse_usize(tok.next(), line, "row index")?;
                let j = parse_usize(tok.next(), line, "column index")?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(parse_err(line, format!("index ({i}, {j}) out of range")));
                }
                let z = parse_value(&mut tok, field, line)?;
                let (i, j) = (i - 1, j - 1);
                if symmetry != Symmetry::General && i < j {
                    return Err(parse_err(line, "symmetric storage must list the lower triangle"));
                }
                a[(i, j)] += z;
                if symmetry != Symmetry::General && i != j {
                    a[(j, i)] += symmetry.mirror(z);
                }
                seen += 1;
            }
            if seen != nnz {
                return Err(parse_err(last_line, format!("expected {nnz} entries, found {seen}")));
            }
        }
        Layout::Array => {
            // column-major; symmetric storage lists the lower triangle only
            let mut slots = Vec::new();
            for j in 0..cols {
                let first = match symmetry {
                    Symmetry::General => 0,
                    Symmetry::SkewSymmetric => j + 1,
                    _ => j,
                };
                slots.extend((first..rows).map(|i| (i, j)));
            }
            let mut next_slot = slots.iter();
            for (line, text) in body {
                last_line = line;
                let mut tok = text.split_whitespace();
                let z = parse_value(&mut tok, field, line)?;
                let &(i, j) = next_slot
                    .next()
                    .ok_or_else(|| parse_err(line, "more entries than the size allows"))?;
                a[(i, j)] = z;
                if symmetry != Symmetry::General && i != j {
                    a[(j, i)] = symmetry.mirror(z);
                }
            }
            if next_slot.next().is_some() {
                return Err(parse_err(last_line, format!("expected {} entries", slots.len())));
            }
        }
    }
    if symmetry == Symmetry::Hermitian && (0..rows).any(|i| a[(i, i)].im != 0.0) {
        return Err(parse_err(last_line, "hermitian diagonal must be real"));
    }
    ensure_finite(&a)?;
    Ok(a)
}

/// Reads a Matrix Market file into a dense matrix.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix_market(&text)
}

/// Dense `array` Matrix Market text, `real` when every imaginary part is zero
/// and `complex` otherwise, at 17 significant digits.
pub fn format_matrix_market(a: &ComplexMatrix) -> String {
    let complex = a.iter().any(|z| z.im != 0.0);
    let mut out = String::new();
    let field = if complex { "complex" } else { "real" };
    let _ = writeln!(out, "%%MatrixMarket matrix array {field} general");
    let _ = writeln!(out, "{} {}", a.nrows(), a.ncols());
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let z = a[(i, j)];
            if complex {
                let _ = writeln!(out, "{} {}", format_number(z.re), format_number(z.im));
            } else {
                let _ = writeln!(out, "{}", format_number(z.re));
            }
        }
    }
    out
}

pub fn write_matrix_market(path: impl AsRef<Path>, a: &ComplexMatrix) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_matrix_market(a)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::real_matrix;

    #[test]
    fn complex_array() {
        let text = "%%MatrixMarket matrix array complex general\n% comment\n2 2\n1 0\n3 -1\n2 0.5\n4 0\n";
        let a = parse_matrix_market(text).unwrap();
        assert_eq!(a[(0, 0)], c64(1.0, 0.0));
        assert_eq!(a[(1, 0)], c64(3.0, -1.0));
        assert_eq!(a[(0, 1)], c64(2.0, 0.5));
        assert_eq!(a[(1, 1)], c64(4.0, 0.0));
    }

    #[test]
    fn hermitian_coordinate_is_expanded() {
        let text = "%%MatrixMarket matrix coordinate complex hermitian\n2 2 3\n1 1 2 0\n2 1 1 1\n2 2 3 0\n";
        let a = parse_matrix_market(text).unwrap();
        assert_eq!(a[(1, 0)], c64(1.0, 1.0));
        assert_eq!(a[(0, 1)], c64(1.0, -1.0));
        assert_eq!(a[(1, 1)], c64(3.0, 0.0));
    }

    #[test]
    fn symmetric_real_array_and_integer_coordinate() {
        let text = "%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n";
        let a = parse_matrix_market(text).unwrap();
        assert_eq!(a, real_matrix(2, 2, &[1.0, 2.0, 2.0, 3.0]));
        let text = "%%MatrixMarket matrix coordinate integer general\n2 3 1\n2 3 7\n";
        let b = parse_matrix_market(text).unwrap();
        assert_eq!(b[(1, 2)], c64(7.0, 0.0));
        assert_eq!(b.shape(), (2, 3));
    }

    #[test]
    fn skew_symmetric_coordinate() {
        let text = "%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 5\n";
        let a = parse_matrix_market(text).unwrap();
        assert_eq!(a[(0, 1)], c64(-5.0, 0.0));
    }

    #[test]
    fn pattern_is_unsupported() {
        let text = "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 1\n";
        assert_eq!(parse_matrix_market(text), Err(Error::UnsupportedField("pattern".into())));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n3 1 2.0\n";
        assert!(matches!(parse_matrix_market(text), Err(Error::Parse { line: 4, .. })));
        let text = "%%MatrixMarket matrix array real general\n2 2\n1\nabc\n";
        assert!(matches!(parse_matrix_market(text), Err(Error::Parse { line: 4, .. })));
        let text = "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n";
        assert!(matches!(parse_matrix_market(text), Err(Error::Parse { line: 5, .. })));
    }

    #[test]
    fn roundtrip_is_exact() {
        let a = ComplexMatrix::from_fn(3, 2, |i, j| c64(1.0 / (i as f64 + 3.0), -(j as f64 + 0.1).sqrt()));
        assert_eq!(parse_matrix_market(&format_matrix_market(&a)).unwrap(), a);
        let r = real_matrix(2, 2, &[0.1, 1e-300, -2.5e17, std::f64::consts::PI]);
        let text = format_matrix_market(&r);
        assert!(text.contains("array real"));
        assert_eq!(parse_matrix_market(&text).unwrap(), r);
    }
}
