mod common;

use common::{random_matrix, rng};
use proptest::prelude::*;
use qritz::error::Error;
use qritz::io::{format_study_csv, read_matrix_market, write_matrix_market, write_study_csv, StudyRow, STUDY_HEADER};
use qritz::kernels::{c64, real_matrix};

#[test]
fn coordinate_hermitian_lower_triangle_expands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.mtx");
    std::fs::write(
        &path,
        "%%MatrixMarket matrix coordinate complex hermitian\n% lower triangle\n2 2 2\n1 1 2.0 0.0\n2 1 1.0 -3.0\n",
    )
    .unwrap();
    let h = read_matrix_market(&path).unwrap();
    assert_eq!(h[(0, 0)], c64(2.0, 0.0));
    assert_eq!(h[(1, 0)], c64(1.0, -3.0));
    assert_eq!(h[(0, 1)], c64(1.0, 3.0));
    assert_eq!(h[(1, 1)], c64(0.0, 0.0));
}

#[test]
fn missing_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(read_matrix_market(dir.path().join("absent.mtx")), Err(Error::Io(_))));
}

#[test]
fn pattern_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.mtx");
    std::fs::write(&path, "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 2\n").unwrap();
    assert!(matches!(read_matrix_market(&path), Err(Error::UnsupportedField(_))));
}

#[test]
fn real_roundtrip_writes_real_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.mtx");
    let a = real_matrix(2, 3, &[0.1, -2.5e-300, 1.0 / 3.0, 7.0, 0.0, -1e300]);
    write_matrix_market(&path, &a).unwrap();
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .starts_with("%%MatrixMarket matrix array real general"));
    assert_eq!(read_matrix_market(&path).unwrap(), a);
}

#[test]
fn study_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    write_study_csv(&[], &path).unwrap();
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        format!("{}\n", STUDY_HEADER.join(","))
    );
    let row = StudyRow {
        epsilon: 1e-3,
        sin_theta: Some(2e-3),
        thm23_bound: Some(f64::INFINITY),
        ..StudyRow::default()
    };
    write_study_csv(&[row], &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, format_study_csv(&[row]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields.len(), STUDY_HEADER.len());
    assert_eq!(fields[0], "1.0000000000000000e-3");
    assert!(fields.contains(&"inf") && fields.contains(&"NA"));
}

#[test]
fn unwritable_study_path_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("no").join("such").join("s.csv");
    assert!(matches!(write_study_csv(&[], &path), Err(Error::Io(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn complex_roundtrip_is_bit_exact(seed in any::<u64>(), rows in 1usize..=6, cols in 1usize..=6) {
        let a = random_matrix(&mut rng(seed), rows, cols);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.mtx");
        write_matrix_market(&path, &a).unwrap();
        prop_assert_eq!(read_matrix_market(&path).unwrap(), a);
    }
}
