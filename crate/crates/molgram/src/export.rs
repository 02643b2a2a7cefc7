//! Matrix export: CSV with shortest round-trip decimals, and a compact
//! binary format (`GRAM` magic, u32 order, row-major little-endian f64).

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::{Array2, ArrayView2};
use thiserror::Error;

/// Magic bytes prefixing the binary matrix format.
pub const MATRIX_MAGIC: &[u8; 4] = b"GRAM";

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),
    #[error("binary matrix header is malformed: {0}")]
    BadHeader(String),
    #[error("binary matrix payload is truncated: expected {expected} bytes of floats, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("only square matrices are exportable, got {rows}×{cols}")]
    NotSquare { rows: usize, cols: usize },
}

/// Writes a matrix as headerless CSV, one row per line. Values use Rust's
/// shortest round-trip decimal formatting, so reading them back as f64
/// reproduces every bit.
pub fn write_matrix_csv<P: AsRef<Path>>(path: P, matrix: ArrayView2<f64>) -> Result<(), ExportError> {
    let mut out = BufWriter::new(File::create(path)?);
    for row in matrix.rows() {
        let line = row
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

/// Writes a square matrix as `GRAM` + u32 order (little-endian) + row-major
/// little-endian f64 payload.
pub fn write_matrix_binary<P: AsRef<Path>>(
    path: P,
    matrix: ArrayView2<f64>,
) -> Result<(), ExportError> {
    let (rows, cols) = matrix.dim();
    if rows != cols {
        return Err(ExportError::NotSquare { rows, cols });
    }
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(MATRIX_MAGIC)?;
    out.write_all(&(rows as u32).to_le_bytes())?;
    for value in matrix.iter() {
        out.write_all(&value.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a matrix written by [`write_matrix_binary`].
pub fn read_matrix_binary<P: AsRef<Path>>(path: P) -> Result<Array2<f64>, ExportError> {
    let mut input = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MATRIX_MAGIC {
        return Err(ExportError::BadHeader(format!(
            "magic bytes {magic:?} are not {MATRIX_MAGIC:?}"
        )));
    }
    let mut order_bytes = [0u8; 4];
    input.read_exact(&mut order_bytes)?;
    let n = u32::from_le_bytes(order_bytes) as usize;

    let expected = n * n * 8;
    let mut payload = Vec::with_capacity(expected);
    input.read_to_end(&mut payload)?;
    if payload.len() != expected {
        return Err(ExportError::Truncated {
            expected,
            found: payload.len(),
        });
    }
    let values: Vec<f64> = payload
        .chunks_exact(8)
        .map(|chunk| f64::from_le_bytes(chunk.try_into().expect("8-byte chunk")))
        .collect();
    Ok(Array2::from_shape_vec((n, n), values).expect("length checked above"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use std::fs;

    fn temp_path(name: &str) -> std::path::PathBuf {
        let mut path = std::env::temp_dir();
        path.push(format!("molgram-export-{}-{name}", std::process::id()));
        path
    }

    #[test]
    fn binary_round_trip_is_exact() {
        let m = array![
            [1.0 / 3.0, f64::MIN_POSITIVE],
            [-0.1, 12345.678901234567]
        ];
        let path = temp_path("roundtrip.bin");
        write_matrix_binary(&path, m.view()).unwrap();
        let back = read_matrix_binary(&path).unwrap();
        assert_eq!(m, back);
        fs::remove_file(&path).unwrap();
    }

    #[test]
    fn binary_layout_matches_the_format() {
        let m = array![[1.0, 2.0], [3.0, 4.0]];
        let path = temp_path("layout.bin");
        write_matrix_binary(&path, m.view()).unwrap();
        let bytes = fs::read(&path).unwrap();
        assert_eq!(&bytes[..4], b"GRAM");
        assert_eq!(&bytes[4..8], &2u32.to_le_bytes());
        assert_eq!(&bytes[8..16], &1.0f64.to_le_bytes());
        assert_eq!(&bytes[16..24], &2.0f64.to_le_bytes());
        assert_eq!(&bytes[24..32], &3.0f64.to_le_bytes());
        assert_eq!(&bytes[32..40], &4.0f64.to_le_bytes());
        assert_eq!(bytes.len(), 8 + 4 * 8);
        fs::remove_file(&path).unwrap();
    }

    #[test]
    fn csv_values_round_trip_through_parsing() {
        let m = array![[0.1 + 0.2, 1.0 / 3.0], [f64::MIN_POSITIVE, -1e300]];
        let path = temp_path("roundtrip.csv");
        write_matrix_csv(&path, m.view()).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let parsed: Vec<Vec<f64>> = text
            .lines()
            .map(|line| line.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(parsed.len(), 2);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(parsed[i][j], m[(i, j)], "cell ({i},{j})");
            }
        }
        fs::remove_file(&path).unwrap();
    }

    #[test]
    fn non_square_binary_export_is_rejected() {
        let m = Array2::<f64>::zeros((2, 3));
        let path = temp_path("notsquare.bin");
        let err = write_matrix_binary(&path, m.view()).unwrap_err();
        assert!(matches!(err, ExportError::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn corrupt_magic_and_truncation_are_reported() {
        let path = temp_path("corrupt.bin");
        fs::write(&path, b"MIXD\x01\x00\x00\x00").unwrap();
        assert!(matches!(
            read_matrix_binary(&path),
            Err(ExportError::BadHeader(_))
        ));
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"GRAM");
        bytes.extend_from_slice(&2u32.to_le_bytes());
        bytes.extend_from_slice(&1.0f64.to_le_bytes()); // 1 float instead of 4
        fs::write(&path, &bytes).unwrap();
        assert!(matches!(
            read_matrix_binary(&path),
            Err(ExportError::Truncated {
                expected: 32,
                found: 8
            })
        ));
        fs::remove_file(&path).unwrap();
    }
}
