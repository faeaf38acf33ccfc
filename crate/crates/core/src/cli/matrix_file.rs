//! JSON matrix files: `{"rows": m, "cols": n, "re": [[..]], "im": [[..]]}`.
//! A missing `im` means a real matrix.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::numerics::{CMat, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: parse error: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {message}")]
    Shape { path: PathBuf, message: String },
    #[error("{path}: non-finite entry in {field} at row {row}, column {col}")]
    NonFinite { path: PathBuf, field: &'static str, row: usize, col: usize },
}

impl MatrixFile {
    pub fn from_cmat(a: &CMat) -> Self {
        let (m, n) = a.shape();
        let part = |f: fn(C64) -> f64| -> Vec<Vec<f64>> {
            (0..m).map(|i| (0..n).map(|j| f(a.get(i, j))).collect()).collect()
        };
        let im = part(|z| z.im);
        let real = im.iter().flatten().all(|&x| x == 0.0);
        MatrixFile { rows: m, cols: n, re: part(|z| z.re), im: (!real).then_some(im) }
    }

    /// Checks the declared shape against both arrays and converts.
    pub fn to_cmat(&self, path: &Path) -> Result<CMat, LoadError> {
        let shape_err = |message: String| LoadError::Shape { path: path.to_path_buf(), message };
        if self.rows == 0 || self.cols == 0 {
            return Err(shape_err(format!("empty matrix {}x{}", self.rows, self.cols)));
        }
        let check = |field: &'static str, rows: &[Vec<f64>]| -> Result<(), LoadError> {
            if rows.len() != self.rows {
                return Err(shape_err(format!("\"{field}\" has {} rows, expected {}", rows.len(), self.rows)));
            }
            for (i, row) in rows.iter().enumerate() {
                if row.len() != self.cols {
                    return Err(shape_err(format!(
                        "\"{field}\" row {i} has {} entries, expected {}",
                        row.len(),
                        self.cols
                    )));
                }
                if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                    return Err(LoadError::NonFinite { path: path.to_path_buf(), field, row: i, col: j });
                }
            }
            Ok(())
        };
        check("re", &self.re)?;
        if let Some(im) = &self.im {
            check("im", im)?;
        }
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let im = self.im.as_ref().map_or(0.0, |im| im[i][j]);
                entries.push(C64::new(self.re[i][j], im));
            }
        }
        Ok(CMat::from_row_slice(self.rows, self.cols, &entries).expect("entries checked above"))
    }
}

/// A loaded matrix with the SHA-256 of its file bytes.
#[derive(Clone, Debug)]
pub struct LoadedMatrix {
    pub matrix: CMat,
    pub sha256: String,
}

pub fn parse_matrix(text: &str, path: &Path) -> Result<CMat, LoadError> {
    let file: MatrixFile = serde_json::from_str(text)
        .map_err(|source| LoadError::Parse { path: path.to_path_buf(), source })?;
    file.to_cmat(path)
}

pub fn load_matrix(path: &Path) -> Result<LoadedMatrix, LoadError> {
    let bytes = fs::read(path).map_err(|source| LoadError::Io { path: path.to_path_buf(), source })?;
    let text = String::from_utf8_lossy(&bytes);
    Ok(LoadedMatrix { matrix: parse_matrix(&text, path)?, sha256: hex::encode(Sha256::digest(&bytes)) })
}

pub fn save_matrix(a: &CMat, path: &Path) -> std::io::Result<()> {
    let mut text = serde_json::to_string(&MatrixFile::from_cmat(a)).map_err(std::io::Error::other)?;
    text.push('\n');
    fs::write(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<CMat, LoadError> {
        parse_matrix(text, Path::new("m.json"))
    }

    #[test]
    fn real_file_loads() {
        let a = parse(r#"{"rows":2,"cols":2,"re":[[1,0],[0,0]]}"#).unwrap();
        assert_eq!(a, CMat::diag(&[1.0, 0.0]));
    }

    #[test]
    fn imaginary_part_is_read() {
        let a = parse(r#"{"rows":1,"cols":2,"re":[[1,2]],"im":[[0.5,-1]]}"#).unwrap();
        assert_eq!(a.get(0, 1), C64::new(2.0, -1.0));
    }

    #[test]
    fn bad_row_is_named() {
        let err = parse(r#"{"rows":2,"cols":2,"re":[[1,0],[0,0,3]]}"#).unwrap_err();
        assert!(err.to_string().contains("row 1 has 3 entries"), "{err}");
        let err = parse(r#"{"rows":2,"cols":2,"re":[[1,0]]}"#).unwrap_err();
        assert!(matches!(err, LoadError::Shape { .. }));
        let err = parse(r#"{"rows":1,"cols":1,"re":[[1]],"im":[[1,2]]}"#).unwrap_err();
        assert!(err.to_string().contains("\"im\" row 0"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse("{\"rows\":1,\n\"cols\":1,\n\"re\":[[1,]]}").unwrap_err();
        assert!(matches!(err, LoadError::Parse { .. }));
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(parse(r#"{"rows":1,"cols":1,"re":[[1e400]]}"#).is_err());
    }

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.json");
        let a = CMat::from_row_slice(
            1,
            3,
            &[C64::new(0.1, 1.0 / 3.0), C64::new(-2.5e-300, 0.0), C64::new(f64::MAX, -7.0)],
        )
        .unwrap();
        save_matrix(&a, &path).unwrap();
        let b = load_matrix(&path).unwrap();
        assert_eq!(b.matrix, a);
        assert_eq!(b.sha256.len(), 64);
    }
}
