//! Headerless CSV matrices and JSON artifacts.
//!
//! A matrix file holds one row per line with comma-separated decimal
//! values. Values are written in the shortest form that parses back to the
//! same `f64`, so save/load round-trips bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use palm_nmf_core::Matrix;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{IoError, Result};

/// Parses matrix CSV text. `origin` names the source in error messages.
pub fn parse_matrix(text: &str, origin: &Path) -> Result<Matrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut cols = None;
    let mut rows = 0;
    let mut data = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| IoError::Csv {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(rows + 1, |p| p.line() as usize);
        let expected = *cols.get_or_insert(record.len());
        if record.len() != expected {
            return Err(IoError::RaggedRow {
                path: origin.to_path_buf(),
                line,
                expected,
                found: record.len(),
            });
        }
        for (idx, token) in record.iter().enumerate() {
            let value: f64 = token.parse().map_err(|_| IoError::BadNumber {
                path: origin.to_path_buf(),
                line,
                column: idx + 1,
                token: token.to_string(),
            })?;
            if !value.is_finite() {
                return Err(IoError::BadNumber {
                    path: origin.to_path_buf(),
                    line,
                    column: idx + 1,
                    token: token.to_string(),
                });
            }
            data.push(value);
        }
        rows += 1;
    }
    let cols = match cols {
        Some(c) if rows > 0 => c,
        _ => {
            return Err(IoError::Empty {
                path: origin.to_path_buf(),
            })
        }
    };
    Matrix::from_vec(rows, cols, data).map_err(|source| IoError::Matrix {
        path: origin.to_path_buf(),
        source,
    })
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_matrix(&text, path)
}

/// Renders a matrix as CSV text.
pub fn format_matrix(m: &Matrix) -> String {
    let mut out = String::with_capacity(m.rows() * m.cols() * 20);
    for i in 0..m.rows() {
        for (j, x) in m.row(i).iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{x}").expect("writing to a String cannot fail");
        }
        out.push('\n');
    }
    out
}

pub fn save_matrix(m: &Matrix, path: impl AsRef<Path>) -> Result<()> {
    write_text(path, &format_matrix(m))
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, text).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save_json<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| IoError::Json {
        path: path.as_ref().to_path_buf(),
        source,
    })?;
    text.push('\n');
    write_text(path, &text)
}

pub fn load_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Creates `dir` (and parents) if needed.
pub fn ensure_dir(dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|source| IoError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    Ok(dir.to_path_buf())
}

/// `iteration,objective` lines for a per-iteration objective trace.
pub fn format_trace(trace: &[f64]) -> String {
    let mut out = String::from("iteration,objective\n");
    for (i, v) in trace.iter().enumerate() {
        writeln!(out, "{i},{v}").expect("writing to a String cannot fail");
    }
    out
}
