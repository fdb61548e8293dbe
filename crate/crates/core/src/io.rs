//! Activation file formats.
//!
//! * CSV: one stimulus per line, one unit per comma-separated field, no
//!   header and no quoting.
//! * rawbin: the bytes `RSK1`, then `rows` and `cols` as little-endian
//!   `u64`, then `rows × cols` little-endian IEEE-754 `f64` values in
//!   row-major order.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::preprocess::ActivationMatrix;

pub const RAWBIN_MAGIC: &[u8; 4] = b"RSK1";
const HEADER_LEN: usize = 4 + 8 + 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActivationFormat {
    Csv,
    Rawbin,
}

/// A file of stimulus-by-unit responses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivationFile {
    pub path: PathBuf,
    pub format: ActivationFormat,
}

impl ActivationFile {
    pub fn new(path: impl Into<PathBuf>, format: ActivationFormat) -> Self {
        Self { path: path.into(), format }
    }

    /// Picks the format from the extension: `.csv` is CSV, anything else
    /// is rawbin.
    pub fn infer(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        let csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        let format = if csv { ActivationFormat::Csv } else { ActivationFormat::Rawbin };
        Self { path, format }
    }
}

/// Reads a raw activation matrix; rows are always stimuli.
pub fn load_activations(file: &ActivationFile) -> Result<ActivationMatrix> {
    let m = match file.format {
        ActivationFormat::Csv => {
            let text = fs::read_to_string(&file.path)
                .map_err(|e| Error::Io(format!("{}: {e}", file.path.display())))?;
            parse_csv(&text)
        }
        ActivationFormat::Rawbin => {
            let bytes =
                fs::read(&file.path).map_err(|e| Error::Io(format!("{}: {e}", file.path.display())))?;
            decode_rawbin(&bytes)
        }
    }
    .map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}:{location}", file.path.display()),
            message,
        },
        other => other,
    })?;
    Ok(ActivationMatrix::raw(m))
}

pub fn save_activations(file: &ActivationFile, m: &Matrix) -> Result<()> {
    match file.format {
        ActivationFormat::Csv => fs::write(&file.path, to_csv(m))?,
        ActivationFormat::Rawbin => fs::write(&file.path, encode_rawbin(m))?,
    }
    Ok(())
}

pub fn parse_csv(text: &str) -> Result<Matrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let lines: Vec<&str> = text.lines().collect();
    let last = lines.iter().rposition(|l| !l.trim().is_empty()).map_or(0, |k| k + 1);
    for (k, line) in lines[..last].iter().enumerate() {
        let lineno = k + 1;
        let line = line.trim_end_matches('\r');
        let mut row = Vec::new();
        for (c, cell) in line.split(',').enumerate() {
            let cell = cell.trim();
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                location: format!("line {lineno}, field {}", c + 1),
                message: format!("not a number: {cell:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    location: format!("line {lineno}, field {}", c + 1),
                    message: format!("non-finite value {cell}"),
                });
            }
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    location: format!("line {lineno}"),
                    message: format!("ragged row: {} fields, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse { location: "line 1".into(), message: "file contains no data".into() });
    }
    Matrix::from_rows(&rows)
}

/// Writes values with Rust's shortest round-trip formatting.
pub fn to_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let cells: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn encode_rawbin(m: &Matrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * m.as_slice().len());
    out.extend_from_slice(RAWBIN_MAGIC);
    out.extend_from_slice(&(m.rows() as u64).to_le_bytes());
    out.extend_from_slice(&(m.cols() as u64).to_le_bytes());
    for v in m.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_rawbin(bytes: &[u8]) -> Result<Matrix> {
    let err = |offset: usize, message: String| Error::Parse { location: format!("byte {offset}"), message };
    if bytes.len() < HEADER_LEN {
        return Err(err(bytes.len(), format!("truncated header ({} bytes)", bytes.len())));
    }
    if &bytes[..4] != RAWBIN_MAGIC {
        return Err(err(0, "bad magic, expected RSK1".into()));
    }
    let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"));
    let (rows, cols) = (word(4), word(12));
    let count = rows.checked_mul(cols).and_then(|c| c.checked_mul(8));
    let expected = count.and_then(|c| c.checked_add(HEADER_LEN as u64));
    if expected != Some(bytes.len() as u64) {
        return Err(err(
            HEADER_LEN,
            format!("header declares {rows}x{cols} but payload has {} bytes", bytes.len() - HEADER_LEN),
        ));
    }
    if rows == 0 || cols == 0 {
        return Err(err(4, format!("empty matrix {rows}x{cols}")));
    }
    let (rows, cols) = (rows as usize, cols as usize);
    let mut data = Vec::with_capacity(rows * cols);
    for k in 0..rows * cols {
        let at = HEADER_LEN + 8 * k;
        let v = f64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"));
        if !v.is_finite() {
            return Err(err(at, format!("non-finite value at ({}, {})", k / cols, k % cols)));
        }
        data.push(v);
    }
    Matrix::new(rows, cols, data)
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, contents)?;
    Ok(())
}
