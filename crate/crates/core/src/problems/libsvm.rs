//! LIBSVM sparse text format: `<label> <index>:<value> ...` with 1-based indices.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::problems::logreg::Dataset;
use crate::Matrix;

fn parse_label(token: &str) -> Option<f64> {
    let v: f64 = token.parse().ok()?;
    if v == 1.0 {
        Some(1.0)
    } else if v == 0.0 || v == -1.0 {
        Some(-1.0)
    } else {
        None
    }
}

/// Parses LIBSVM text. Labels `+1`/`1` map to `+1`, `0`/`-1` to `-1`. `path`
/// only labels errors. The feature count is the largest index seen.
pub fn parse_libsvm(text: &str, path: &Path) -> Result<Dataset> {
    let parse_err = |line: usize, msg: String| Error::Parse { path: path.to_path_buf(), line, msg };
    let mut labels = Vec::new();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut width = 0;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let label_tok = tokens.next().unwrap_or_default();
        let label = parse_label(label_tok).ok_or_else(|| {
            if label_tok.parse::<f64>().is_ok() {
                Error::UnsupportedLabel { path: path.to_path_buf(), line: line_no, label: label_tok.to_string() }
            } else {
                parse_err(line_no, format!("bad label {label_tok:?}"))
            }
        })?;
        let mut row = Vec::new();
        let mut last = 0;
        for tok in tokens {
            let (idx, val) = tok.split_once(':').ok_or_else(|| parse_err(line_no, format!("expected index:value, got {tok:?}")))?;
            let idx: usize = idx.parse().map_err(|_| parse_err(line_no, format!("bad index {idx:?}")))?;
            if idx == 0 {
                return Err(parse_err(line_no, "indices are 1-based".into()));
            }
            if idx <= last {
                return Err(parse_err(line_no, format!("index {idx} is not increasing")));
            }
            let val: f64 = val.parse().map_err(|_| parse_err(line_no, format!("bad value {val:?}")))?;
            if !val.is_finite() {
                return Err(parse_err(line_no, format!("non-finite value {val}")));
            }
            last = idx;
            row.push((idx - 1, val));
        }
        width = width.max(last);
        labels.push(label);
        rows.push(row);
    }
    let mut features = Matrix::zeros(rows.len(), width);
    for (i, row) in rows.iter().enumerate() {
        for &(j, v) in row {
            features[(i, j)] = v;
        }
    }
    Dataset::new(features, labels)
}

/// Reads a LIBSVM file, optionally standardizing every feature column.
pub fn load_libsvm(path: impl AsRef<Path>, standardize: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut data = parse_libsvm(&text, path)?;
    if standardize {
        data.standardize();
    }
    Ok(data)
}

/// Writes nonzero entries with round-trip precision.
pub fn write_libsvm<W: Write>(data: &Dataset, mut out: W) -> io::Result<()> {
    for (row, &t) in data.features.row_iter().zip(&data.labels) {
        write!(out, "{}", if t > 0.0 { "+1" } else { "-1" })?;
        for (j, &v) in row.iter().enumerate() {
            if v != 0.0 {
                write!(out, " {}:{v:?}", j + 1)?;
            }
        }
        writeln!(out)?;
    }
    Ok(())
}
