//! Plain-text serialization for signals and kernels: single-column CSV (one
//! real per line, no header) and JSON arrays. Readers reject NaN/Inf so
//! downstream code never sees non-finite samples.

use crate::error::CoreError;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

/// One value per line; Rust's float Display emits the shortest decimal string
/// that round-trips, so write→read is lossless.
pub fn write_values_csv(path: &Path, values: &[f64]) -> Result<(), CoreError> {
    let mut w = BufWriter::new(File::create(path)?);
    for v in values {
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_values_csv(path: &Path) -> Result<Vec<f64>, CoreError> {
    let r = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let v: f64 = t.parse().map_err(|_| CoreError::Parse {
            line: i + 1,
            reason: format!("not a real number: {t:?}"),
        })?;
        if !v.is_finite() {
            return Err(CoreError::Parse { line: i + 1, reason: format!("non-finite value {v}") });
        }
        out.push(v);
    }
    Ok(out)
}

pub fn write_values_json(path: &Path, values: &[f64]) -> Result<(), CoreError> {
    let w = BufWriter::new(File::create(path)?);
    serde_json::to_writer(w, values).map_err(|e| CoreError::Parse {
        line: 0,
        reason: format!("JSON encode failed: {e}"),
    })?;
    Ok(())
}

pub fn read_values_json(path: &Path) -> Result<Vec<f64>, CoreError> {
    let r = BufReader::new(File::open(path)?);
    let values: Vec<f64> = serde_json::from_reader(r).map_err(|e| CoreError::Parse {
        line: e.line(),
        reason: format!("JSON decode failed: {e}"),
    })?;
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(CoreError::Parse {
            line: 0,
            reason: format!("non-finite value at index {i}"),
        });
    }
    Ok(values)
}
