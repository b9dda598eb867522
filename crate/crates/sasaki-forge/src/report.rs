//! Report emission: deterministic JSON documents and fixed-format CSV
//! grids.
//!
//! JSON objects are built as `serde_json::Value` maps, which sort keys
//! (BTreeMap-backed), and floats serialize via the shortest round-trip
//! encoding, so identical inputs produce byte-identical files. CSV floats
//! use a fixed 17-significant-digit scientific format.

use crate::error::Result;
use serde_json::Value;
use std::fs;
use std::path::{Path, PathBuf};

/// Serialize a report with sorted keys and a trailing newline.
pub fn to_json_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Write `<dir>/<name>.json`, creating the directory if needed.
pub fn write_json(dir: &Path, name: &str, value: &Value) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{name}.json"));
    fs::write(&path, to_json_string(value))?;
    Ok(path)
}

/// Fixed float formatting for CSV cells: 17 significant digits.
pub fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write `<dir>/<name>.csv` with the given header and rows.
pub fn write_csv(dir: &Path, name: &str, header: &str, rows: &[Vec<f64>]) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{name}.csv"));
    let mut out = String::with_capacity(rows.len() * 80 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| csv_float(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(&path, out)?;
    Ok(path)
}
