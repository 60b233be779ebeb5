//! Per-vertex scalar fields, stored as `{"version": 1, "values": [...]}`.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use super::{float, read, write, IoError, FORMAT_VERSION};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    version: u64,
    values: Vec<f64>,
}

pub fn parse_field(text: &str) -> Result<Vec<f64>, IoError> {
    let file: FieldFile = serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    if file.version != FORMAT_VERSION {
        return Err(IoError::UnsupportedVersion(file.version));
    }
    Ok(file.values)
}

pub fn format_field(values: &[f64]) -> Result<String, IoError> {
    let mut out = format!("{{\n  \"version\": {FORMAT_VERSION},\n  \"values\": [");
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(IoError::NonFinite(i));
        }
        let sep = if i == 0 { "" } else { "," };
        write!(out, "{sep}\n    {}", float(v)).unwrap();
    }
    out.push_str(if values.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
    Ok(out)
}

pub fn load_field(path: impl AsRef<Path>) -> Result<Vec<f64>, IoError> {
    parse_field(&read(path.as_ref())?)
}

pub fn save_field(values: &[f64], path: impl AsRef<Path>) -> Result<(), IoError> {
    write(path.as_ref(), &format_field(values)?)
}
