//! Reading and writing meshes and vertex fields, and SVG output.
//!
//! Meshes are stored as a small JSON document, one node or element per line
//! so that golden files diff cleanly:
//!
//! ```text
//! {
//!   "version": 1,
//!   "nodes": [
//!     [0.0, 0.0],
//!     [1.0, 0.0],
//!     [0.0, 1.0]
//!   ],
//!   "elements": [
//!     [0, 1, 2]
//!   ]
//! }
//! ```
//!
//! Indices are 0-based and element cycles are counterclockwise. Coordinates
//! use the shortest decimal that parses back to the same `f64`, so
//! `load(save(m))` is exact.

mod field;
mod mesh_file;
mod svg;

pub use field::{format_field, load_field, parse_field, save_field};
pub use mesh_file::{
    format_mesh, load_mesh, load_mesh_unvalidated, parse_mesh, parse_mesh_unvalidated, save_mesh, FORMAT_VERSION,
};
pub use svg::{render_svg, svg_document};

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::mesh::ValidationReport;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported format version {0} (expected {FORMAT_VERSION})")]
    UnsupportedVersion(u64),
    #[error("invalid mesh: {}", one_line(.0))]
    Validation(ValidationReport),
    #[error("cannot write non-finite value at position {0}")]
    NonFinite(usize),
    #[error("field has {found} values but the mesh has {expected} nodes")]
    FieldLength { expected: usize, found: usize },
}

fn one_line(report: &ValidationReport) -> String {
    report.to_string().replace('\n', "; ")
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), IoError> {
    std::fs::write(path, contents).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

/// Shortest round-trip decimal; always contains a `.` or an exponent so it
/// reads back as a float.
fn float(x: f64) -> String {
    serde_json::to_string(&x).expect("finite floats serialize")
}
