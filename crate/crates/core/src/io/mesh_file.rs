use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use super::{float, read, write, IoError};
use crate::mesh::{validate_mesh, Mesh, Point};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeshFile {
    version: u64,
    nodes: Vec<Point>,
    elements: Vec<Vec<usize>>,
}

/// Parses a mesh document without checking the mesh itself.
pub fn parse_mesh_unvalidated(text: &str) -> Result<Mesh, IoError> {
    let file: MeshFile = serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    if file.version != FORMAT_VERSION {
        return Err(IoError::UnsupportedVersion(file.version));
    }
    Ok(Mesh::new(file.nodes, file.elements))
}

/// Parses a mesh document and validates the result.
pub fn parse_mesh(text: &str) -> Result<Mesh, IoError> {
    let mesh = parse_mesh_unvalidated(text)?;
    let report = validate_mesh(&mesh);
    if report.is_empty() {
        Ok(mesh)
    } else {
        Err(IoError::Validation(report))
    }
}

pub fn format_mesh(mesh: &Mesh) -> Result<String, IoError> {
    let mut out = format!("{{\n  \"version\": {FORMAT_VERSION},\n  \"nodes\": [");
    for (i, p) in mesh.nodes.iter().enumerate() {
        if !p.is_finite() {
            return Err(IoError::NonFinite(i));
        }
        let sep = if i == 0 { "" } else { "," };
        write!(out, "{sep}\n    [{}, {}]", float(p.x), float(p.y)).unwrap();
    }
    out.push_str(if mesh.nodes.is_empty() { "],\n  \"elements\": [" } else { "\n  ],\n  \"elements\": [" });
    for (i, elem) in mesh.elements.iter().enumerate() {
        let sep = if i == 0 { "" } else { "," };
        let ids: Vec<String> = elem.iter().map(usize::to_string).collect();
        write!(out, "{sep}\n    [{}]", ids.join(", ")).unwrap();
    }
    out.push_str(if mesh.elements.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
    Ok(out)
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<Mesh, IoError> {
    parse_mesh(&read(path.as_ref())?)
}

pub fn load_mesh_unvalidated(path: impl AsRef<Path>) -> Result<Mesh, IoError> {
    parse_mesh_unvalidated(&read(path.as_ref())?)
}

pub fn save_mesh(mesh: &Mesh, path: impl AsRef<Path>) -> Result<(), IoError> {
    write(path.as_ref(), &format_mesh(mesh)?)
}
