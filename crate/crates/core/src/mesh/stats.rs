//! Summary numbers for `quality` reports.

use std::collections::BTreeSet;

use super::geometry::element_diameter;
use super::hanging::detect_hanging_nodes;
use super::Mesh;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshStatistics {
    /// Smallest `|e| / h_K` over all sides `e` of all elements `K`.
    pub min_edge_ratio: f64,
    pub max_edge_ratio: f64,
    /// Distinct nodes that hang in at least one element.
    pub hanging_nodes: usize,
    pub elements_with_hanging: usize,
    pub max_hanging_per_element: usize,
}

/// Statistics of a mesh that has passed validation.
pub fn mesh_statistics(mesh: &Mesh) -> MeshStatistics {
    let mut min_edge_ratio = f64::INFINITY;
    let mut max_edge_ratio: f64 = 0.0;
    let mut hanging = BTreeSet::new();
    let mut elements_with_hanging = 0;
    let mut max_hanging_per_element = 0;
    for (i, elem) in mesh.elements.iter().enumerate() {
        let verts = mesh.element_vertices(i);
        let h = element_diameter(&verts);
        for j in 0..verts.len() {
            let r = verts[j].dist(verts[(j + 1) % verts.len()]) / h;
            min_edge_ratio = min_edge_ratio.min(r);
            max_edge_ratio = max_edge_ratio.max(r);
        }
        let mask = detect_hanging_nodes(mesh, i, None);
        let count = mask.count();
        if count > 0 {
            elements_with_hanging += 1;
        }
        max_hanging_per_element = max_hanging_per_element.max(count);
        hanging.extend(elem.iter().enumerate().filter(|&(j, _)| mask.is_hanging(j)).map(|(_, &n)| n));
    }
    if mesh.elements.is_empty() {
        min_edge_ratio = 0.0;
    }
    MeshStatistics {
        min_edge_ratio,
        max_edge_ratio,
        hanging_nodes: hanging.len(),
        elements_with_hanging,
        max_hanging_per_element,
    }
}
