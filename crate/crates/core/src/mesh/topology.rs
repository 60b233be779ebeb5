use super::geometry::{element_diameter, polygon_centroid, Point};
use super::{Mesh, MeshError};

/// Derived connectivity and per-element geometry of a [`Mesh`].
#[derive(Debug, Clone, PartialEq)]
pub struct MeshTopology {
    /// Unique edges `(a, b)` with `a < b`, sorted lexicographically.
    pub edges: Vec<(usize, usize)>,
    /// `elem2edge[i][j]` is the edge between local vertices `j` and `j + 1`.
    pub elem2edge: Vec<Vec<usize>>,
    /// The first and last element visiting each edge; equal on the boundary.
    pub edge2elem: Vec<(usize, usize)>,
    /// Element across each local edge, or the element itself on the boundary.
    pub neighbor: Vec<Vec<usize>>,
    pub centroid: Vec<Point>,
    pub diameter: Vec<f64>,
}

impl MeshTopology {
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_boundary_edge(&self, k: usize) -> bool {
        let (a, b) = self.edge2elem[k];
        a == b
    }

    /// Index of the edge joining `a` and `b`, if it exists.
    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).ok()
    }

    /// Per-node flag: does the node lie on a boundary edge?
    pub fn boundary_nodes(&self, num_nodes: usize) -> Vec<bool> {
        let mut mask = vec![false; num_nodes];
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            if self.is_boundary_edge(k) {
                mask[a] = true;
                mask[b] = true;
            }
        }
        mask
    }
}

/// Builds the edge table, element/edge incidence, adjacency, centroids and
/// diameters of a mesh.
pub fn build_topology(mesh: &Mesh) -> Result<MeshTopology, MeshError> {
    let n = mesh.num_nodes();
    let nt = mesh.num_elements();

    let mut centroid = Vec::with_capacity(nt);
    let mut diameter = Vec::with_capacity(nt);
    for (i, elem) in mesh.elements.iter().enumerate() {
        if let Some(&bad) = elem.iter().find(|&&v| v >= n) {
            return Err(MeshError::InvalidIndex { element: i, node: bad, num_nodes: n });
        }
        let verts = mesh.element_vertices(i);
        centroid.push(polygon_centroid(&verts).map_err(|_| MeshError::DegenerateElement(i))?);
        diameter.push(element_diameter(&verts));
    }
    // The guard is on the smallest element: any single collapsed element
    // breaks the relative tolerances downstream.
    let min_diam = diameter.iter().copied().fold(f64::INFINITY, f64::min);
    if nt > 0 && min_diam < 4.0 * f64::EPSILON {
        return Err(MeshError::TooDense(min_diam));
    }

    let mut all_edges: Vec<(usize, usize)> = mesh
        .elements
        .iter()
        .flat_map(|elem| {
            let nv = elem.len();
            (0..nv).map(move |j| {
                let (a, b) = (elem[j], elem[(j + 1) % nv]);
                (a.min(b), a.max(b))
            })
        })
        .collect();
    all_edges.sort_unstable();
    all_edges.dedup();
    let edges = all_edges;
    let ne = edges.len();

    let mut elem2edge = Vec::with_capacity(nt);
    let mut edge2elem: Vec<Option<(usize, usize)>> = vec![None; ne];
    let mut visits = vec![0u8; ne];
    for (i, elem) in mesh.elements.iter().enumerate() {
        let nv = elem.len();
        let row: Vec<usize> = (0..nv)
            .map(|j| {
                let (a, b) = (elem[j], elem[(j + 1) % nv]);
                edges.binary_search(&(a.min(b), a.max(b))).expect("edge collected above")
            })
            .collect();
        for &k in &row {
            visits[k] += 1;
            if visits[k] > 2 {
                let (a, b) = edges[k];
                return Err(MeshError::NonManifoldEdge(a, b));
            }
            edge2elem[k] = Some(match edge2elem[k] {
                None => (i, i),
                Some((first, _)) => (first, i),
            });
        }
        elem2edge.push(row);
    }
    let edge2elem: Vec<(usize, usize)> = edge2elem.into_iter().map(|e| e.expect("every edge visited")).collect();

    let neighbor = elem2edge
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .map(|&k| {
                    let (a, b) = edge2elem[k];
                    if a == i {
                        b
                    } else {
                        a
                    }
                })
                .collect()
        })
        .collect();

    Ok(MeshTopology { edges, elem2edge, edge2elem, neighbor, centroid, diameter })
}
