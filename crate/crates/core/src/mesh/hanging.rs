//! Hanging-node detection and the one-hanging-node conformity check.
//!
//! A vertex `z_i` of an element is hanging when it is the midpoint of its two
//! cyclic neighbours, i.e. `|z_i - (z_{i-1} + z_{i+1}) / 2| < tol`. The
//! default tolerance is `1e-10` times the element diameter.

use std::collections::HashMap;
use std::fmt;

use super::geometry::{element_diameter, point_segment_distance, Point};
use super::Mesh;

/// Relative tolerance (times element diameter) for the midpoint test.
pub const HANGING_REL_TOL: f64 = 1e-10;

/// Per-vertex hanging flags for one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HangingMask(pub Vec<bool>);

impl HangingMask {
    /// Flags computed directly from vertex coordinates.
    pub fn from_vertices(verts: &[Point], tol: Option<f64>) -> Self {
        let nv = verts.len();
        let tol = tol.unwrap_or_else(|| HANGING_REL_TOL * element_diameter(verts));
        HangingMask(
            (0..nv)
                .map(|i| {
                    let prev = verts[(i + nv - 1) % nv];
                    let next = verts[(i + 1) % nv];
                    (verts[i] - prev.midpoint(next)).norm() < tol
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_hanging(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&h| h).count()
    }

    pub fn any(&self) -> bool {
        self.0.iter().any(|&h| h)
    }

    /// Local edge `j` (from vertex `j` to `j + 1`) is nontrivial when either
    /// endpoint is hanging.
    pub fn nontrivial_edges(&self) -> Vec<bool> {
        let nv = self.len();
        (0..nv).map(|j| self.0[j] || self.0[(j + 1) % nv]).collect()
    }
}

/// Hanging flags of element `element`; `tol` defaults to
/// [`HANGING_REL_TOL`] times the element diameter.
pub fn detect_hanging_nodes(mesh: &Mesh, element: usize, tol: Option<f64>) -> HangingMask {
    HangingMask::from_vertices(&mesh.element_vertices(element), tol)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConformityViolation {
    /// A straight-angle vertex that is not the midpoint of its neighbours.
    OffMidpoint { element: usize, vertex: usize },
    /// Two consecutive straight-angle vertices: more than one hanging node
    /// on a single parent edge.
    MultipleHanging { element: usize, vertex: usize },
    /// An edge used by more than two elements.
    NonManifoldEdge { a: usize, b: usize },
    /// `node` lies inside edge `(a, b)`, which only one element uses.
    UnlistedNode { a: usize, b: usize, node: usize },
}

impl fmt::Display for ConformityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OffMidpoint { element, vertex } => {
                write!(f, "element {element}: straight vertex {vertex} is not an edge midpoint")
            }
            Self::MultipleHanging { element, vertex } => {
                write!(f, "element {element}: more than one hanging node on the edge through vertex {vertex}")
            }
            Self::NonManifoldEdge { a, b } => write!(f, "edge ({a}, {b}) is shared by more than two elements"),
            Self::UnlistedNode { a, b, node } => {
                write!(f, "node {node} lies inside edge ({a}, {b}) but is not one of its vertices")
            }
        }
    }
}

/// Checks the one-hanging-node rule on every element.
///
/// Each maximal run of collinear boundary vertices of an element must contain
/// at most one interior vertex, and that vertex must be the exact midpoint of
/// the run. Edges must be shared by at most two elements, and no node may sit
/// inside an edge without being listed by the element owning it.
pub fn check_conformity(mesh: &Mesh) -> Vec<ConformityViolation> {
    let mut out = Vec::new();
    let mut edge_use: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, elem) in mesh.elements.iter().enumerate() {
        let verts = mesh.element_vertices(i);
        let nv = verts.len();
        let diam = element_diameter(&verts);
        let mask = HangingMask::from_vertices(&verts, None);
        let straight: Vec<bool> = (0..nv)
            .map(|j| {
                let u = verts[j] - verts[(j + nv - 1) % nv];
                let w = verts[(j + 1) % nv] - verts[j];
                u.cross(w).abs() <= HANGING_REL_TOL * diam * diam && u.dot(w) > 0.0
            })
            .collect();
        for j in 0..nv {
            if !straight[j] {
                continue;
            }
            if !mask.is_hanging(j) {
                out.push(ConformityViolation::OffMidpoint { element: i, vertex: elem[j] });
            }
            if straight[(j + 1) % nv] {
                out.push(ConformityViolation::MultipleHanging { element: i, vertex: elem[j] });
            }
        }
        for j in 0..nv {
            let (a, b) = (elem[j], elem[(j + 1) % nv]);
            *edge_use.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let mut bad: Vec<_> = edge_use.iter().filter(|&(_, &c)| c > 2).map(|(&e, _)| e).collect();
    bad.sort_unstable();
    out.extend(bad.into_iter().map(|(a, b)| ConformityViolation::NonManifoldEdge { a, b }));

    // A node lying inside an edge that only one element uses is a T-junction
    // the element does not list: the two sides of that edge disagree.
    let mut single: Vec<(usize, usize)> = edge_use.iter().filter(|&(_, &c)| c == 1).map(|(&e, _)| e).collect();
    single.sort_unstable();
    let mut candidates: Vec<usize> = single.iter().flat_map(|&(a, b)| [a, b]).collect();
    candidates.sort_unstable();
    candidates.dedup();
    for &(a, b) in &single {
        let (p, q) = (mesh.nodes[a], mesh.nodes[b]);
        let len = p.dist(q);
        for &v in &candidates {
            if v == a || v == b {
                continue;
            }
            let z = mesh.nodes[v];
            let t = (z - p).dot(q - p) / (len * len);
            if t > 0.0 && t < 1.0 && point_segment_distance(z, p, q) <= HANGING_REL_TOL * len {
                out.push(ConformityViolation::UnlistedNode { a, b, node: v });
            }
        }
    }
    out
}
