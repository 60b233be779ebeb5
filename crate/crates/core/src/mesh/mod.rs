//! Polygonal mesh data model.
//!
//! A [`Mesh`] is just a node table and an element table. Everything else
//! (edges, adjacency, centroids) is derived on demand by [`MeshTopology`].

pub mod geometry;
pub mod hanging;
pub mod stats;
pub mod topology;
pub mod validate;

pub use geometry::Point;
pub use hanging::{check_conformity, detect_hanging_nodes, ConformityViolation, HangingMask};
pub use stats::{mesh_statistics, MeshStatistics};
pub use topology::{build_topology, MeshTopology};
pub use validate::{validate_mesh, ValidationReport, Violation};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("element {element} references node {node}, but the mesh has {num_nodes} nodes")]
    InvalidIndex { element: usize, node: usize, num_nodes: usize },
    #[error("the mesh is too dense (minimum element diameter {0:e})")]
    TooDense(f64),
    #[error("edge ({0}, {1}) is shared by more than two elements")]
    NonManifoldEdge(usize, usize),
    #[error("degenerate polygon")]
    DegeneratePolygon,
    #[error("element {0} is degenerate")]
    DegenerateElement(usize),
}

/// Node coordinates plus counterclockwise vertex cycles, all 0-based.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Mesh {
    pub nodes: Vec<Point>,
    pub elements: Vec<Vec<usize>>,
}

impl Mesh {
    pub fn new(nodes: Vec<Point>, elements: Vec<Vec<usize>>) -> Self {
        Self { nodes, elements }
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    /// Coordinates of the vertices of element `i`, in cycle order.
    pub fn element_vertices(&self, i: usize) -> Vec<Point> {
        self.elements[i].iter().map(|&v| self.nodes[v]).collect()
    }

    /// Sum of the shoelace areas of all elements.
    pub fn total_area(&self) -> f64 {
        (0..self.num_elements()).map(|i| geometry::signed_area(&self.element_vertices(i)).abs()).sum()
    }

    /// Structured `nx` by `ny` quadrilateral grid of `[0,1]^2`.
    ///
    /// Nodes are numbered row by row from the bottom-left corner, elements
    /// likewise.
    pub fn unit_square_grid(nx: usize, ny: usize) -> Self {
        assert!(nx > 0 && ny > 0);
        let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                nodes.push(Point::new(i as f64 / nx as f64, j as f64 / ny as f64));
            }
        }
        let id = |i: usize, j: usize| j * (nx + 1) + i;
        let mut elements = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                elements.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        Self { nodes, elements }
    }
}
