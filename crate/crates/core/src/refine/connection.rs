use std::fmt;

/// A point of the refined mesh, named by what it comes from: an existing
/// vertex, the midpoint of an edge of the input mesh, or the centroid of an
/// input element.
///
/// The flat integer encoding orders vertices first, then edge midpoints, then
/// centroids: `Vertex(i) -> i`, `EdgeMidpoint(k) -> N + k`,
/// `Centroid(t) -> N + NE + t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConnectionNumber {
    Vertex(usize),
    EdgeMidpoint(usize),
    Centroid(usize),
}

impl ConnectionNumber {
    pub fn encode(self, num_nodes: usize, num_edges: usize) -> usize {
        match self {
            Self::Vertex(i) => i,
            Self::EdgeMidpoint(k) => num_nodes + k,
            Self::Centroid(t) => num_nodes + num_edges + t,
        }
    }

    pub fn decode(code: usize, num_nodes: usize, num_edges: usize, num_elements: usize) -> Option<Self> {
        if code < num_nodes {
            Some(Self::Vertex(code))
        } else if code < num_nodes + num_edges {
            Some(Self::EdgeMidpoint(code - num_nodes))
        } else if code < num_nodes + num_edges + num_elements {
            Some(Self::Centroid(code - num_nodes - num_edges))
        } else {
            None
        }
    }
}

impl fmt::Display for ConnectionNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Vertex(i) => write!(f, "z{i}"),
            Self::EdgeMidpoint(k) => write!(f, "e{k}"),
            Self::Centroid(t) => write!(f, "K{t}"),
        }
    }
}
