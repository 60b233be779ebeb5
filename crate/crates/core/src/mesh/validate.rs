use std::collections::{HashMap, HashSet};
use std::fmt;

use super::geometry::{element_diameter, is_simple, signed_area, strictly_inside, Point};
use super::Mesh;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFiniteNode(usize),
    CoincidentNodes(usize, usize),
    TooFewVertices(usize),
    InvalidIndex { element: usize, node: usize },
    RepeatedVertex(usize),
    Clockwise(usize),
    Degenerate(usize),
    SelfIntersecting(usize),
    CentroidNotInterior(usize),
    NonManifoldEdge(usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonFiniteNode(i) => write!(f, "node {i} has a non-finite coordinate"),
            Self::CoincidentNodes(i, j) => write!(f, "nodes {i} and {j} coincide"),
            Self::TooFewVertices(e) => write!(f, "element {e} has fewer than 3 vertices"),
            Self::InvalidIndex { element, node } => write!(f, "element {element} references missing node {node}"),
            Self::RepeatedVertex(e) => write!(f, "element {e} repeats a vertex"),
            Self::Clockwise(e) => write!(f, "element {e} is not counterclockwise"),
            Self::Degenerate(e) => write!(f, "element {e} has (near) zero area"),
            Self::SelfIntersecting(e) => write!(f, "element {e} is not a simple polygon"),
            Self::CentroidNotInterior(e) => write!(f, "element {e} does not contain its centroid"),
            Self::NonManifoldEdge(a, b) => write!(f, "edge ({a}, {b}) is shared by more than two elements"),
        }
    }
}

/// Every invariant violation found in a mesh. Empty means the mesh can be
/// refined.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        write!(f, "{} violations", self.violations.len())
    }
}

pub fn validate_mesh(mesh: &Mesh) -> ValidationReport {
    let mut violations = Vec::new();
    let n = mesh.num_nodes();

    for (i, p) in mesh.nodes.iter().enumerate() {
        if !p.is_finite() {
            violations.push(Violation::NonFiniteNode(i));
        }
    }
    violations.extend(coincident_nodes(&mesh.nodes));

    let mut edge_use: HashMap<(usize, usize), usize> = HashMap::new();
    for (e, elem) in mesh.elements.iter().enumerate() {
        if elem.len() < 3 {
            violations.push(Violation::TooFewVertices(e));
            continue;
        }
        if let Some(&node) = elem.iter().find(|&&v| v >= n) {
            violations.push(Violation::InvalidIndex { element: e, node });
            continue;
        }
        if elem.iter().collect::<HashSet<_>>().len() != elem.len() {
            violations.push(Violation::RepeatedVertex(e));
            continue;
        }
        for j in 0..elem.len() {
            let (a, b) = (elem[j], elem[(j + 1) % elem.len()]);
            *edge_use.entry((a.min(b), a.max(b))).or_default() += 1;
        }
        let verts = mesh.element_vertices(e);
        if verts.iter().any(|p| !p.is_finite()) {
            continue;
        }
        if !is_simple(&verts) {
            violations.push(Violation::SelfIntersecting(e));
            continue;
        }
        let area = signed_area(&verts);
        let diam = element_diameter(&verts);
        if area.abs() < 1e-14 * diam * diam || area == 0.0 {
            violations.push(Violation::Degenerate(e));
            continue;
        }
        if area < 0.0 {
            violations.push(Violation::Clockwise(e));
        }
        match super::geometry::polygon_centroid(&verts) {
            Ok(c) if strictly_inside(c, &verts, 1e-12 * diam) => {}
            _ => violations.push(Violation::CentroidNotInterior(e)),
        }
    }
    let mut bad: Vec<_> = edge_use.into_iter().filter(|&(_, c)| c > 2).map(|(k, _)| k).collect();
    bad.sort_unstable();
    violations.extend(bad.into_iter().map(|(a, b)| Violation::NonManifoldEdge(a, b)));

    ValidationReport { violations }
}

/// Pairs of nodes closer than `1e-12` times the bounding-box diagonal.
fn coincident_nodes(nodes: &[Point]) -> Vec<Violation> {
    let finite: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].is_finite()).collect();
    if finite.len() < 2 {
        return Vec::new();
    }
    let (mut lo, mut hi) = (nodes[finite[0]], nodes[finite[0]]);
    for &i in &finite {
        lo = Point::new(lo.x.min(nodes[i].x), lo.y.min(nodes[i].y));
        hi = Point::new(hi.x.max(nodes[i].x), hi.y.max(nodes[i].y));
    }
    let tol = 1e-12 * lo.dist(hi);
    let mut order = finite;
    order.sort_by(|&a, &b| nodes[a].x.total_cmp(&nodes[b].x).then(a.cmp(&b)));
    let mut out = Vec::new();
    for (s, &i) in order.iter().enumerate() {
        for &j in &order[s + 1..] {
            if nodes[j].x - nodes[i].x > tol {
                break;
            }
            if nodes[i].dist(nodes[j]) <= tol {
                out.push(Violation::CoincidentNodes(i.min(j), i.max(j)));
            }
        }
    }
    out.sort_by_key(|v| match v {
        Violation::CoincidentNodes(a, b) => (*a, *b),
        _ => unreachable!(),
    });
    out
}
