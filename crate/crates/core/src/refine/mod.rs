//! Local refinement of polygonal meshes by 4-node subdivision.
//!
//! Each refined element is split into quadrilaterals by joining the
//! midpoints of its edges to its centroid. An edge that already carries a
//! hanging node is not bisected again: the hanging node itself plays the role
//! of the midpoint. Neighbours that would otherwise receive a second hanging
//! node on one edge are pulled into the refinement set first (see
//! [`closure_marked_set`]), so every edge of the result carries at most one
//! hanging node.
//!
//! The pipeline, in order:
//!
//! 1. [`closure_marked_set`] enlarges the marked set.
//! 2. [`subdivide_element`] stages the subcells of the additional elements.
//! 3. [`compute_cut_edges`] collects the edges that receive a midpoint.
//! 4. [`extend_elements`] inserts those midpoints into unrefined neighbours
//!    and into the staged subcells.
//! 5. [`partition_marked`] stages the subcells of the marked elements.
//! 6. [`assemble_refined_mesh`] appends the new nodes and renumbers.
//!
//! [`refine`] runs all of them.

mod closure;
mod connection;

pub use closure::closure_marked_set;
pub use connection::ConnectionNumber;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::mesh::geometry::{strictly_inside, Point};
use crate::mesh::{build_topology, HangingMask, Mesh, MeshError, MeshTopology};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RefineError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("marked element {index} is out of range (mesh has {num_elements} elements)")]
    MarkedOutOfRange { index: usize, num_elements: usize },
    #[error("the centroid of element {0} is not an interior point")]
    CentroidNotInterior(usize),
}

/// A cycle of connection numbers with, for each side `j` (from `cycle[j]` to
/// `cycle[j + 1]`), the input-mesh edge it coincides with. Sides that are
/// new, or halves of a bisected edge, carry `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StagedElement {
    pub cycle: Vec<ConnectionNumber>,
    pub edges: Vec<Option<usize>>,
}

/// Everything decided about one refinement step before the new mesh is
/// assembled.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RefinementPlan {
    pub marked: BTreeSet<usize>,
    pub additional: BTreeSet<usize>,
    pub cut_edges: BTreeSet<usize>,
    /// New cycles of unrefined neighbours that received midpoints.
    pub extended: BTreeMap<usize, Vec<ConnectionNumber>>,
    pub staged_additional: Vec<(usize, Vec<StagedElement>)>,
    pub staged_marked: Vec<(usize, Vec<StagedElement>)>,
}

impl RefinementPlan {
    /// `marked ∪ additional`, ascending.
    pub fn refinement_set(&self) -> BTreeSet<usize> {
        self.marked.union(&self.additional).copied().collect()
    }
}

fn check_centroid(mesh: &Mesh, topology: &MeshTopology, element: usize) -> Result<(), RefineError> {
    let verts = mesh.element_vertices(element);
    let tol = 1e-12 * topology.diameter[element];
    if strictly_inside(topology.centroid[element], &verts, tol) {
        Ok(())
    } else {
        Err(RefineError::CentroidNotInterior(element))
    }
}

/// Splits one element into `Nv - h` quadrilaterals, `h` being the number of
/// hanging vertices.
///
/// The subcell anchored at a non-hanging vertex `z_j` is
/// `[m_{j-1}, z_j, m_j, c]`, where `m_j` is the midpoint of local edge `j`,
/// or the hanging vertex on that edge when the edge is nontrivial. The edge
/// record keeps the input edge index for sides lying on a nontrivial edge,
/// since those may still be bisected by a neighbour's refinement.
pub fn subdivide_element(
    mesh: &Mesh,
    topology: &MeshTopology,
    element: usize,
) -> Result<Vec<StagedElement>, RefineError> {
    use ConnectionNumber::{Centroid, EdgeMidpoint, Vertex};

    check_centroid(mesh, topology, element)?;
    let index = &mesh.elements[element];
    let row = &topology.elem2edge[element];
    let nv = index.len();
    let prev = |j: usize| (j + nv - 1) % nv;
    let mask = HangingMask::from_vertices(&mesh.element_vertices(element), None);

    let mut side_point: Vec<ConnectionNumber> = row.iter().map(|&k| EdgeMidpoint(k)).collect();
    for j in (0..nv).filter(|&j| mask.is_hanging(j)) {
        side_point[prev(j)] = Vertex(index[j]);
    }
    for j in (0..nv).filter(|&j| mask.is_hanging(j)) {
        side_point[j] = Vertex(index[j]);
    }
    let kept_edge: Vec<Option<usize>> =
        mask.nontrivial_edges().iter().zip(row).map(|(&nontrivial, &k)| nontrivial.then_some(k)).collect();

    Ok((0..nv)
        .filter(|&j| !mask.is_hanging(j))
        .map(|j| StagedElement {
            cycle: vec![side_point[prev(j)], Vertex(index[j]), side_point[j], Centroid(element)],
            edges: vec![kept_edge[prev(j)], kept_edge[j], None, None],
        })
        .collect())
}

/// Trivial edges of the refinement set: exactly the edges that get a new
/// midpoint node.
pub fn compute_cut_edges(mesh: &Mesh, topology: &MeshTopology, refinement_set: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut cut = BTreeSet::new();
    for &i in refinement_set {
        let mask = HangingMask::from_vertices(&mesh.element_vertices(i), None);
        for (nontrivial, &k) in mask.nontrivial_edges().into_iter().zip(&topology.elem2edge[i]) {
            if !nontrivial {
                cut.insert(k);
            }
        }
    }
    cut
}

/// Inserts `EdgeMidpoint(k)` after `cycle[j]` for every side `j` lying on a
/// cut edge `k`.
pub fn extend_staged(staged: &StagedElement, cut_edges: &BTreeSet<usize>) -> StagedElement {
    let mut cycle = Vec::with_capacity(2 * staged.cycle.len());
    let mut edges = Vec::with_capacity(2 * staged.cycle.len());
    for (&p, &side) in staged.cycle.iter().zip(&staged.edges) {
        cycle.push(p);
        match side {
            Some(k) if cut_edges.contains(&k) => {
                edges.extend([None, None]);
                cycle.push(ConnectionNumber::EdgeMidpoint(k));
            }
            _ => edges.push(side),
        }
    }
    StagedElement { cycle, edges }
}

/// Inserts cut-edge midpoints into every unrefined neighbour of the
/// refinement set (returned, keyed by element) and into the `staged`
/// subcells in place.
pub fn extend_elements(
    mesh: &Mesh,
    topology: &MeshTopology,
    refinement_set: &BTreeSet<usize>,
    cut_edges: &BTreeSet<usize>,
    staged: &mut [(usize, Vec<StagedElement>)],
) -> BTreeMap<usize, Vec<ConnectionNumber>> {
    let neighbours: BTreeSet<usize> = refinement_set
        .iter()
        .flat_map(|&i| topology.neighbor[i].iter().copied())
        .filter(|t| !refinement_set.contains(t))
        .collect();

    let mut extended = BTreeMap::new();
    for t in neighbours {
        let original = StagedElement {
            cycle: mesh.elements[t].iter().map(|&v| ConnectionNumber::Vertex(v)).collect(),
            edges: topology.elem2edge[t].iter().map(|&k| Some(k)).collect(),
        };
        let grown = extend_staged(&original, cut_edges);
        if grown.cycle.len() != original.cycle.len() {
            extended.insert(t, grown.cycle);
        }
    }
    for (_, cells) in staged.iter_mut() {
        for cell in cells.iter_mut() {
            *cell = extend_staged(cell, cut_edges);
        }
    }
    extended
}

/// Subcells of each marked element, with cut-edge midpoints already inserted
/// on sides that lie on a nontrivial edge of the parent.
pub fn partition_marked(
    mesh: &Mesh,
    topology: &MeshTopology,
    marked: &BTreeSet<usize>,
    cut_edges: &BTreeSet<usize>,
) -> Result<Vec<(usize, Vec<StagedElement>)>, RefineError> {
    marked
        .iter()
        .map(|&i| {
            let cells = subdivide_element(mesh, topology, i)?;
            Ok((i, cells.iter().map(|c| extend_staged(c, cut_edges)).collect()))
        })
        .collect()
}

/// Builds the complete plan for refining `marked`.
pub fn plan_refinement(mesh: &Mesh, topology: &MeshTopology, marked: &[usize]) -> Result<RefinementPlan, RefineError> {
    let nt = mesh.num_elements();
    if let Some(&index) = marked.iter().find(|&&i| i >= nt) {
        return Err(RefineError::MarkedOutOfRange { index, num_elements: nt });
    }
    let marked: BTreeSet<usize> = marked.iter().copied().collect();
    if marked.is_empty() {
        return Ok(RefinementPlan::default());
    }
    let additional = closure_marked_set(mesh, topology, &marked);
    let refinement_set: BTreeSet<usize> = marked.union(&additional).copied().collect();
    for &i in &refinement_set {
        check_centroid(mesh, topology, i)?;
    }

    let mut staged_additional = additional
        .iter()
        .map(|&i| Ok((i, subdivide_element(mesh, topology, i)?)))
        .collect::<Result<Vec<_>, RefineError>>()?;
    let cut_edges = compute_cut_edges(mesh, topology, &refinement_set);
    let extended = extend_elements(mesh, topology, &refinement_set, &cut_edges, &mut staged_additional);
    let staged_marked = partition_marked(mesh, topology, &marked, &cut_edges)?;

    Ok(RefinementPlan { marked, additional, cut_edges, extended, staged_additional, staged_marked })
}

/// Applies a plan: each refined element keeps its slot for its first
/// subcell, the remaining subcells of additional elements are appended, then
/// those of marked elements. New nodes are numbered after the old ones, cut
/// edge midpoints (by edge index) before centroids (by element index).
pub fn assemble_refined_mesh(mesh: &Mesh, topology: &MeshTopology, plan: &RefinementPlan) -> Mesh {
    let mut base: Vec<Vec<ConnectionNumber>> =
        mesh.elements.iter().map(|e| e.iter().map(|&v| ConnectionNumber::Vertex(v)).collect()).collect();
    for (&t, cycle) in &plan.extended {
        base[t] = cycle.clone();
    }
    let mut appended = Vec::new();
    for (i, cells) in plan.staged_additional.iter().chain(&plan.staged_marked) {
        let mut it = cells.iter();
        if let Some(first) = it.next() {
            base[*i] = first.cycle.clone();
        }
        appended.extend(it.map(|c| c.cycle.clone()));
    }
    base.extend(appended);

    let used: BTreeSet<ConnectionNumber> = base.iter().flatten().copied().collect();
    let renumber: BTreeMap<ConnectionNumber, usize> = used.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let nodes: Vec<Point> = used
        .iter()
        .map(|c| match *c {
            ConnectionNumber::Vertex(i) => mesh.nodes[i],
            ConnectionNumber::EdgeMidpoint(k) => {
                let (a, b) = topology.edges[k];
                mesh.nodes[a].midpoint(mesh.nodes[b])
            }
            ConnectionNumber::Centroid(t) => topology.centroid[t],
        })
        .collect();
    let elements = base.iter().map(|cycle| cycle.iter().map(|c| renumber[c]).collect()).collect();
    Mesh { nodes, elements }
}

/// Refines the marked elements (plus whatever the closure adds) and returns
/// the new mesh. An empty marked set returns the mesh unchanged.
pub fn refine(mesh: &Mesh, marked: &[usize]) -> Result<Mesh, RefineError> {
    if marked.is_empty() {
        return Ok(mesh.clone());
    }
    let topology = build_topology(mesh)?;
    let plan = plan_refinement(mesh, &topology, marked)?;
    Ok(assemble_refined_mesh(mesh, &topology, &plan))
}

#[cfg(test)]
mod tests;
