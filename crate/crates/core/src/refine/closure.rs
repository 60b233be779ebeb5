use std::collections::BTreeSet;

use crate::mesh::{HangingMask, Mesh, MeshTopology};

/// Elements that must be refined in addition to `marked` so that no edge ends
/// up with two hanging nodes.
///
/// Starting from the marked set, every neighbour of a newly added element is
/// examined: if one of its nontrivial edges (an edge with a hanging endpoint)
/// is also an edge of the current refinement set, it joins the set. The loop
/// stops once a round adds nothing. Returns the added elements only,
/// ascending.
pub fn closure_marked_set(mesh: &Mesh, topology: &MeshTopology, marked: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut refine_set: BTreeSet<usize> = marked.clone();
    let mut fresh: BTreeSet<usize> = marked.clone();
    let mut set_edges: BTreeSet<usize> = BTreeSet::new();

    while !fresh.is_empty() {
        let candidates: BTreeSet<usize> = fresh
            .iter()
            .flat_map(|&i| topology.neighbor[i].iter().copied())
            .filter(|t| !refine_set.contains(t))
            .collect();
        set_edges.extend(fresh.iter().flat_map(|&i| topology.elem2edge[i].iter().copied()));

        fresh = candidates
            .into_iter()
            .filter(|&t| {
                let mask = HangingMask::from_vertices(&mesh.element_vertices(t), None);
                if !mask.any() {
                    return false;
                }
                mask.nontrivial_edges()
                    .iter()
                    .zip(&topology.elem2edge[t])
                    .any(|(&nontrivial, k)| nontrivial && set_edges.contains(k))
            })
            .collect();
        refine_set.extend(fresh.iter().copied());
    }

    refine_set.difference(marked).copied().collect()
}
