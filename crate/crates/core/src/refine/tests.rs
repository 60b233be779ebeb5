use super::*;
use crate::mesh::geometry::signed_area;
use crate::mesh::{check_conformity, validate_mesh};
use crate::samples;
use ConnectionNumber::{Centroid, EdgeMidpoint, Vertex};

fn set(items: &[usize]) -> BTreeSet<usize> {
    items.iter().copied().collect()
}

fn triangle() -> Mesh {
    Mesh::new(vec![Point::new(0., 0.), Point::new(1., 0.), Point::new(0., 1.)], vec![vec![0, 1, 2]])
}

fn assert_healthy(before: &Mesh, after: &Mesh) {
    let r = validate_mesh(after);
    assert!(r.is_empty(), "{r}");
    let c = check_conformity(after);
    assert!(c.is_empty(), "{c:?}");
    let (a0, a1) = (before.total_area(), after.total_area());
    assert!((a0 - a1).abs() <= 1e-12 * a0, "{a0} vs {a1}");
}

fn staged_coords(mesh: &Mesh, topo: &MeshTopology, cell: &StagedElement) -> Vec<Point> {
    cell.cycle
        .iter()
        .map(|c| match *c {
            Vertex(i) => mesh.nodes[i],
            EdgeMidpoint(k) => mesh.nodes[topo.edges[k].0].midpoint(mesh.nodes[topo.edges[k].1]),
            Centroid(t) => topo.centroid[t],
        })
        .collect()
}

#[test]
fn closure_of_isolated_square_is_empty() {
    let m = Mesh::unit_square_grid(1, 1);
    let t = build_topology(&m).unwrap();
    assert!(closure_marked_set(&m, &t, &set(&[0])).is_empty());
}

#[test]
fn closure_pulls_in_pentagon_with_hanging_node() {
    let m = samples::square_and_pentagon();
    let t = build_topology(&m).unwrap();
    assert_eq!(closure_marked_set(&m, &t, &set(&[0])), set(&[2]));
    // the pentagon itself has no hanging-node neighbours
    assert!(closure_marked_set(&m, &t, &set(&[2])).is_empty());
}

#[test]
fn closure_cascades_two_rounds() {
    let m = samples::cascade();
    let t = build_topology(&m).unwrap();
    assert_eq!(closure_marked_set(&m, &t, &set(&[0])), set(&[2, 5]));
    assert_eq!(closure_marked_set(&m, &t, &set(&[1])), set(&[2, 5]));
    assert!(closure_marked_set(&m, &t, &set(&[3])).is_empty());
    // idempotent
    assert!(closure_marked_set(&m, &t, &set(&[0, 2, 5])).is_empty());
}

#[test]
fn subdivide_square() {
    let m = Mesh::unit_square_grid(1, 1);
    let t = build_topology(&m).unwrap();
    let cells = subdivide_element(&m, &t, 0).unwrap();
    assert_eq!(cells.len(), 4);
    let e = &t.elem2edge[0];
    for (j, cell) in cells.iter().enumerate() {
        let prev = (j + 3) % 4;
        assert_eq!(cell.cycle, vec![EdgeMidpoint(e[prev]), Vertex(m.elements[0][j]), EdgeMidpoint(e[j]), Centroid(0)]);
        assert_eq!(cell.edges, vec![None; 4]);
    }
}

#[test]
fn subdivide_pentagon_with_two_hanging_vertices() {
    // z1 is the midpoint of z0 z2 and z4 the midpoint of z3 z0
    let raw = [(0., 0.), (1., 0.), (2., 0.), (0., 2.), (0., 1.)];
    let m = Mesh::new(raw.iter().map(|&(x, y)| Point::new(x, y)).collect(), vec![vec![0, 1, 2, 3, 4]]);
    let t = build_topology(&m).unwrap();
    let cells = subdivide_element(&m, &t, 0).unwrap();
    let e = &t.elem2edge[0];
    assert_eq!(cells.len(), 3);
    assert_eq!(cells[0].cycle, vec![Vertex(4), Vertex(0), Vertex(1), Centroid(0)]);
    assert_eq!(cells[0].edges, vec![Some(e[4]), Some(e[0]), None, None]);
    assert_eq!(cells[1].cycle, vec![Vertex(1), Vertex(2), EdgeMidpoint(e[2]), Centroid(0)]);
    assert_eq!(cells[1].edges, vec![Some(e[1]), None, None, None]);
    assert_eq!(cells[2].cycle, vec![EdgeMidpoint(e[2]), Vertex(3), Vertex(4), Centroid(0)]);

    let total: f64 = cells.iter().map(|c| signed_area(&staged_coords(&m, &t, c))).sum();
    assert!((total - 2.0).abs() < 1e-14);

    // only the side z2 z3 is trivial
    let cut = compute_cut_edges(&m, &t, &set(&[0]));
    assert_eq!(cut, set(&[e[2]]));
    let mask = HangingMask::from_vertices(&m.element_vertices(0), None);
    let oracle = (0..5).filter(|&j| !mask.is_hanging(j) && !mask.is_hanging((j + 1) % 5)).count();
    assert_eq!(cut.len(), oracle);
}

#[test]
fn subdivide_triangle_conserves_area() {
    let m = triangle();
    let t = build_topology(&m).unwrap();
    let cells = subdivide_element(&m, &t, 0).unwrap();
    assert_eq!(cells.len(), 3);
    let areas: Vec<f64> = cells.iter().map(|c| signed_area(&staged_coords(&m, &t, c))).collect();
    assert!(areas.iter().all(|&a| a > 0.0));
    assert!((areas.iter().sum::<f64>() - 0.5).abs() < 1e-15);
}

#[test]
fn cut_edges() {
    let m = Mesh::unit_square_grid(1, 1);
    let t = build_topology(&m).unwrap();
    assert_eq!(compute_cut_edges(&m, &t, &set(&[0])), set(&[0, 1, 2, 3]));
    assert!(compute_cut_edges(&m, &t, &set(&[])).is_empty());
}

#[test]
fn extension_of_neighbours() {
    // left square refined: right square gains the shared midpoint
    let m = Mesh::unit_square_grid(2, 1);
    let t = build_topology(&m).unwrap();
    let plan = plan_refinement(&m, &t, &[0]).unwrap();
    assert_eq!(plan.extended.len(), 1);
    let shared = t.find_edge(1, 4).unwrap();
    assert_eq!(plan.extended[&1], vec![Vertex(1), Vertex(2), Vertex(5), Vertex(4), EdgeMidpoint(shared)]);

    // neighbour sharing two cut edges grows by two
    let m = Mesh::unit_square_grid(2, 2);
    let t = build_topology(&m).unwrap();
    let plan = plan_refinement(&m, &t, &[0, 3]).unwrap();
    let grown = plan.extended[&1].len() - m.elements[1].len();
    let shared = t.elem2edge[1].iter().filter(|k| plan.cut_edges.contains(k)).count();
    assert_eq!(grown, 2);
    assert_eq!(grown, shared);

    // refining the pentagon leaves the squares on its hanging side alone
    let m = samples::square_and_pentagon();
    let t = build_topology(&m).unwrap();
    let plan = plan_refinement(&m, &t, &[2]).unwrap();
    assert!(plan.additional.is_empty());
    assert!(plan.extended.is_empty());
}

#[test]
fn partition_grows_the_element_table() {
    let m = Mesh::unit_square_grid(2, 2);
    assert_eq!(refine(&m, &[0]).unwrap().num_elements(), 7);
    assert_eq!(refine(&triangle(), &[0]).unwrap().num_elements(), 3);
    let m = Mesh::unit_square_grid(3, 3);
    assert_eq!(refine(&m, &[0, 8]).unwrap().num_elements(), 15);
}

#[test]
fn isolated_square_and_triangle() {
    let sq = Mesh::unit_square_grid(1, 1);
    let r = refine(&sq, &[0]).unwrap();
    assert_eq!((r.num_nodes(), r.num_elements()), (9, 4));
    assert_healthy(&sq, &r);
    for i in 0..4 {
        assert!((signed_area(&r.element_vertices(i)) - 0.25).abs() < 1e-15);
    }
    let r = refine(&triangle(), &[0]).unwrap();
    assert_eq!((r.num_nodes(), r.num_elements()), (7, 3));
    assert_healthy(&triangle(), &r);
}

#[test]
fn corner_of_two_by_two_grid_hand_executed() {
    let m = Mesh::unit_square_grid(2, 2);
    let r = refine(&m, &[0]).unwrap();
    let expected_nodes: Vec<Point> = [
        (0., 0.),
        (0.5, 0.),
        (1., 0.),
        (0., 0.5),
        (0.5, 0.5),
        (1., 0.5),
        (0., 1.),
        (0.5, 1.),
        (1., 1.),
        (0.25, 0.),
        (0., 0.25),
        (0.5, 0.25),
        (0.25, 0.5),
        (0.25, 0.25),
    ]
    .iter()
    .map(|&(x, y)| Point::new(x, y))
    .collect();
    assert_eq!(r.nodes, expected_nodes);
    assert_eq!(
        r.elements,
        vec![
            vec![10, 0, 9, 13],
            vec![1, 2, 5, 4, 11],
            vec![3, 12, 4, 7, 6],
            vec![4, 5, 8, 7],
            vec![9, 1, 11, 13],
            vec![11, 4, 12, 13],
            vec![12, 3, 10, 13],
        ]
    );
    assert_healthy(&m, &r);
}

#[test]
fn empty_marked_set_is_identity() {
    let m = samples::cascade();
    assert_eq!(refine(&m, &[]).unwrap(), m);
}

#[test]
fn cascade_refines_the_closure_and_extends_neighbours() {
    let m = samples::cascade();
    let t = build_topology(&m).unwrap();
    let plan = plan_refinement(&m, &t, &[0]).unwrap();
    assert_eq!(plan.additional, set(&[2, 5]));
    assert_eq!(plan.extended.keys().copied().collect::<Vec<_>>(), vec![1, 4]);
    let r = assemble_refined_mesh(&m, &t, &plan);
    // 4 + (5 - 1) + (5 - 1) subcells replace 3 elements
    assert_eq!(r.num_elements(), 6 - 3 + 4 + 4 + 4);
    assert_eq!(r.num_nodes(), m.num_nodes() + plan.cut_edges.len() + 3);
    assert_healthy(&m, &r);
}

#[test]
fn marked_neighbours_across_a_hanging_side_stay_conforming() {
    // element 0 sees side (1,7) as trivial and cuts it; the pentagon sees
    // it as nontrivial, so its subcell must pick up the same midpoint
    let m = samples::square_and_pentagon();
    let r = refine(&m, &[0, 2]).unwrap();
    assert_healthy(&m, &r);
    let mid = r.nodes.iter().position(|&p| p == Point::new(1.0, 0.25)).unwrap();
    let users = r.elements.iter().filter(|e| e.contains(&mid)).count();
    assert_eq!(users, 3);
}

#[test]
fn repeated_refinement_of_element_zero() {
    let mut m = Mesh::unit_square_grid(3, 3);
    let initial = m.clone();
    for _ in 0..5 {
        let next = refine(&m, &[0]).unwrap();
        assert!(next.num_nodes() > m.num_nodes() && next.num_elements() > m.num_elements());
        assert_healthy(&initial, &next);
        m = next;
    }
}

#[test]
fn errors() {
    let m = Mesh::unit_square_grid(2, 2);
    assert_eq!(refine(&m, &[4]), Err(RefineError::MarkedOutOfRange { index: 4, num_elements: 4 }));

    let raw = [(0., 0.), (1., 0.), (1., 0.1), (0.1, 0.1), (0.1, 0.9), (1., 0.9), (1., 1.), (0., 1.)];
    let c_shape = Mesh::new(raw.iter().map(|&(x, y)| Point::new(x, y)).collect(), vec![(0..8).collect()]);
    assert_eq!(refine(&c_shape, &[0]), Err(RefineError::CentroidNotInterior(0)));
}

#[test]
fn duplicates_in_marked_are_ignored() {
    let m = Mesh::unit_square_grid(3, 2);
    assert_eq!(refine(&m, &[4, 1, 4, 1]).unwrap(), refine(&m, &[1, 4]).unwrap());
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn random_rounds_keep_the_mesh_healthy(n in 2usize..5, picks in proptest::collection::vec(0usize..10_000, 1..4), rounds in 1usize..4) {
            let initial = Mesh::unit_square_grid(n, n);
            let mut m = initial.clone();
            for r in 0..rounds {
                let marked: Vec<usize> = picks.iter().map(|p| (p + 7 * r) % m.num_elements()).collect();
                let next = refine(&m, &marked).unwrap();
                prop_assert!(validate_mesh(&next).is_empty());
                prop_assert!(check_conformity(&next).is_empty());
                prop_assert!((next.total_area() - 1.0).abs() < 1e-12);
                prop_assert_eq!(&refine(&m, &marked).unwrap(), &next);
                m = next;
            }
        }
    }
}
