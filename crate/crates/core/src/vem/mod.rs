//! Lowest-order virtual element discretization of `-Δu = f` with Dirichlet
//! data `u = g` on polygonal meshes. Hanging nodes are ordinary vertices of
//! their elements, so no constraint handling is needed.

pub mod local;
pub mod sparse;

pub use local::{local_load, local_stiffness, LocalProjection};
pub use sparse::CsrMatrix;

use thiserror::Error;

use crate::mesh::{build_topology, Mesh, MeshError, MeshTopology, Point};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VemError {
    #[error("the local projection matrix G is singular (degenerate element)")]
    SingularG,
    #[error("linear solver stopped at relative residual {0:e}")]
    SolverFailure(f64),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// Relative residual the Dirichlet solve must reach.
pub const SOLVER_TOLERANCE: f64 = 1e-10;

/// Global stiffness, load vector and boundary flags, before boundary
/// conditions are applied.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub boundary: Vec<bool>,
}

/// Scatters local stiffness matrices and load vectors by global vertex
/// index. Boundary vertices are the endpoints of boundary edges.
pub fn assemble(mesh: &Mesh, topology: &MeshTopology, f: impl Fn(Point) -> f64) -> Result<LinearSystem, VemError> {
    let n = mesh.num_nodes();
    let mut triplets = Vec::new();
    let mut rhs = vec![0.0; n];
    for (i, elem) in mesh.elements.iter().enumerate() {
        let verts = mesh.element_vertices(i);
        let k = local_stiffness(&verts)?;
        let load = local_load(&verts, &f)?;
        for (a, &ga) in elem.iter().enumerate() {
            rhs[ga] += load[a];
            for (b, &gb) in elem.iter().enumerate() {
                triplets.push((ga, gb, k[(a, b)]));
            }
        }
    }
    Ok(LinearSystem { matrix: CsrMatrix::from_triplets(n, triplets), rhs, boundary: topology.boundary_nodes(n) })
}

/// Imposes `u = g` on boundary vertices and solves for the interior values.
pub fn solve_dirichlet(system: &LinearSystem, nodes: &[Point], g: impl Fn(Point) -> f64) -> Result<Vec<f64>, VemError> {
    let n = system.rhs.len();
    let mut u: Vec<f64> = (0..n).map(|i| if system.boundary[i] { g(nodes[i]) } else { 0.0 }).collect();
    let interior: Vec<bool> = system.boundary.iter().map(|&b| !b).collect();
    let free: Vec<usize> = (0..n).filter(|&i| interior[i]).collect();
    if free.is_empty() {
        return Ok(u);
    }

    // b_I - A_IB g_B
    let rhs: Vec<f64> = free
        .iter()
        .map(|&r| {
            let lifted: f64 = system.matrix.row(r).filter(|&(c, _)| system.boundary[c]).map(|(c, v)| v * u[c]).sum();
            system.rhs[r] - lifted
        })
        .collect();
    let reduced = system.matrix.submatrix(&interior);
    let res = sparse::conjugate_gradient(&reduced, &rhs, 1e-12, 20 * free.len() + 1000);
    if res.relative_residual.is_nan() || res.relative_residual > SOLVER_TOLERANCE {
        return Err(VemError::SolverFailure(res.relative_residual));
    }
    for (&i, x) in free.iter().zip(res.x) {
        u[i] = x;
    }
    Ok(u)
}

/// Builds the topology, assembles and solves in one go.
pub fn solve_poisson(
    mesh: &Mesh,
    f: impl Fn(Point) -> f64,
    g: impl Fn(Point) -> f64,
) -> Result<(MeshTopology, Vec<f64>), VemError> {
    let topology = build_topology(mesh)?;
    let system = assemble(mesh, &topology, f)?;
    let u = solve_dirichlet(&system, &mesh.nodes, g)?;
    Ok((topology, u))
}
