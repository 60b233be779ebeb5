//! ESTIMATE, MARK and the adaptive loop around them.
//!
//! The indicator is the residual-type estimator for lowest-order virtual
//! elements:
//!
//! ```text
//! η_K² = h_K² ‖f‖²_K  +  S_K(u_h - Π u_h, u_h - Π u_h)  +  ½ Σ_{e ⊂ ∂K interior} h_e ‖[∂_n Π u_h]‖²_e
//! ```
//!
//! `Π u_h` is affine on each element, so the normal jump is constant along
//! an edge and its squared norm is `|e| [∂_n Π u_h]²`. The source norm
//! `‖f‖²_K` is integrated with a composite degree-5 rule (see
//! [`source_norm_squared`]) so that a source concentrated between element
//! centroids still shows up on coarse meshes.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mesh::{build_topology, Mesh, MeshTopology, Point};
use crate::refine::{refine, RefineError};
use crate::vem::{self, LocalProjection, VemError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdaptError {
    #[error("marking parameter must lie in (0, 1], got {0}")]
    InvalidTheta(f64),
    #[error(transparent)]
    Solve(#[from] VemError),
    #[error(transparent)]
    Refine(#[from] RefineError),
}

/// Per-element error indicators `η_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorVector {
    pub eta: Vec<f64>,
}

impl IndicatorVector {
    /// `sqrt(Σ η_K²)`.
    pub fn total(&self) -> f64 {
        self.eta.iter().map(|e| e * e).sum::<f64>().sqrt()
    }

    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkParams {
    theta: f64,
}

impl MarkParams {
    pub fn new(theta: f64) -> Result<Self, AdaptError> {
        if theta > 0.0 && theta <= 1.0 {
            Ok(Self { theta })
        } else {
            Err(AdaptError::InvalidTheta(theta))
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

impl Default for MarkParams {
    fn default() -> Self {
        Self { theta: 0.4 }
    }
}

/// Squared indicator contributions of one element, kept apart for
/// inspection.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IndicatorTerms {
    pub residual: f64,
    pub stabilization: f64,
    pub jump: f64,
}

impl IndicatorTerms {
    pub fn eta(&self) -> f64 {
        (self.residual + self.stabilization + self.jump).sqrt()
    }
}

/// The three squared contributions to `η_K²` for every element.
pub fn estimate_terms(
    mesh: &Mesh,
    topology: &MeshTopology,
    u: &[f64],
    f: impl Fn(Point) -> f64,
) -> Result<Vec<IndicatorTerms>, VemError> {
    let nt = mesh.num_elements();
    let mut terms = vec![IndicatorTerms::default(); nt];
    let mut gradients = Vec::with_capacity(nt);
    for (i, elem) in mesh.elements.iter().enumerate() {
        let proj = LocalProjection::new(&mesh.element_vertices(i))?;
        let local_u: Vec<f64> = elem.iter().map(|&v| u[v]).collect();
        let f_norm2 = source_norm_squared(&mesh.element_vertices(i), proj.centroid, &f);
        terms[i].residual = proj.diameter * proj.diameter * f_norm2;
        terms[i].stabilization = proj.projection_remainder(&local_u).norm_squared();
        gradients.push(proj.projected_gradient(&local_u));
    }
    for (k, &(a, b)) in topology.edge2elem.iter().enumerate() {
        if a == b {
            continue;
        }
        let (p, q) = topology.edges[k];
        let tangent = mesh.nodes[q] - mesh.nodes[p];
        let len = tangent.norm();
        let normal = Point::new(tangent.y / len, -tangent.x / len);
        let jump = (gradients[a] - gradients[b]).dot(normal);
        let contribution = 0.5 * len * len * jump * jump;
        terms[a].jump += contribution;
        terms[b].jump += contribution;
    }
    Ok(terms)
}

// 7-point degree-5 rule on the reference triangle: (barycentric a, b, b) orbits
const CENTER_WEIGHT: f64 = 0.225;
const ORBITS: [(f64, f64, f64); 2] = [
    (0.059_715_871_789_770, 0.470_142_064_105_115, 0.132_394_152_788_506),
    (0.797_426_985_353_087, 0.101_286_507_323_456, 0.125_939_180_544_827),
];
/// Levels of uniform 1-to-4 splitting applied to each fan triangle.
const SPLIT_LEVELS: usize = 2;

fn triangle_rule(a: Point, b: Point, c: Point, f: &impl Fn(Point) -> f64) -> f64 {
    let area = 0.5 * (b - a).cross(c - a).abs();
    let at = |la: f64, lb: f64, lc: f64| f(a * la + b * lb + c * lc);
    let third = 1.0 / 3.0;
    let mut sum = CENTER_WEIGHT * at(third, third, third);
    for (p, q, w) in ORBITS {
        sum += w * (at(p, q, q) + at(q, p, q) + at(q, q, p));
    }
    area * sum
}

fn split_rule(a: Point, b: Point, c: Point, level: usize, f: &impl Fn(Point) -> f64) -> f64 {
    if level == 0 {
        return triangle_rule(a, b, c, f);
    }
    let (ab, bc, ca) = (a.midpoint(b), b.midpoint(c), c.midpoint(a));
    split_rule(a, ab, ca, level - 1, f)
        + split_rule(ab, b, bc, level - 1, f)
        + split_rule(ca, bc, c, level - 1, f)
        + split_rule(ab, bc, ca, level - 1, f)
}

/// `∫_K f²` over the fan of triangles joining `center` to each side, each
/// split twice uniformly and integrated with a 7-point degree-5 rule.
pub fn source_norm_squared(verts: &[Point], center: Point, f: impl Fn(Point) -> f64) -> f64 {
    let nv = verts.len();
    let sq = |p: Point| {
        let v = f(p);
        v * v
    };
    (0..nv).map(|j| split_rule(center, verts[j], verts[(j + 1) % nv], SPLIT_LEVELS, &sq)).sum()
}

/// Residual-type a posteriori indicators for a discrete solution `u`.
pub fn estimate(
    mesh: &Mesh,
    topology: &MeshTopology,
    u: &[f64],
    f: impl Fn(Point) -> f64,
) -> Result<IndicatorVector, VemError> {
    let terms = estimate_terms(mesh, topology, u, f)?;
    Ok(IndicatorVector { eta: terms.iter().map(IndicatorTerms::eta).collect() })
}

/// Dörfler (bulk) marking: the shortest prefix of the elements sorted by
/// decreasing indicator (ties by index) whose squared indicators add up to
/// at least `theta` times the total. Returned ascending.
pub fn dorfler_mark(eta: &IndicatorVector, params: MarkParams) -> Vec<usize> {
    let mut order: Vec<usize> = (0..eta.len()).collect();
    order.sort_by(|&a, &b| eta.eta[b].total_cmp(&eta.eta[a]).then(a.cmp(&b)));
    // summing in the same order as the prefix makes theta = 1 reach the total exactly
    let total: f64 = order.iter().map(|&i| eta.eta[i] * eta.eta[i]).sum();
    let target = params.theta * total;
    let mut acc = 0.0;
    let mut marked = BTreeSet::new();
    for &i in &order {
        if acc >= target {
            break;
        }
        acc += eta.eta[i] * eta.eta[i];
        marked.insert(i);
    }
    marked.into_iter().collect()
}

/// Stopping rules for [`adaptive_loop`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveParams {
    pub mark: MarkParams,
    /// Number of refinements; the loop solves `max_steps + 1` times at most.
    pub max_steps: usize,
    /// Stop before refining once the mesh has at least this many nodes.
    pub dof_cap: Option<usize>,
    /// Stop once the total estimator is at or below this value.
    pub eta_floor: f64,
}

impl Default for AdaptiveParams {
    fn default() -> Self {
        Self { mark: MarkParams::default(), max_steps: 20, dof_cap: None, eta_floor: 1e-12 }
    }
}

/// One row of the convergence history.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 1-based: step 1 is the solve on the initial mesh.
    pub step: usize,
    pub num_nodes: usize,
    pub num_elements: usize,
    pub total_eta: f64,
    pub marked_count: usize,
}

/// Everything produced on one mesh of the adaptive sequence.
#[derive(Debug, Clone)]
pub struct AdaptiveStep {
    pub record: StepRecord,
    pub mesh: Mesh,
    pub solution: Vec<f64>,
    pub indicators: IndicatorVector,
    pub marked: Vec<usize>,
}

/// SOLVE → ESTIMATE → MARK → REFINE, starting from `initial`.
pub fn adaptive_loop(
    initial: &Mesh,
    f: impl Fn(Point) -> f64,
    g: impl Fn(Point) -> f64,
    params: AdaptiveParams,
) -> Result<Vec<AdaptiveStep>, AdaptError> {
    let mut mesh = initial.clone();
    let mut history = Vec::new();
    for step in 0..=params.max_steps {
        let topology = build_topology(&mesh).map_err(VemError::from)?;
        let system = vem::assemble(&mesh, &topology, &f)?;
        let solution = vem::solve_dirichlet(&system, &mesh.nodes, &g)?;
        let indicators = estimate(&mesh, &topology, &solution, &f)?;
        let total_eta = indicators.total();

        let done = step == params.max_steps
            || params.dof_cap.is_some_and(|cap| mesh.num_nodes() >= cap)
            || total_eta <= params.eta_floor;
        let marked = if done { Vec::new() } else { dorfler_mark(&indicators, params.mark) };
        let record = StepRecord {
            step: step + 1,
            num_nodes: mesh.num_nodes(),
            num_elements: mesh.num_elements(),
            total_eta,
            marked_count: marked.len(),
        };
        let next = if done { None } else { Some(refine(&mesh, &marked)?) };
        history.push(AdaptiveStep { record, mesh, solution, indicators, marked });
        match next {
            Some(m) => mesh = m,
            None => break,
        }
    }
    Ok(history)
}

/// The peaked manufactured solution on the unit square,
/// `u = x y (1-x) (1-y) exp(-1000 ((x - 0.5)² + (y - 0.117)²))`, with its
/// source term `f = -Δu`.
pub mod peak {
    use crate::mesh::Point;

    pub const CENTER: Point = Point::new(0.5, 0.117);
    const SHARPNESS: f64 = 1000.0;

    fn parts(p: Point) -> (f64, f64, f64) {
        let (x, y) = (p.x, p.y);
        let dx = x - CENTER.x;
        let dy = y - CENTER.y;
        let e = (-SHARPNESS * (dx * dx + dy * dy)).exp();
        (x * (1.0 - x), y * (1.0 - y), e)
    }

    pub fn solution(p: Point) -> f64 {
        let (a, b, e) = parts(p);
        a * b * e
    }

    /// `-Δu`, from `u = a(x) b(y) E(x, y)` with `E = exp(-c r²)`:
    /// `u_xx = b (a'' E + 2 a' E_x + a E_xx)` and likewise in `y`.
    pub fn source(p: Point) -> f64 {
        let (a, b, e) = parts(p);
        let c = SHARPNESS;
        let (dx, dy) = (p.x - CENTER.x, p.y - CENTER.y);
        let (da, db) = (1.0 - 2.0 * p.x, 1.0 - 2.0 * p.y);
        let ex = -2.0 * c * dx;
        let ey = -2.0 * c * dy;
        let exx = -2.0 * c + ex * ex;
        let eyy = -2.0 * c + ey * ey;
        let u_xx = b * (-2.0 + 2.0 * da * ex + a * exx);
        let u_yy = a * (-2.0 + 2.0 * db * ey + b * eyy);
        -(u_xx + u_yy) * e
    }
}
