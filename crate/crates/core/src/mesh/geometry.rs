//! Planar polygon measures: shoelace area, area-weighted centroid, diameter,
//! and the small predicates used by validation and refinement.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

use super::MeshError;

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point::new(x, y)
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// Signed shoelace area; positive for counterclockwise vertex order.
pub fn signed_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    let mut sum = 0.0;
    for i in 0..n {
        let (p, q) = (vertices[i], vertices[(i + 1) % n]);
        sum += p.x * q.y - q.x * p.y;
    }
    0.5 * sum
}

/// Unsigned shoelace area.
///
/// Fails with [`MeshError::DegeneratePolygon`] when fewer than three vertices
/// are given or the area is below `1e-14 * diameter^2`.
pub fn polygon_area(vertices: &[Point]) -> Result<f64, MeshError> {
    if vertices.len() < 3 {
        return Err(MeshError::DegeneratePolygon);
    }
    let area = signed_area(vertices).abs();
    let diam = element_diameter(vertices);
    if area.is_nan() || area < 1e-14 * diam * diam || area == 0.0 {
        return Err(MeshError::DegeneratePolygon);
    }
    Ok(area)
}

/// Area-weighted centroid (barycenter) of a simple polygon.
pub fn polygon_centroid(vertices: &[Point]) -> Result<Point, MeshError> {
    polygon_area(vertices)?;
    let n = vertices.len();
    let mut c = Point::default();
    let mut twice_area = 0.0;
    for i in 0..n {
        let (p, q) = (vertices[i], vertices[(i + 1) % n]);
        let w = p.x * q.y - q.x * p.y;
        twice_area += w;
        c = c + (p + q) * w;
    }
    Ok(c * (1.0 / (3.0 * twice_area)))
}

/// Largest pairwise vertex distance.
pub fn element_diameter(vertices: &[Point]) -> f64 {
    let mut diam: f64 = 0.0;
    for (i, &p) in vertices.iter().enumerate() {
        for &q in &vertices[i + 1..] {
            diam = diam.max(p.dist(q));
        }
    }
    diam
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Whether `p` lies strictly inside the polygon, at a distance of more than
/// `tol` from every edge. Uses the crossing-number rule.
pub fn strictly_inside(p: Point, vertices: &[Point], tol: f64) -> bool {
    let n = vertices.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        if point_segment_distance(p, a, b) <= tol {
            return false;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(p: Point, a: Point, b: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test (touching counts).
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(a, c, d))
        || (d2 == 0.0 && on_segment(b, c, d))
        || (d3 == 0.0 && on_segment(c, a, b))
        || (d4 == 0.0 && on_segment(d, a, b))
}

/// Whether the closed polygon has no self-intersections: non-adjacent edges
/// must be disjoint, adjacent edges may only share their common vertex.
pub fn is_simple(vertices: &[Point]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        for j in i + 1..n {
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // consecutive edges fold back onto each other
                let shared = if j == i + 1 { b } else { a };
                let (u, v) = if j == i + 1 { (a - shared, d - shared) } else { (b - shared, c - shared) };
                if u.cross(v) == 0.0 && u.dot(v) > 0.0 {
                    return false;
                }
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}
