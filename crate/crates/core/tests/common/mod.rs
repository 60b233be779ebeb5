//! Oracles shared by the integration tests. Nothing here calls into the
//! library's own refinement or topology code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use nalgebra::{DMatrix, DVector};
use polyrefine::mesh::{Mesh, Point};

/// Five-point finite differences for `-Δu = 1`, `u = 0` on the boundary of
/// the unit square with `n` cells per side, solved densely. Entry `(i, j)`
/// is the value at `(i/n, j/n)`.
pub fn five_point_oracle(n: usize) -> DMatrix<f64> {
    let m = n - 1;
    let h = 1.0 / n as f64;
    let idx = |i: usize, j: usize| (j - 1) * m + (i - 1);
    let mut a = DMatrix::<f64>::zeros(m * m, m * m);
    let b = DVector::<f64>::from_element(m * m, h * h);
    for j in 1..n {
        for i in 1..n {
            let r = idx(i, j);
            a[(r, r)] = 4.0;
            for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                if ni >= 1 && nj >= 1 && ni < n as i64 && nj < n as i64 {
                    a[(r, idx(ni as usize, nj as usize))] = -1.0;
                }
            }
        }
    }
    let x = a.lu().solve(&b).expect("nonsingular");
    DMatrix::from_fn(n + 1, n + 1, |i, j| if i == 0 || j == 0 || i == n || j == n { 0.0 } else { x[idx(i, j)] })
}

fn is_hanging(prev: Point, z: Point, next: Point, diam: f64) -> bool {
    let mx = 0.5 * (prev.x + next.x);
    let my = 0.5 * (prev.y + next.y);
    (z.x - mx).hypot(z.y - my) < 1e-10 * diam
}

/// Sides `(a, b)` of element `e`, unordered, that touch a hanging vertex.
fn nontrivial_sides(mesh: &Mesh, e: usize) -> Vec<(usize, usize)> {
    let elem = &mesh.elements[e];
    let n = elem.len();
    let p: Vec<Point> = elem.iter().map(|&i| mesh.nodes[i]).collect();
    let diam = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| p[a].dist(p[b])).fold(0.0, f64::max);
    let hanging: Vec<bool> = (0..n).map(|j| is_hanging(p[(j + n - 1) % n], p[j], p[(j + 1) % n], diam)).collect();
    (0..n)
        .filter(|&j| hanging[j] || hanging[(j + 1) % n])
        .map(|j| {
            let (a, b) = (elem[j], elem[(j + 1) % n]);
            (a.min(b), a.max(b))
        })
        .collect()
}

/// Grows `marked` until no outside element has a hanging-node side among
/// the sides of the refinement set; returns the elements added.
pub fn closure_oracle(mesh: &Mesh, marked: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut set = marked.clone();
    loop {
        let sides: BTreeSet<(usize, usize)> = set
            .iter()
            .flat_map(|&e| {
                let elem = &mesh.elements[e];
                (0..elem.len()).map(move |j| {
                    let (a, b) = (elem[j], elem[(j + 1) % elem.len()]);
                    (a.min(b), a.max(b))
                })
            })
            .collect();
        let grow: Vec<usize> = (0..mesh.num_elements())
            .filter(|e| !set.contains(e))
            .filter(|&e| nontrivial_sides(mesh, e).iter().any(|s| sides.contains(s)))
            .collect();
        if grow.is_empty() {
            return set.difference(marked).copied().collect();
        }
        set.extend(grow);
    }
}

/// Every side of a mesh of the unit square is either matched by the reverse
/// side of exactly one other element or lies on the square's boundary.
/// Returns the offending sides.
pub fn unmatched_sides(mesh: &Mesh) -> Vec<(usize, usize)> {
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    for elem in &mesh.elements {
        for j in 0..elem.len() {
            *directed.entry((elem[j], elem[(j + 1) % elem.len()])).or_default() += 1;
        }
    }
    let on_boundary = |a: Point, b: Point| {
        (a.x == 0.0 && b.x == 0.0)
            || (a.x == 1.0 && b.x == 1.0)
            || (a.y == 0.0 && b.y == 0.0)
            || (a.y == 1.0 && b.y == 1.0)
    };
    let mut bad: Vec<(usize, usize)> = directed
        .iter()
        .filter(|&(&(a, b), &count)| {
            let reverse = directed.get(&(b, a)).copied().unwrap_or(0);
            count != 1 || (reverse == 0 && !on_boundary(mesh.nodes[a], mesh.nodes[b])) || reverse > 1
        })
        .map(|(&k, _)| k)
        .collect();
    bad.sort_unstable();
    bad
}

/// Shoelace area of every element, summed.
pub fn shoelace_total(mesh: &Mesh) -> f64 {
    mesh.elements
        .iter()
        .map(|e| {
            (0..e.len())
                .map(|j| {
                    let (p, q) = (mesh.nodes[e[j]], mesh.nodes[e[(j + 1) % e.len()]]);
                    p.x * q.y - q.x * p.y
                })
                .sum::<f64>()
                * 0.5
        })
        .sum()
}
