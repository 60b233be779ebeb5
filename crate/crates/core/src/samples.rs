//! Small hand-built meshes used by the tests, the guide and the CLI.

use crate::mesh::{Mesh, Point};

fn mesh(raw: &[(f64, f64)], elements: &[&[usize]]) -> Mesh {
    Mesh::new(raw.iter().map(|&(x, y)| Point::new(x, y)).collect(), elements.iter().map(|e| e.to_vec()).collect())
}

/// Two half-height squares on the left and a pentagon on the right whose
/// left side carries a hanging node at `(1, 0.5)`.
///
/// ```text
/// 3-----4---------5
/// |  1  |         |
/// 6-----7    2    |
/// |  0  |         |
/// 0-----1---------2
/// ```
pub fn square_and_pentagon() -> Mesh {
    mesh(
        &[(0., 0.), (1., 0.), (2., 0.), (0., 1.), (1., 1.), (2., 1.), (0., 0.5), (1., 0.5)],
        &[&[0, 1, 7, 6], &[6, 7, 4, 3], &[1, 2, 5, 4, 7]],
    )
}

/// A cascade of hanging nodes on `[0,1]^2`: marking element 0 forces
/// element 2 (hanging node on its left side, shared with 0), which in turn
/// forces element 5 (hanging node on its left side, shared with 2).
///
/// ```text
///  +----+----+---------+
///  |    |    |         |
///  | 3  | 4  |         |
///  |    |    |    5    |
///  +----+----+         +
///  | 1  |    |         |
///  +----+ 2  |         |
///  | 0  |    |         |
///  +----+----+---------+
/// ```
pub fn cascade() -> Mesh {
    let q = 0.25;
    let raw: Vec<(f64, f64)> = [
        (0., 0.), // 0
        (1., 0.), // 1
        (2., 0.), // 2
        (4., 0.), // 3
        (0., 1.), // 4
        (1., 1.), // 5
        (0., 2.), // 6
        (1., 2.), // 7
        (2., 2.), // 8
        (4., 4.), // 9
        (0., 4.), // 10
        (1., 4.), // 11
        (2., 4.), // 12
    ]
    .iter()
    .map(|&(x, y)| (x * q, y * q))
    .collect();
    mesh(&raw, &[&[0, 1, 5, 4], &[4, 5, 7, 6], &[1, 2, 8, 7, 5], &[6, 7, 11, 10], &[7, 8, 12, 11], &[2, 3, 9, 12, 8]])
}

/// Staggered-brick tiling of `[0,1]^2` with `ny` rows of `nx` bricks.
///
/// Interior vertices are shifted up or down by `jitter` times the row height
/// in a checkerboard pattern, so interior bricks are genuine hexagons with
/// degree-three vertices. Bricks on the bottom and top rows keep a straight
/// boundary side whose midpoint is a vertex; odd rows end in quadrilateral
/// half-bricks.
pub fn staggered_hexagons(nx: usize, ny: usize, jitter: f64) -> Mesh {
    assert!(nx >= 1 && ny >= 1);
    let cols = 2 * nx;
    let id = |i: usize, j: usize| j * (cols + 1) + i;
    let mut nodes = Vec::with_capacity((cols + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=cols {
            let shift = if j == 0 || j == ny {
                0.0
            } else if (i + j) % 2 == 0 {
                jitter
            } else {
                -jitter
            };
            nodes.push(Point::new(i as f64 / cols as f64, (j as f64 + shift) / ny as f64));
        }
    }
    let brick = |a: usize, j: usize| {
        vec![id(a, j), id(a + 1, j), id(a + 2, j), id(a + 2, j + 1), id(a + 1, j + 1), id(a, j + 1)]
    };
    let half = |a: usize, j: usize| vec![id(a, j), id(a + 1, j), id(a + 1, j + 1), id(a, j + 1)];
    let mut elements = Vec::new();
    for j in 0..ny {
        if j % 2 == 0 {
            elements.extend((0..nx).map(|k| brick(2 * k, j)));
        } else {
            elements.push(half(0, j));
            elements.extend((0..nx.saturating_sub(1)).map(|k| brick(2 * k + 1, j)));
            elements.push(half(cols - 1, j));
        }
    }
    Mesh::new(nodes, elements)
}

/// Pentagon tiling of `[0,1]^2` from an `nx x ny` grid (`ny` even).
///
/// Every odd horizontal grid line gets a vertex at the middle of each cell,
/// moved up or down by `jitter` times the row height in a checkerboard
/// pattern. Each cell touches exactly one such line, so all elements are
/// pentagons, half of them with a reflex vertex.
pub fn shifted_pentagons(nx: usize, ny: usize, jitter: f64) -> Mesh {
    assert!(nx >= 1 && ny >= 2 && ny.is_multiple_of(2));
    let corner = |i: usize, j: usize| j * (nx + 1) + i;
    let mut nodes: Vec<Point> =
        (0..=ny).flat_map(|j| (0..=nx).map(move |i| Point::new(i as f64 / nx as f64, j as f64 / ny as f64))).collect();
    let base = nodes.len();
    // middle vertex of cell column i on odd line j
    let middle = |i: usize, j: usize| base + (j / 2) * nx + i;
    for j in (1..ny).step_by(2) {
        for i in 0..nx {
            let shift = if (i + j / 2) % 2 == 0 { jitter } else { -jitter };
            nodes.push(Point::new((i as f64 + 0.5) / nx as f64, (j as f64 + shift) / ny as f64));
        }
    }
    let mut elements = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (corner(i, j), corner(i + 1, j), corner(i + 1, j + 1), corner(i, j + 1));
            elements.push(if j % 2 == 0 { vec![a, b, c, middle(i, j + 1), d] } else { vec![a, middle(i, j), b, c, d] });
        }
    }
    Mesh::new(nodes, elements)
}
