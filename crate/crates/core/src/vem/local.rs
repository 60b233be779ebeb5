//! Element-level operators of the lowest-order conforming virtual element
//! space: degrees of freedom are vertex values, and the local projection maps
//! them onto affine functions in the scaled monomial basis
//! `{1, (x - x_c)/h, (y - y_c)/h}`.

use nalgebra::{DMatrix, DVector, Matrix3};

use super::VemError;
use crate::mesh::geometry::{element_diameter, polygon_area, polygon_centroid, Point};

/// The projection matrices of one element.
///
/// * `d` (`Nv x 3`): monomials evaluated at the vertices.
/// * `b` (`3 x Nv`): the right-hand sides of the projection problem, i.e.
///   boundary integrals of `grad m . n` against each basis function, plus
///   the vertex-average row that fixes the constant.
/// * `g = b d` (`3 x 3`).
/// * `pi_star = g^{-1} b` (`3 x Nv`): vertex values to monomial coefficients.
#[derive(Debug, Clone)]
pub struct LocalProjection {
    pub centroid: Point,
    pub diameter: f64,
    pub area: f64,
    pub d: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub g: Matrix3<f64>,
    pub pi_star: DMatrix<f64>,
}

impl LocalProjection {
    pub fn new(verts: &[Point]) -> Result<Self, VemError> {
        let nv = verts.len();
        let area = polygon_area(verts).map_err(|_| VemError::SingularG)?;
        let centroid = polygon_centroid(verts).map_err(|_| VemError::SingularG)?;
        let h = element_diameter(verts);

        let d = DMatrix::from_fn(nv, 3, |i, a| match a {
            0 => 1.0,
            1 => (verts[i].x - centroid.x) / h,
            _ => (verts[i].y - centroid.y) / h,
        });
        // trapezoidal rule on the two sides touching vertex i
        let b = DMatrix::from_fn(3, nv, |a, i| {
            let prev = verts[(i + nv - 1) % nv];
            let next = verts[(i + 1) % nv];
            match a {
                0 => 1.0 / nv as f64,
                1 => 0.5 * (next.y - prev.y) / h,
                _ => 0.5 * (prev.x - next.x) / h,
            }
        });
        let g_dyn = &b * &d;
        let g = Matrix3::from_fn(|r, c| g_dyn[(r, c)]);
        // G = [[1, *, *], [0, |K|/h^2, 0], [0, 0, |K|/h^2]] up to rounding
        let scale = area / (h * h);
        let det = g.determinant().abs();
        if det.is_nan() || det <= 1e-12 * scale * scale {
            return Err(VemError::SingularG);
        }
        let g_inv = g.try_inverse().ok_or(VemError::SingularG)?;
        let g_inv_dyn = DMatrix::from_fn(3, 3, |r, c| g_inv[(r, c)]);
        let pi_star = g_inv_dyn * &b;
        Ok(Self { centroid, diameter: h, area, d, b, g, pi_star })
    }

    pub fn num_vertices(&self) -> usize {
        self.d.nrows()
    }

    /// `D Pi*`: vertex values of the projection of a vertex-value vector.
    pub fn pi(&self) -> DMatrix<f64> {
        &self.d * &self.pi_star
    }

    /// Gradient of the projected affine function for vertex values `u`.
    pub fn projected_gradient(&self, u: &[f64]) -> Point {
        let coeffs = &self.pi_star * DVector::from_column_slice(u);
        Point::new(coeffs[1] / self.diameter, coeffs[2] / self.diameter)
    }

    /// `(I - Pi) u`, the part of `u` invisible to the consistency term.
    pub fn projection_remainder(&self, u: &[f64]) -> DVector<f64> {
        let u = DVector::from_column_slice(u);
        &u - self.pi() * &u
    }

    /// Consistency part `Pi*^T G~ Pi*`, where `G~` is `G` with its
    /// first row zeroed.
    pub fn consistency(&self) -> DMatrix<f64> {
        let mut gt = DMatrix::from_fn(3, 3, |r, c| self.g[(r, c)]);
        gt.row_mut(0).fill(0.0);
        self.pi_star.transpose() * gt * &self.pi_star
    }

    /// `(I - Pi)^T (I - Pi)`.
    pub fn stabilization(&self) -> DMatrix<f64> {
        let nv = self.num_vertices();
        let rem = DMatrix::<f64>::identity(nv, nv) - self.pi();
        rem.transpose() * rem
    }
}

/// Local stiffness matrix: consistency plus identity-type stabilization of
/// the non-polynomial remainder.
pub fn local_stiffness(verts: &[Point]) -> Result<DMatrix<f64>, VemError> {
    let proj = LocalProjection::new(verts)?;
    Ok(proj.consistency() + proj.stabilization())
}

/// One-point load vector `(|K| / Nv) f(x_c)` in every entry.
pub fn local_load(verts: &[Point], f: impl Fn(Point) -> f64) -> Result<DVector<f64>, VemError> {
    let nv = verts.len();
    let area = polygon_area(verts).map_err(|_| VemError::SingularG)?;
    let centroid = polygon_centroid(verts).map_err(|_| VemError::SingularG)?;
    Ok(DVector::from_element(nv, area / nv as f64 * f(centroid)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn pts(raw: &[(f64, f64)]) -> Vec<Point> {
        raw.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn test_elements() -> Vec<Vec<Point>> {
        let mut out = vec![
            pts(&[(0., 0.), (1., 0.), (0., 1.)]),
            pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]),
            pts(&[(0., 0.), (0.5, 0.), (1., 0.), (1., 1.), (0., 1.)]),
            pts(&[(0.1, 0.), (1.3, 0.2), (1.5, 1.1), (0.6, 1.7), (-0.2, 0.9)]),
        ];
        let hex = samples::staggered_hexagons(2, 3, 0.15);
        out.extend((0..hex.num_elements()).map(|i| hex.element_vertices(i)));
        out
    }

    #[test]
    fn constants_are_in_the_kernel() {
        for v in test_elements() {
            let k = local_stiffness(&v).unwrap();
            let ones = DVector::from_element(v.len(), 1.0);
            assert!((&k * ones).amax() < 1e-13);
            assert!((&k - k.transpose()).amax() < 1e-13);
        }
    }

    #[test]
    fn linear_energy_equals_area() {
        for v in test_elements() {
            let k = local_stiffness(&v).unwrap();
            let area = polygon_area(&v).unwrap();
            for u in [|p: Point| p.x, |p: Point| p.y] {
                let vals = DVector::from_iterator(v.len(), v.iter().map(|&p| u(p)));
                let energy = vals.dot(&(&k * &vals));
                assert!((energy - area).abs() < 1e-12 * area.max(1.0), "{energy} vs {area}");
            }
        }
    }

    #[test]
    fn projection_reproduces_affine_functions() {
        for v in test_elements() {
            let proj = LocalProjection::new(&v).unwrap();
            let u: Vec<f64> = v.iter().map(|p| 2.0 - 3.0 * p.x + 0.5 * p.y).collect();
            assert!(proj.projection_remainder(&u).amax() < 1e-12);
            let g = proj.projected_gradient(&u);
            assert!((g.x + 3.0).abs() < 1e-12 && (g.y - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_matches_linear_finite_elements() {
        let v = pts(&[(0., 0.), (1., 0.), (0., 1.)]);
        let proj = LocalProjection::new(&v).unwrap();
        // P1 stiffness: |T| grad(phi_i) . grad(phi_j), grads (-1,-1), (1,0), (0,1)
        let grads = [(-1.0, -1.0), (1.0, 0.0), (0.0, 1.0)];
        let fem = DMatrix::from_fn(3, 3, |i, j| 0.5 * (grads[i].0 * grads[j].0 + grads[i].1 * grads[j].1));
        assert!((proj.consistency() - &fem).amax() < 1e-14);
        assert!(proj.stabilization().amax() < 1e-14);
        assert!((local_stiffness(&v).unwrap() - fem).amax() < 1e-14);
    }

    #[test]
    fn stiffness_is_positive_off_the_constants() {
        for v in test_elements() {
            let k = local_stiffness(&v).unwrap();
            let mut eig: Vec<f64> = k.symmetric_eigenvalues().iter().copied().collect();
            eig.sort_by(f64::total_cmp);
            assert!(eig[0].abs() < 1e-12);
            assert!(eig[1] > 1e-8, "{eig:?}");
        }
    }

    #[test]
    fn load_vectors() {
        let sq = pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]);
        assert_eq!(local_load(&sq, |_| 0.0).unwrap(), DVector::zeros(4));
        assert_eq!(local_load(&sq, |_| 1.0).unwrap(), DVector::from_element(4, 0.25));
        assert_eq!(local_load(&sq, |p| p.x).unwrap(), DVector::from_element(4, 0.125));
    }

    #[test]
    fn degenerate_element_is_rejected() {
        let flat = pts(&[(0., 0.), (1., 0.), (2., 0.)]);
        assert!(matches!(local_stiffness(&flat), Err(VemError::SingularG)));
    }
}
