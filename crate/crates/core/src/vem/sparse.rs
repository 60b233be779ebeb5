//! Compressed-row storage and a Jacobi-preconditioned conjugate gradient
//! solver, enough for the symmetric positive definite systems assembled here.

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Square `n x n` matrix from `(row, col, value)` triplets; duplicates
    /// are summed.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut row_ptr = vec![0; n + 1];
        let mut cols: Vec<usize> = Vec::with_capacity(triplets.len());
        let mut vals: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < n && c < n, "triplet ({r}, {c}) outside a {n}x{n} matrix");
            if last == Some((r, c)) {
                *vals.last_mut().expect("entry pushed") += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self { n, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Stored entries of row `r` as `(col, value)`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.row(r).filter(|&(j, _)| j == c).map(|(_, v)| v).sum()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|r| self.row(r).map(|(c, v)| v * x[c]).sum()).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|r| self.get(r, r)).collect()
    }

    /// The principal submatrix on the rows/columns where `keep` is true,
    /// renumbered in increasing order.
    pub fn submatrix(&self, keep: &[bool]) -> CsrMatrix {
        let mut map = vec![usize::MAX; self.n];
        let mut m = 0;
        for (i, &k) in keep.iter().enumerate() {
            if k {
                map[i] = m;
                m += 1;
            }
        }
        let triplets = (0..self.n)
            .filter(|&r| keep[r])
            .flat_map(|r| self.row(r).filter(|&(c, _)| keep[c]).map(move |(c, v)| (r, c, v)))
            .map(|(r, c, v)| (map[r], map[c], v))
            .collect();
        CsrMatrix::from_triplets(m, triplets)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Outcome of [`conjugate_gradient`].
#[derive(Debug, Clone, PartialEq)]
pub struct CgResult {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// `|b - A x| / |b|`, recomputed from scratch at exit.
    pub relative_residual: f64,
}

/// Jacobi-preconditioned CG for `A x = b`, stopping when the relative
/// residual drops below `tol` or after `max_iter` iterations.
pub fn conjugate_gradient(a: &CsrMatrix, b: &[f64], tol: f64, max_iter: usize) -> CgResult {
    let n = a.dim();
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return CgResult { x: vec![0.0; n], iterations: 0, relative_residual: 0.0 };
    }
    let inv_diag: Vec<f64> = a.diagonal().iter().map(|&d| if d != 0.0 { 1.0 / d } else { 1.0 }).collect();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut iterations = 0;
    while iterations < max_iter && norm(&r) > tol * b_norm {
        let ap = a.mul_vec(&p);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        iterations += 1;
    }
    let ax = a.mul_vec(&x);
    let res: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    CgResult { x, iterations, relative_residual: norm(&res) / b_norm }
}
