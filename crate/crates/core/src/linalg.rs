//! Inertia of small symmetric matrices.

use serde::Serialize;

use crate::error::{Error, Result};

/// Symmetric 2×2 or 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymMatrix {
    dim: usize,
    #[serde(skip)]
    m: [[f64; 3]; 3],
}

impl SymMatrix {
    /// Builds a matrix from rows, rejecting anything that is not square,
    /// of dimension 2 or 3, and symmetric to `1e−12·max|m|`.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        if !(dim == 2 || dim == 3) || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Shape(format!("expected a square 2x2 or 3x3 matrix, got {dim} rows")));
        }
        let mut m = [[0.0; 3]; 3];
        for (i, row) in rows.iter().enumerate() {
            m[i][..dim].copy_from_slice(row);
        }
        let out = Self { dim, m };
        let scale = out.max_abs();
        for i in 0..dim {
            for j in 0..i {
                if (m[i][j] - m[j][i]).abs() > 1e-12 * scale {
                    return Err(Error::Shape(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.dim && j < self.dim, "index ({i}, {j}) out of range");
        self.m[i][j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.m[i][..self.dim].to_vec()).collect()
    }

    fn max_abs(&self) -> f64 {
        self.m.iter().flatten().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.m[i][..self.dim].iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.m[i][i]).sum()
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        if self.dim == 2 {
            return m[0][0] * m[1][1] - m[0][1] * m[1][0];
        }
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// `1e−9 · max(1, ‖m‖∞)`.
    pub fn default_zero_tol(&self) -> f64 {
        1e-9 * self.norm_inf().max(1.0)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev = if self.dim == 2 { self.eig2() } else { self.jacobi3() };
        ev.sort_by(f64::total_cmp);
        ev
    }

    fn eig2(&self) -> Vec<f64> {
        let (a, b, d) = (self.m[0][0], self.m[0][1], self.m[1][1]);
        let mean = 0.5 * (a + d);
        let rad = (0.5 * (a - d)).hypot(b);
        // larger-magnitude root first, the other from the determinant
        let big = if mean >= 0.0 { mean + rad } else { mean - rad };
        let small = if big == 0.0 { 0.0 } else { (a * d - b * b) / big };
        vec![big, small]
    }

    fn jacobi3(&self) -> Vec<f64> {
        let mut a = self.m;
        for _sweep in 0..64 {
            let off = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
            let diag = a[0][0].powi(2) + a[1][1].powi(2) + a[2][2].powi(2);
            if off <= f64::EPSILON.powi(2) * diag || off == 0.0 {
                break;
            }
            for (p, q) in [(0, 1), (0, 2), (1, 2)] {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..3 {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..3 {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
        vec![a[0][0], a[1][1], a[2][2]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub negatives: usize,
    pub zeros: usize,
    pub positives: usize,
}

/// Sign counts of the eigenvalues, with `|λ| ≤ zero_tol` counted as zero.
pub fn inertia(m: &SymMatrix, zero_tol: f64) -> Inertia {
    let mut out = Inertia { negatives: 0, zeros: 0, positives: 0 };
    for ev in m.eigenvalues() {
        if ev.abs() <= zero_tol {
            out.zeros += 1;
        } else if ev < 0.0 {
            out.negatives += 1;
        } else {
            out.positives += 1;
        }
    }
    out
}
