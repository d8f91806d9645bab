//! Trigonometric Galerkin discretisation of `𝓛₁` with periodic boundary
//! conditions.
//!
//! The potential is even, so the basis splits into a cosine block
//! `{1, cos(2πjx/L)}` and a sine block `{sin(2πjx/L)}` that are solved
//! separately. `φ′` is odd and lives in the sine block.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hill::HillField;

/// Eigenvalues with `|λ|` at most this are counted as zero.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-6;

/// Number of eigenvalues reported by [`hill_spectrum`].
pub const REPORTED: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct HillSpectrum {
    /// Lowest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvalue of the sine block closest to zero.
    pub zero_mode: f64,
    /// `|cos∠(eigenvector, φ′)|` for that eigenvalue, on the profile grid.
    pub zero_mode_similarity: f64,
}

impl HillSpectrum {
    /// `(n(𝓛₁), z(𝓛₁))`.
    pub fn counts(&self) -> (usize, usize) {
        let neg = self.eigenvalues.iter().filter(|&&l| l < -ZERO_EIGENVALUE_TOL).count();
        let zero = self.eigenvalues.iter().filter(|&&l| l.abs() <= ZERO_EIGENVALUE_TOL).count();
        (neg, zero)
    }
}

/// Cosine coefficients `v_m = (1/n) Σ V(x_j) cos(2πm x_j/L)`, `m ≤ 2·modes`,
/// on a grid of `8·modes` points.
fn potential_coefficients(field: &HillField, modes: usize) -> Vec<f64> {
    let n = 8 * modes;
    let l = field.length();
    let v: Vec<f64> = (0..n).map(|j| field.potential(j as f64 * l / n as f64)).collect();
    (0..=2 * modes)
        .map(|m| {
            let w = 2.0 * PI * m as f64 / n as f64;
            v.iter().enumerate().map(|(j, vj)| vj * (w * j as f64).cos()).sum::<f64>() / n as f64
        })
        .collect()
}

fn eigen(m: DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    SymmetricEigen::try_new(m, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("symmetric eigen-solve did not converge".into()))
}

/// Lowest eigenvalues of `𝓛₁` from `2·modes + 1` trigonometric basis
/// functions, plus a check of the zero mode against `φ′`.
pub fn hill_spectrum(field: &HillField, modes: usize) -> Result<HillSpectrum> {
    if modes < 32 {
        return Err(Error::domain(format!("modes must be at least 32, got {modes}")));
    }
    let l = field.length();
    let s = field.s();
    let v = potential_coefficients(field, modes);
    let kinetic = |j: usize| s * (2.0 * PI * j as f64 / l).powi(2);

    // cos block: index 0 is the constant, index j ≥ 1 is cos_j
    let cos_block = DMatrix::from_fn(modes + 1, modes + 1, |i, j| match (i, j) {
        (0, 0) => v[0],
        (0, j) => SQRT_2 * v[j],
        (i, 0) => SQRT_2 * v[i],
        (i, j) => v[i.abs_diff(j)] + v[i + j] + if i == j { kinetic(i) } else { 0.0 },
    });
    // sin block: index i is sin_{i+1}
    let sin_block = DMatrix::from_fn(modes, modes, |i, j| {
        let (i, j) = (i + 1, j + 1);
        v[i.abs_diff(j)] - v[i + j] + if i == j { kinetic(i) } else { 0.0 }
    });

    let cos_eig = eigen(cos_block)?;
    let sin_eig = eigen(sin_block)?;

    let mut all: Vec<f64> = cos_eig.eigenvalues.iter().chain(sin_eig.eigenvalues.iter()).copied().collect();
    all.sort_by(f64::total_cmp);
    all.truncate(REPORTED);

    let (idx, zero_mode) = sin_eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("sine block is non-empty");
    let coeffs = sin_eig.eigenvectors.column(idx);
    let profile = field.profile();
    let mode: Vec<f64> = profile
        .x
        .iter()
        .map(|&x| {
            coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| a * (2.0 * PI * (i + 1) as f64 * x / l).sin())
                .sum()
        })
        .collect();
    let dot: f64 = mode.iter().zip(&profile.dphi).map(|(a, b)| a * b).sum();
    let n1 = mode.iter().map(|a| a * a).sum::<f64>().sqrt();
    let n2 = profile.dphi.iter().map(|a| a * a).sum::<f64>().sqrt();

    Ok(HillSpectrum {
        eigenvalues: all,
        zero_mode,
        zero_mode_similarity: (dot / (n1 * n2)).abs(),
    })
}

/// `(n(𝓓), z(𝓓))`, equal to the counts for `𝓛₁` by Sylvester's law of
/// inertia since `𝓛₂ = I − 4∂ₓ²` is positive.
pub fn inertia_of_d(field: &HillField, modes: usize) -> Result<(usize, usize)> {
    Ok(hill_spectrum(field, modes)?.counts())
}

/// Smallest Galerkin eigenvalue of `I − 4∂ₓ²` on `[0, L]`. The operator is
/// diagonal in the trigonometric basis, with eigenvalues `1 + 4(2πj/L)²`.
pub fn l2_min_eigenvalue(length: f64, modes: usize) -> f64 {
    (0..=modes)
        .map(|j| 1.0 + 4.0 * (2.0 * PI * j as f64 / length).powi(2))
        .fold(f64::INFINITY, f64::min)
}
