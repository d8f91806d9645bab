//! Constraint matrices `𝓠`, `𝓟`, the index count, and the stability
//! threshold `c(L)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result, Stage, StageExt};
use crate::galerkin::hill_spectrum;
use crate::hill::{
    a_c_boundary, floquet_theta, periodic_inner, solve_dphi_dc, solve_f1, solve_y, HillField,
    IvpSolution,
};
use crate::linalg::{inertia, SymMatrix};
use crate::wave::{build_profile, max_speed, min_period, WaveParams};

pub const DEFAULT_SAMPLES: usize = 1024;
pub const DEFAULT_MODES: usize = 128;

/// Points in the bracketing scan of [`threshold_c`].
pub const SCAN_POINTS: usize = 21;

/// Distance kept from both ends of `(0, c_max(L))` when scanning.
pub const SCAN_MARGIN: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Degenerate,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Degenerate => "degenerate",
        })
    }
}

/// Verdict from the Krein count and the kernel of `𝓟`.
pub fn verdict(krein: i64, z_p: usize) -> Verdict {
    if z_p > 0 {
        Verdict::Degenerate
    } else if krein == 0 {
        Verdict::Stable
    } else if krein % 2 != 0 {
        Verdict::Unstable
    } else {
        Verdict::Degenerate
    }
}

/// Full result of [`classify`]. Field order is the serialisation order.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    #[serde(rename = "L")]
    pub length: f64,
    pub c: f64,
    #[serde(rename = "detQ")]
    pub det_q: f64,
    #[serde(rename = "detP")]
    pub det_p: f64,
    pub inner_f1_1: f64,
    pub theta: f64,
    #[serde(rename = "nD")]
    pub n_d: usize,
    #[serde(rename = "zD")]
    pub z_d: usize,
    pub n0: usize,
    pub z0: usize,
    #[serde(rename = "nDPi")]
    pub n_dpi: usize,
    #[serde(rename = "zDPi")]
    pub z_dpi: usize,
    #[serde(rename = "nP")]
    pub n_p: usize,
    #[serde(rename = "zP")]
    pub z_p: usize,
    pub krein: i64,
    pub verdict: Verdict,
}

/// `𝓠 = [[q, −cq], [−cq, L + c²q]]` with `q = ⟨f₁, 1⟩`.
pub fn build_q(f1: &IvpSolution, params: WaveParams) -> Result<SymMatrix> {
    let ones = vec![1.0; f1.value.len()];
    let q = periodic_inner(&f1.value, &ones, params.length())?;
    let c = params.speed();
    SymMatrix::from_rows(&[&[q, -c * q], &[-c * q, params.length() + c * c * q]])
}

/// The 3×3 matrix `𝓟`, whose lower-right 2×2 block is `𝓠`.
pub fn build_p(field: &HillField, dphi_dc: &IvpSolution, f1: &IvpSolution) -> Result<SymMatrix> {
    let p = field.profile();
    let params = p.params();
    let (l, c) = (params.length(), params.speed());
    let ones = vec![1.0; p.n_samples()];
    let u = &dphi_dc.value;
    let du = &dphi_dc.derivative;

    let integrand: Vec<f64> = (0..p.n_samples())
        .map(|j| {
            let (phi, dphi) = (p.phi[j], p.dphi[j]);
            phi * phi + 4.0 * dphi * dphi + 2.0 * c * phi * u[j] + 8.0 * c * dphi * du[j]
        })
        .collect();
    let p11 = periodic_inner(&integrand, &ones, l)?;
    let int_u = periodic_inner(u, &ones, l)?;
    let int_phi = periodic_inner(&p.phi, &ones, l)?;
    let p13 = -int_phi - c * int_u;

    let q = build_q(f1, params)?;
    SymMatrix::from_rows(&[
        &[p11, int_u, p13],
        &[int_u, q.get(0, 0), q.get(0, 1)],
        &[p13, q.get(1, 0), q.get(1, 1)],
    ])
}

/// `𝓟₁₁` recomputed as `⟨(∂φ/∂c, −φ − c∂φ/∂c), (−cχ, χ)⟩`, `χ = 4φ″ − φ`.
pub fn p11_by_pairing(field: &HillField, dphi_dc: &IvpSolution) -> Result<f64> {
    let p = field.profile();
    let c = p.speed();
    let lhs: Vec<f64> = (0..p.n_samples())
        .map(|j| {
            let chi = 4.0 * p.d2phi[j] - p.phi[j];
            let u = dphi_dc.value[j];
            -c * chi * u + chi * (-p.phi[j] - c * u)
        })
        .collect();
    periodic_inner(&lhs, &vec![1.0; lhs.len()], p.length())
}

/// Everything downstream of the profile except the Galerkin spectrum.
struct Pipeline {
    theta: f64,
    q: SymMatrix,
    p: SymMatrix,
    inner_f1_1: f64,
}

fn run_pipeline(length: f64, c: f64, n_samples: usize) -> Result<(HillField, Pipeline)> {
    let profile = build_profile(length, c, n_samples).stage(Stage::Profile)?;
    let field = HillField::new(profile);
    let y = solve_y(&field).stage(Stage::Homogeneous)?;
    let theta = floquet_theta(&field, &y);
    let a_c = a_c_boundary(&field, &y).stage(Stage::DphiDc)?;
    let dphi_dc = solve_dphi_dc(&field, &y, a_c).stage(Stage::DphiDc)?;
    let f1 = solve_f1(&field, &y).stage(Stage::F1)?;
    let params = field.profile().params();
    let q = build_q(&f1, params).stage(Stage::Matrices)?;
    let p = build_p(&field, &dphi_dc, &f1).stage(Stage::Matrices)?;
    let inner_f1_1 = q.get(0, 0);
    Ok((field, Pipeline { theta, q, p, inner_f1_1 }))
}

/// `det 𝓟(L, c)` without the spectral part of the pipeline.
pub fn det_p(length: f64, c: f64, n_samples: usize) -> Result<f64> {
    Ok(run_pipeline(length, c, n_samples)?.1.p.det())
}

/// Runs the whole pipeline at `(L, c)` and evaluates the index formula.
pub fn classify(length: f64, c: f64, modes: usize, n_samples: usize) -> Result<StabilityReport> {
    WaveParams::new(length, c)?;
    let (field, pipe) = run_pipeline(length, c, n_samples)?;
    let (n_d, z_d) = hill_spectrum(&field, modes).stage(Stage::Spectrum)?.counts();

    let iq = inertia(&pipe.q, pipe.q.default_zero_tol());
    let ip = inertia(&pipe.p, pipe.p.default_zero_tol());
    let (n0, z0) = (iq.negatives, iq.zeros);
    let n_dpi = n_d.checked_sub(n0 + z0).ok_or_else(|| {
        Error::Consistency(format!("n(D) = {n_d} smaller than n0 + z0 = {}", n0 + z0))
            .at_stage(Stage::Matrices)
    })?;
    let krein = n_dpi as i64 - ip.negatives as i64;

    Ok(StabilityReport {
        length,
        c,
        det_q: pipe.q.det(),
        det_p: pipe.p.det(),
        inner_f1_1: pipe.inner_f1_1,
        theta: pipe.theta,
        n_d,
        z_d,
        n0,
        z0,
        n_dpi,
        z_dpi: z_d + z0,
        n_p: ip.negatives,
        z_p: ip.zeros,
        krein,
        verdict: verdict(krein, ip.zeros),
    })
}

/// Result of [`threshold_c`].
#[derive(Debug, Clone, Serialize)]
pub struct Threshold {
    #[serde(rename = "L")]
    pub length: f64,
    pub c_threshold: f64,
    /// `det 𝓟` at the final bracket ends.
    pub det_bracket: [f64; 2],
    /// The final bracket in `c`.
    #[serde(skip)]
    pub bracket: [f64; 2],
    pub iterations: usize,
    pub tol: f64,
}

/// `(c, det 𝓟)` on `SCAN_POINTS` uniform speeds in
/// `[SCAN_MARGIN, c_max(L) − SCAN_MARGIN]`; failed points carry NaN.
pub fn det_p_scan(length: f64, n_samples: usize) -> Result<Vec<(f64, f64)>> {
    WaveParams::new(length, SCAN_MARGIN)?;
    let cmax = max_speed(length).expect("admissible length");
    let (lo, hi) = (SCAN_MARGIN, cmax - SCAN_MARGIN);
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    Ok((0..SCAN_POINTS)
        .into_par_iter()
        .map(|i| {
            let c = lo + step * i as f64;
            (c, det_p(length, c, n_samples).unwrap_or(f64::NAN))
        })
        .collect())
}

/// The speed `c(L)` at which `det 𝓟` changes sign, to within `tol` in `c`.
pub fn threshold_c(length: f64, tol: f64) -> Result<Threshold> {
    threshold_c_sampled(length, tol, DEFAULT_SAMPLES)
}

/// [`threshold_c`] with profiles sampled on `n_samples` points.
pub fn threshold_c_sampled(length: f64, tol: f64, n_samples: usize) -> Result<Threshold> {
    if !(length > min_period()) {
        return Err(Error::domain(format!("period below minimum {:.4}", min_period())));
    }
    if !(tol >= 1e-8) {
        return Err(Error::domain(format!("tolerance must be at least 1e-8, got {tol}")));
    }
    let scan = det_p_scan(length, n_samples)?;
    let Some(w) = scan
        .windows(2)
        .find(|w| w[0].1.is_finite() && w[1].1.is_finite() && w[0].1.signum() != w[1].1.signum())
    else {
        return Err(Error::NoThreshold { scan });
    };
    let ((mut a, mut fa), (mut b, mut fb)) = (w[0], w[1]);
    let mut iterations = 0;
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = det_p(length, m, n_samples)?;
        iterations += 1;
        if fm == 0.0 {
            (a, fa, b, fb) = (m, fm, m, fm);
            break;
        }
        if fm.signum() == fa.signum() {
            (a, fa) = (m, fm);
        } else {
            (b, fb) = (m, fm);
        }
    }
    Ok(Threshold {
        length,
        c_threshold: 0.5 * (a + b),
        det_bracket: [fa, fb],
        bracket: [a, b],
        iterations,
        tol,
    })
}
