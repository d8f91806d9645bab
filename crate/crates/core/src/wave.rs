//! The dnoidal traveling-wave family and its period map.
//!
//! Waves solve `−s φ″ + r φ − φ³ − φ⁵ = 0` with `r = 1 − c²`,
//! `s = 5 − 4c²`. Writing `Ψ = φ²`, the quadrature `(Ψ′)² = (4/3s) R(Ψ)`
//! has a quartic `R` with roots `α₁ < 0 = α₂ < α₃ < α₄`, and the whole
//! family is parametrised by the largest root `α₄` together with `c`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::elliptic::{complete_k, dk_dk, EllipticModulus, JacobiFunctions};
use crate::error::{Error, Result};

/// Relative shrink applied to the admissible `α₄` band.
const BAND_GUARD: f64 = 1e-12;

/// Infimum of admissible periods, `2π √(√5 / (√5 − 1))`.
pub fn min_period() -> f64 {
    let r5 = 5.0_f64.sqrt();
    2.0 * PI * (r5 / (r5 - 1.0)).sqrt()
}

/// Supremum of admissible speeds for period `length`:
/// `½ √(5 − L⁴ / (L² − 4π²)²)`.
///
/// Returns `None` when `length` is not above [`min_period`].
pub fn max_speed(length: f64) -> Option<f64> {
    if !(length > min_period()) {
        return None;
    }
    let l2 = length * length;
    let d = l2 - 4.0 * PI * PI;
    Some(0.5 * (5.0 - l2 * l2 / (d * d)).sqrt())
}

fn check_speed(c: f64) -> Result<()> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::domain(format!("speed must lie in (0, 1), got {c}")));
    }
    Ok(())
}

/// An admissible (period, speed) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveParams {
    #[serde(rename = "L")]
    length: f64,
    c: f64,
}

impl WaveParams {
    pub fn new(length: f64, c: f64) -> Result<Self> {
        if !length.is_finite() || !(length > min_period()) {
            return Err(Error::domain(format!(
                "period below minimum {:.4}",
                min_period()
            )));
        }
        if !(c > 0.0) {
            return Err(Error::domain(format!("speed must be positive, got {c}")));
        }
        let cmax = max_speed(length).expect("length checked above");
        if !(c < cmax) {
            return Err(Error::domain(format!(
                "speed above c_max({length})={cmax:.4}"
            )));
        }
        Ok(Self { length, c })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn speed(&self) -> f64 {
        self.c
    }

    pub fn r(&self) -> f64 {
        1.0 - self.c * self.c
    }

    pub fn s(&self) -> f64 {
        5.0 - 4.0 * self.c * self.c
    }
}

/// Open interval of admissible `α₄` at speed `c`:
/// `((−1 + √(1+4r))/2, (−3 + √(9+48r))/4)`.
pub fn alpha4_band(c: f64) -> (f64, f64) {
    let r = 1.0 - c * c;
    (
        0.5 * (-1.0 + (1.0 + 4.0 * r).sqrt()),
        0.25 * (-3.0 + (9.0 + 48.0 * r).sqrt()),
    )
}

fn guarded_band(c: f64) -> (f64, f64) {
    let (lo, hi) = alpha4_band(c);
    let margin = BAND_GUARD * (hi - lo);
    (lo + margin, hi - margin)
}

/// Lower end `B_c = (1 − s^{3/2} + 6r) / (12 s)` of the energy band `(B_c, 0)`.
pub fn energy_floor(c: f64) -> f64 {
    let r = 1.0 - c * c;
    let s = 5.0 - 4.0 * c * c;
    (1.0 - s.powf(1.5) + 6.0 * r) / (12.0 * s)
}

/// Energy level `B(α₄) = (α₄³ + (3/2)α₄² − 3rα₄) / (3s)`.
pub fn energy(alpha4: f64, c: f64) -> f64 {
    let r = 1.0 - c * c;
    let s = 5.0 - 4.0 * c * c;
    alpha4 * (alpha4 * alpha4 + 1.5 * alpha4 - 3.0 * r) / (3.0 * s)
}

/// Root structure of `R(Ψ) = −Ψ⁴ − (3/2)Ψ³ + 3rΨ² + 3sBΨ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootData {
    pub alpha1: f64,
    pub alpha3: f64,
    pub alpha4: f64,
    /// `β = −4α₄² − 4α₄ + 3 + 16r`.
    pub beta: f64,
    #[serde(skip)]
    pub modulus: EllipticModulus,
    #[serde(rename = "k2")]
    k2: f64,
    #[serde(rename = "B")]
    pub energy: f64,
}

impl RootData {
    pub fn k2(&self) -> f64 {
        self.k2
    }
}

/// Roots, modulus and energy level for the wave with largest root `alpha4`.
///
/// `α₃` and `α₄ − α₃` are evaluated in factored form, so `k` stays accurate
/// at both ends of the band.
pub fn root_structure(alpha4: f64, c: f64) -> Result<RootData> {
    check_speed(c)?;
    let (lo, hi) = guarded_band(c);
    if !(alpha4 >= lo && alpha4 <= hi) {
        return Err(Error::domain(format!(
            "alpha4 outside admissible band: {alpha4} not in ({lo}, {hi})"
        )));
    }
    let r = 1.0 - c * c;
    let s = 5.0 - 4.0 * c * c;
    let (band_lo, band_hi) = alpha4_band(c);
    let lo_conj = -1.0 - band_lo;
    let hi_conj = -1.5 - band_hi;

    let beta = -4.0 * alpha4 * alpha4 - 4.0 * alpha4 + 3.0 + 16.0 * r;
    let root3beta = (3.0 * beta).sqrt();
    let alpha1 = 0.25 * (-2.0 * alpha4 - 3.0 - root3beta);
    // α₁α₃ = α₄² + (3/2)α₄ − 3r, which vanishes at the upper band end
    let alpha3 = (alpha4 - band_hi) * (alpha4 - hi_conj) / alpha1;
    // α₄ − α₃ = 12(α₄² + α₄ − r) / (6α₄ + 3 + √(3β)), zero at the lower end
    let gap43 = 12.0 * (alpha4 - band_lo) * (alpha4 - lo_conj) / (6.0 * alpha4 + 3.0 + root3beta);
    let gap31 = 0.5 * root3beta;

    let denom = alpha4 * gap31;
    let k2 = -alpha1 * gap43 / denom;
    let kc2 = alpha3 * (alpha4 - alpha1) / denom;
    let modulus = EllipticModulus::from_squares(k2, kc2)?;

    Ok(RootData {
        alpha1,
        alpha3,
        alpha4,
        beta,
        modulus,
        k2,
        energy: alpha1 * alpha3 * alpha4 / (3.0 * s),
    })
}

fn period_from_roots(roots: &RootData, c: f64) -> Result<f64> {
    let s = 5.0 - 4.0 * c * c;
    let kk = complete_k(roots.modulus)?;
    Ok(2.0 * (3.0 * s).sqrt() * kk / (roots.alpha4 * (roots.alpha3 - roots.alpha1)).sqrt())
}

/// Fundamental period `T(α₄, c)` of the dnoidal wave.
pub fn period(alpha4: f64, c: f64) -> Result<f64> {
    let roots = root_structure(alpha4, c)?;
    period_from_roots(&roots, c)
}

/// `(∂T/∂α₄, ∂T/∂c)` by the chain rule through `K(k)`, `k(α₄, c)` and
/// `β(α₄, c)`.
pub fn period_partials(alpha4: f64, c: f64) -> Result<(f64, f64)> {
    let roots = root_structure(alpha4, c)?;
    let k = roots.modulus.k();
    if k < 1e-10 {
        return Err(Error::Degenerate(format!(
            "elliptic modulus {k:e} too close to 0 for dk/dalpha"
        )));
    }
    let t = period_from_roots(&roots, c)?;
    let kk = complete_k(roots.modulus)?;
    let dkk = dk_dk(roots.modulus)?;

    let a = alpha4;
    let r = 1.0 - c * c;
    let s = 5.0 - 4.0 * c * c;
    let beta = roots.beta;
    let b32 = beta * beta.sqrt();
    let sqrt3 = 3.0_f64.sqrt();

    let dk_da = (6.0 * a * a * a + 9.0 * a * a - 18.0 * a * r + 9.0 * r + 48.0 * r * r)
        / (sqrt3 * k * a * a * b32);
    let dk_dc = 2.0 * sqrt3 * c * (2.0 * a + 3.0 + 8.0 * r) / (k * a * b32);
    let dbeta_da = -8.0 * a - 4.0;
    let dbeta_dc = -32.0 * c;
    let ds_dc = -8.0 * c;

    // log T = log 2√(2√3 s) + log K(k) − ½ log α₄ − ¼ log β
    let log_k = dkk / kk;
    let dt_da = t * (log_k * dk_da - 0.5 / a - 0.25 * dbeta_da / beta);
    let dt_dc = t * (0.5 * ds_dc / s + log_k * dk_dc - 0.25 * dbeta_dc / beta);
    Ok((dt_da, dt_dc))
}

/// Derivative of the period with respect to the energy level at fixed `c`.
pub fn period_wrt_b(alpha4: f64, c: f64) -> Result<f64> {
    check_speed(c)?;
    let r = 1.0 - c * c;
    let s = 5.0 - 4.0 * c * c;
    let db_da = (alpha4 * alpha4 + alpha4 - r) / s;
    if db_da.abs() < 1e-14 {
        return Err(Error::Degenerate(format!(
            "dB/dalpha = {db_da:e} vanishes at alpha4 = {alpha4}"
        )));
    }
    let (dt_da, _) = period_partials(alpha4, c)?;
    Ok(dt_da / db_da)
}

/// The unique `α₄ = Λ(c)` with `T(α₄, c) = L`, by bisection.
pub fn solve_alpha4(length: f64, c: f64) -> Result<f64> {
    WaveParams::new(length, c)?;
    let (mut lo, mut hi) = guarded_band(c);
    let t_lo = period(lo, c)?;
    let t_hi = period(hi, c)?;
    if !(t_lo < length) {
        return Err(Error::domain(format!(
            "period below minimum {t_lo:.4} for speed {c}"
        )));
    }
    if !(length < t_hi) {
        return Err(Error::domain(format!(
            "period {length} beyond the resolvable band (max {t_hi:.4}) at speed {c}"
        )));
    }
    let (mut res_lo, mut res_hi) = (t_lo - length, t_hi - length);
    // bisect to adjacent floats; T is strictly increasing in α₄
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let res = period(mid, c)? - length;
        if res == 0.0 {
            return Ok(mid);
        }
        if res < 0.0 {
            lo = mid;
            res_lo = res;
        } else {
            hi = mid;
            res_hi = res;
        }
    }
    let (best, res) = if res_lo.abs() <= res_hi.abs() { (lo, res_lo) } else { (hi, res_hi) };
    if res.abs() > 1e-10 * length {
        return Err(Error::Numerical(format!(
            "period residual {res:e} exceeds tolerance at speed {c}"
        )));
    }
    Ok(best)
}

/// `(φ, φ′, φ″)` at a single abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub phi: f64,
    pub dphi: f64,
    pub d2phi: f64,
}

/// Closed-form dnoidal profile
/// `φ(x) = √α₄ dn(γx, k) / √(1 + w sn²(γx, k))` with
/// `γ = √(α₄(α₃ − α₁)/(3s))` and `w = α₄k²/(−α₁)`.
#[derive(Debug, Clone)]
pub struct WaveProfile {
    params: WaveParams,
    roots: RootData,
    jacobi: JacobiFunctions,
    scale: f64,
    weight: f64,
    pub x: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub d2phi: Vec<f64>,
}

impl WaveProfile {
    pub fn params(&self) -> WaveParams {
        self.params
    }

    pub fn roots(&self) -> &RootData {
        &self.roots
    }

    pub fn length(&self) -> f64 {
        self.params.length
    }

    pub fn speed(&self) -> f64 {
        self.params.c
    }

    pub fn n_samples(&self) -> usize {
        self.x.len()
    }

    /// Grid spacing `L / n`.
    pub fn spacing(&self) -> f64 {
        self.params.length / self.x.len() as f64
    }

    /// φ″ from the profile equation.
    pub fn second_derivative(&self, phi: f64) -> f64 {
        let p2 = phi * phi;
        phi * (self.params.r() - p2 - p2 * p2) / self.params.s()
    }

    pub fn eval(&self, x: f64) -> ProfilePoint {
        let (sn, cn, dn) = self.jacobi.eval(self.scale * x);
        let k2 = self.roots.k2;
        let w = self.weight;
        let den = 1.0 + w * sn * sn;
        let amp = self.roots.alpha4.sqrt();
        let phi = amp * dn / den.sqrt();
        let dphi = -self.scale * amp * sn * cn * (k2 * den + w * dn * dn) / (den * den.sqrt());
        ProfilePoint { phi, dphi, d2phi: self.second_derivative(phi) }
    }

    pub fn phi_at(&self, x: f64) -> f64 {
        self.eval(x).phi
    }

    /// φ‴ = (r − 3φ² − 5φ⁴) φ′ / s.
    pub fn third_derivative(&self, point: &ProfilePoint) -> f64 {
        let p2 = point.phi * point.phi;
        (self.params.r() - 3.0 * p2 - 5.0 * p2 * p2) * point.dphi / self.params.s()
    }

    /// Residual of `(φ′)² = (r/s)φ² − φ⁴/(2s) − φ⁶/(3s) + B` at a point.
    pub fn quadrature_residual(&self, point: &ProfilePoint) -> f64 {
        let (r, s) = (self.params.r(), self.params.s());
        let p2 = point.phi * point.phi;
        point.dphi * point.dphi
            - (r / s * p2 - p2 * p2 / (2.0 * s) - p2 * p2 * p2 / (3.0 * s) + self.roots.energy)
    }
}

/// Samples the wave of period `length` and speed `c` on `n_samples`
/// uniform points `x_j = jL/n` (right endpoint excluded).
pub fn build_profile(length: f64, c: f64, n_samples: usize) -> Result<WaveProfile> {
    if n_samples < 256 || !n_samples.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "n_samples must be even and at least 256, got {n_samples}"
        )));
    }
    let params = WaveParams::new(length, c)?;
    let alpha4 = solve_alpha4(length, c)?;
    let roots = root_structure(alpha4, c)?;
    let s = params.s();
    let scale = (roots.alpha4 * (roots.alpha3 - roots.alpha1) / (3.0 * s)).sqrt();
    let weight = roots.alpha4 * roots.k2 / -roots.alpha1;

    let mut profile = WaveProfile {
        params,
        roots,
        jacobi: JacobiFunctions::new(roots.modulus),
        scale,
        weight,
        x: Vec::with_capacity(n_samples),
        phi: Vec::with_capacity(n_samples),
        dphi: Vec::with_capacity(n_samples),
        d2phi: Vec::with_capacity(n_samples),
    };
    let h = length / n_samples as f64;
    for j in 0..n_samples {
        let x = j as f64 * h;
        let p = profile.eval(x);
        profile.x.push(x);
        profile.phi.push(p.phi);
        profile.dphi.push(p.dphi);
        profile.d2phi.push(p.d2phi);
    }
    Ok(profile)
}

/// Constant state `√((√(1+4r) − 1)/2)` reached as `k → 0`.
pub fn equilibrium_value(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::domain(format!("speed must lie in [0, 1], got {c}")));
    }
    let r = 1.0 - c * c;
    Ok((0.5 * ((1.0 + 4.0 * r).sqrt() - 1.0)).sqrt())
}

/// Solitary wave reached as `k → 1`:
/// `2√r (1 + √(1 + 16r/3) cosh(2√(r/s) x))^{−1/2}`.
pub fn solitary_profile(c: f64, x: f64) -> Result<f64> {
    check_speed(c)?;
    let r = 1.0 - c * c;
    let s = 5.0 - 4.0 * c * c;
    let stretch = (1.0 + 16.0 * r / 3.0).sqrt();
    let ch = (2.0 * (r / s).sqrt() * x).cosh();
    Ok(2.0 * r.sqrt() / (1.0 + stretch * ch).sqrt())
}
