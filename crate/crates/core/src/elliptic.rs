//! Complete elliptic integrals and Jacobi elliptic functions.
//!
//! Everything here is built on the arithmetic-geometric mean: `K` and `E`
//! from the AGM (with Gauss' sum for `E`), and `sn`, `cn`, `dn` from the
//! descending Landen sequence that the same AGM iteration produces.
//!
//! All functions take the *modulus* `k`, not the parameter `m = k²`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const AGM_TOL: f64 = 1e-16;
const AGM_MAX_ITER: usize = 40;

/// Below this distance from 1, `sn`, `cn`, `dn` use the hyperbolic limit.
const HYPERBOLIC_SWITCH: f64 = 1e-12;

/// Elliptic modulus `k ∈ [0, 1]` together with its complement
/// `k' = √(1 − k²)`.
///
/// The complement is carried separately so that moduli close to 1 (where
/// `1 − k²` suffers cancellation) can be constructed accurately from
/// [`EllipticModulus::from_squares`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus {
    k: f64,
    kc: f64,
}

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::domain(format!("modulus out of range: k = {k}")));
        }
        let kc = ((1.0 - k) * (1.0 + k)).sqrt();
        Ok(Self { k, kc })
    }

    /// Builds a modulus from `k²` and `k'² = 1 − k²` computed independently.
    pub fn from_squares(k2: f64, kc2: f64) -> Result<Self> {
        if !(k2 >= 0.0 && kc2 >= 0.0) || ((k2 + kc2) - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "modulus out of range: k^2 = {k2}, 1 - k^2 = {kc2}"
            )));
        }
        Ok(Self { k: k2.sqrt().min(1.0), kc: kc2.sqrt().min(1.0) })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn k2(&self) -> f64 {
        self.k * self.k
    }

    /// Complementary modulus `k'`.
    pub fn complement(&self) -> f64 {
        self.kc
    }
}

/// Descending AGM sequence started at `(1, k')`.
///
/// `a[n]` and `c[n]` follow Abramowitz & Stegun 17.6: `c[0] = k`,
/// `c[n] = (a[n-1] - b[n-1]) / 2`.
struct Agm {
    a: Vec<f64>,
    c: Vec<f64>,
}

impl Agm {
    fn run(m: EllipticModulus) -> Self {
        let mut a = vec![1.0];
        let mut c = vec![m.k];
        let (mut an, mut bn) = (1.0_f64, m.kc);
        for _ in 0..AGM_MAX_ITER {
            if (an - bn).abs() <= AGM_TOL * an {
                break;
            }
            let next_a = 0.5 * (an + bn);
            let next_c = 0.5 * (an - bn);
            let next_b = (an * bn).sqrt();
            a.push(next_a);
            c.push(next_c);
            if next_a == an && next_b == bn {
                break;
            }
            an = next_a;
            bn = next_b;
        }
        Self { a, c }
    }

    fn mean(&self) -> f64 {
        *self.a.last().expect("AGM sequence is never empty")
    }
}

fn finite_k(m: EllipticModulus) -> Result<()> {
    if m.kc <= 0.0 {
        return Err(Error::domain(format!(
            "modulus out of range: K(k) diverges at k = {}",
            m.k
        )));
    }
    Ok(())
}

/// Complete elliptic integral of the first kind,
/// `K(k) = ∫₀¹ dt / √((1 − k²t²)(1 − t²))`.
pub fn complete_k(m: EllipticModulus) -> Result<f64> {
    finite_k(m)?;
    Ok(FRAC_PI_2 / Agm::run(m).mean())
}

/// Both complete integrals `(K(k), E(k))` from a single AGM run.
pub fn complete_k_e(m: EllipticModulus) -> Result<(f64, f64)> {
    finite_k(m)?;
    let agm = Agm::run(m);
    let kk = FRAC_PI_2 / agm.mean();
    let mut sum = 0.0;
    let mut weight = 0.5;
    for &c in &agm.c {
        sum += weight * c * c;
        weight *= 2.0;
    }
    Ok((kk, kk * (1.0 - sum)))
}

/// Complete elliptic integral of the second kind, for `k ∈ [0, 1]`.
pub fn complete_e(k: f64) -> Result<f64> {
    let m = EllipticModulus::new(k)?;
    if m.kc == 0.0 {
        return Ok(1.0);
    }
    complete_k_e(m).map(|(_, e)| e)
}

/// `dK/dk = (E − k'²K) / (k k'²)`, switching to the Maclaurin series for
/// small `k` where the closed form cancels.
pub fn dk_dk(m: EllipticModulus) -> Result<f64> {
    let (kk, ee) = complete_k_e(m)?;
    let k = m.k;
    if k < 1e-3 {
        let k2 = k * k;
        return Ok(FRAC_PI_2 * k * (0.5 + k2 * (9.0 / 16.0 + k2 * 75.0 / 128.0)));
    }
    let kc2 = m.kc * m.kc;
    Ok((ee - kc2 * kk) / (k * kc2))
}

/// Jacobi elliptic functions `(sn(u,k), cn(u,k), dn(u,k))`.
///
/// Uses the descending Landen transformation after reducing `u` modulo the
/// real period `4K`. Moduli within `1e-12` of 1 fall back to the
/// hyperbolic limit `(tanh u, sech u, sech u)`.
pub fn jacobi_sn_cn_dn(u: f64, m: EllipticModulus) -> Result<(f64, f64, f64)> {
    if !u.is_finite() {
        return Err(Error::domain(format!("argument must be finite, got {u}")));
    }
    Ok(sn_cn_dn(u, m))
}

/// Unvalidated core of [`jacobi_sn_cn_dn`]; non-finite `u` yields NaN.
pub(crate) fn sn_cn_dn(u: f64, m: EllipticModulus) -> (f64, f64, f64) {
    JacobiFunctions::new(m).eval(u)
}

/// `sn`, `cn`, `dn` at a fixed modulus, with the Landen sequence computed
/// once up front.
#[derive(Debug, Clone)]
pub struct JacobiFunctions {
    modulus: EllipticModulus,
    ratios: Vec<f64>,
    scale: f64,
    period: f64,
}

impl JacobiFunctions {
    pub fn new(modulus: EllipticModulus) -> Self {
        let agm = Agm::run(modulus);
        let n = agm.a.len() - 1;
        let a_n = agm.mean();
        let ratios = (1..=n).map(|j| agm.c[j] / agm.a[j]).collect();
        Self {
            modulus,
            ratios,
            scale: (1u64 << n) as f64 * a_n,
            period: 4.0 * FRAC_PI_2 / a_n,
        }
    }

    pub fn modulus(&self) -> EllipticModulus {
        self.modulus
    }

    /// `(sn(u), cn(u), dn(u))`.
    pub fn eval(&self, u: f64) -> (f64, f64, f64) {
        let m = self.modulus;
        if m.k == 0.0 {
            return (u.sin(), u.cos(), 1.0);
        }
        if 1.0 - m.k <= HYPERBOLIC_SWITCH {
            let sech = 1.0 / u.cosh();
            return (u.tanh(), sech, sech);
        }
        let u = u - self.period * (u / self.period).round();
        let mut phi = self.scale * u;
        for &ratio in self.ratios.iter().rev() {
            phi = 0.5 * (phi + (ratio * phi.sin()).clamp(-1.0, 1.0).asin());
        }
        let (sn, cn) = phi.sin_cos();
        // sum of squares: no cancellation as k → 1, unlike √(1 − k²sn²)
        let dn = (m.kc * m.kc + m.k * m.k * cn * cn).sqrt();
        (sn, cn, dn)
    }
}
