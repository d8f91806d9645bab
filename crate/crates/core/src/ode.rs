//! Dormand–Prince 5(4) with FSAL and fifth-order dense output.

use crate::error::{Error, Result};

// Butcher tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// dense output (Hairer's contd5)
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;
const MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-12 }
    }
}

/// Solution of an IVP: dense-output values at the requested abscissae and
/// the state at the final point.
#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    pub samples: Vec<[f64; N]>,
    pub end: [f64; N],
    pub accepted: usize,
    pub rejected: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (a, k) in terms {
            acc += a * k[i];
        }
        *o += h * acc;
    }
    out
}

fn rms_norm<const N: usize>(err: &[f64; N], y0: &[f64; N], y1: &[f64; N], tol: Tolerances) -> f64 {
    let sum: f64 = (0..N)
        .map(|i| {
            let sc = tol.atol + tol.rtol * y0[i].abs().max(y1[i].abs());
            (err[i] / sc).powi(2)
        })
        .sum();
    (sum / N as f64).sqrt()
}

/// Integrates `y' = f(x, y)` from `x0` to `x_end > x0`, sampling the dense
/// output at `samples` (ascending, inside `[x0, x_end]`).
pub fn integrate<const N: usize, F>(
    mut f: F,
    x0: f64,
    y0: [f64; N],
    x_end: f64,
    samples: &[f64],
    tol: Tolerances,
) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    if !(x_end > x0) {
        return Err(Error::domain(format!("empty interval [{x0}, {x_end}]")));
    }
    if samples.windows(2).any(|w| w[1] < w[0])
        || samples.first().is_some_and(|&s| s < x0)
        || samples.last().is_some_and(|&s| s > x_end)
    {
        return Err(Error::domain("sample points must be ascending and inside the interval"));
    }

    let mut out = Vec::with_capacity(samples.len());
    let mut next = 0;
    while next < samples.len() && samples[next] == x0 {
        out.push(y0);
        next += 1;
    }

    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, &y);
    let mut h = initial_step(&mut f, x0, &y0, &k1, x_end - x0, tol);
    let mut reject_streak = false;
    let (mut accepted, mut rejected) = (0, 0);

    while x < x_end {
        if accepted + rejected >= MAX_STEPS {
            return Err(Error::Integration { at: x });
        }
        if h.abs() <= 16.0 * f64::EPSILON * x.abs().max(1.0) {
            return Err(Error::Integration { at: x });
        }
        let last = x + h >= x_end;
        if last {
            h = x_end - x;
        }

        let k2 = f(x + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(x + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(x + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            x + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            x + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y1 = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let x1 = if last { x_end } else { x + h };
        let k7 = f(x1, &y1);

        let err = axpy(
            &[0.0; N],
            h,
            &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
        );
        let en = rms_norm(&err, &y, &y1, tol);
        if !en.is_finite() {
            rejected += 1;
            h *= FAC_MIN;
            reject_streak = true;
            continue;
        }

        let fac = if en == 0.0 { FAC_MAX } else { (SAFETY * en.powf(-0.2)).clamp(FAC_MIN, FAC_MAX) };
        if en > 1.0 {
            rejected += 1;
            h *= fac.min(1.0);
            reject_streak = true;
            continue;
        }

        // dense output on (x, x1]
        if next < samples.len() && samples[next] <= x1 {
            let mut r5 = [0.0; N];
            for i in 0..N {
                r5[i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            while next < samples.len() && samples[next] <= x1 {
                let t = (samples[next] - x) / h;
                let t1 = 1.0 - t;
                let mut v = [0.0; N];
                for i in 0..N {
                    let r2 = y1[i] - y[i];
                    let r3 = h * k1[i] - r2;
                    let r4 = r2 - h * k7[i] - r3;
                    v[i] = y[i] + t * (r2 + t1 * (r3 + t * (r4 + t1 * r5[i])));
                }
                out.push(v);
                next += 1;
            }
        }

        accepted += 1;
        x = x1;
        y = y1;
        k1 = k7;
        h *= if reject_streak { fac.min(1.0) } else { fac };
        reject_streak = false;
    }

    Ok(Trajectory { samples: out, end: y, accepted, rejected })
}

/// Hairer's starting-step heuristic.
fn initial_step<const N: usize, F>(
    f: &mut F,
    x0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    span: f64,
    tol: Tolerances,
) -> f64
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let scale = |i: usize| tol.atol + tol.rtol * y0[i].abs();
    let norm = |v: &[f64; N]| {
        ((0..N).map(|i| (v[i] / scale(i)).powi(2)).sum::<f64>() / N as f64).sqrt()
    };
    let d0 = norm(y0);
    let d1 = norm(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);
    let y1 = axpy(y0, h0, &[(1.0, f0)]);
    let f1 = f(x0 + h0, &y1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}
