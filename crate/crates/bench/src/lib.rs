//! Shared inputs for the benchmarks in `benches/`.

/// `(L, c)` pairs spanning short/long periods and slow/fast waves.
pub const CASES: [(f64, f64); 3] = [(15.0, 0.3), (15.0, 0.6), (30.0, 0.8)];

/// Label used for a case in benchmark ids.
pub fn label((l, c): (f64, f64)) -> String {
    format!("L={l}/c={c}")
}
