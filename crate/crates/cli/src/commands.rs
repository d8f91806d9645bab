//! The subcommands. Each renders its whole output into a `String`, so
//! re-running with the same configuration is byte-identical.

use std::fmt::Write as _;
use std::path::PathBuf;

use ddwave::galerkin::hill_spectrum;
use ddwave::stability::{classify, threshold_c_sampled};
use ddwave::wave::{max_speed, period};
use ddwave::{build_profile, Error, HillField, Stage, StabilityReport, Verdict, WaveParams};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::CliError;

const SCAN_C_MIN: f64 = 0.05;
const SCAN_END_MARGIN: f64 = 0.01;
const SCAN_STEPS: usize = 45;

/// What a command produced: the main artifact, optional side output, and
/// the exit code.
pub struct Output {
    pub body: String,
    /// Header of `wave` in CSV mode: stderr, or a sidecar next to `--out`.
    pub meta: Option<String>,
    pub notes: Vec<String>,
    pub code: u8,
}

impl Output {
    fn ok(body: String) -> Self {
        Self { body, meta: None, notes: Vec::new(), code: 0 }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serialisable report");
    s.push('\n');
    s
}

/// `ddwave wave`
#[derive(Serialize)]
struct WaveHeader {
    #[serde(rename = "L")]
    length: f64,
    c: f64,
    alpha1: f64,
    alpha3: f64,
    alpha4: f64,
    beta: f64,
    k2: f64,
    #[serde(rename = "B")]
    energy: f64,
    #[serde(rename = "T_check")]
    t_check: f64,
}

#[derive(Serialize)]
struct WaveJson<'a> {
    #[serde(flatten)]
    header: &'a WaveHeader,
    x: &'a [f64],
    phi: &'a [f64],
    dphi: &'a [f64],
    d2phi: &'a [f64],
}

pub fn wave(cfg: &RunConfig) -> Result<Output, CliError> {
    let p = cfg.params()?;
    let profile = build_profile(p.length(), p.speed(), cfg.samples)?;
    let r = profile.roots();
    let header = WaveHeader {
        length: p.length(),
        c: p.speed(),
        alpha1: r.alpha1,
        alpha3: r.alpha3,
        alpha4: r.alpha4,
        beta: r.beta,
        k2: r.k2(),
        energy: r.energy,
        t_check: period(r.alpha4, p.speed())?,
    };
    Ok(match cfg.format_or(Format::Csv) {
        Format::Csv => {
            let mut body = String::from("x,phi,dphi,d2phi\n");
            for i in 0..profile.n_samples() {
                let _ = writeln!(
                    body,
                    "{:?},{:?},{:?},{:?}",
                    profile.x[i], profile.phi[i], profile.dphi[i], profile.d2phi[i]
                );
            }
            Output { meta: Some(json(&header)), ..Output::ok(body) }
        }
        Format::Json => Output::ok(json(&WaveJson {
            header: &header,
            x: &profile.x,
            phi: &profile.phi,
            dphi: &profile.dphi,
            d2phi: &profile.d2phi,
        })),
    })
}

/// `ddwave scan`
#[derive(Serialize)]
struct ScanRow {
    c: f64,
    #[serde(rename = "detQ")]
    det_q: Option<f64>,
    #[serde(rename = "detP")]
    det_p: Option<f64>,
    inner_f1_1: Option<f64>,
    #[serde(rename = "nP")]
    n_p: Option<usize>,
    verdict: String,
}

fn stage_tag(e: &Error) -> String {
    e.stage().map_or_else(|| "unknown".to_string(), |s| s.to_string())
}

impl ScanRow {
    fn new(c: f64, result: &Result<StabilityReport, Error>) -> Self {
        match result {
            Ok(r) => Self {
                c,
                det_q: Some(r.det_q),
                det_p: Some(r.det_p),
                inner_f1_1: Some(r.inner_f1_1),
                n_p: Some(r.n_p),
                verdict: r.verdict.to_string(),
            },
            Err(e) => Self {
                c,
                det_q: None,
                det_p: None,
                inner_f1_1: None,
                n_p: None,
                verdict: format!("error:{}", stage_tag(e)),
            },
        }
    }

    fn csv(&self) -> String {
        let f = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
        format!(
            "{:?},{},{},{},{},{}",
            self.c,
            f(self.det_q),
            f(self.det_p),
            f(self.inner_f1_1),
            self.n_p.map(|n| n.to_string()).unwrap_or_default(),
            self.verdict
        )
    }
}

#[derive(Serialize)]
struct ScanJson<'a> {
    #[serde(rename = "L")]
    length: f64,
    rows: &'a [ScanRow],
}

/// Speeds of the scan grid, ascending, with the end points exact.
fn scan_grid(cfg: &RunConfig, length: f64) -> Result<Vec<f64>, CliError> {
    let steps = cfg.steps.unwrap_or(SCAN_STEPS);
    if steps < 2 {
        return Err(CliError::Usage(format!("--steps must be at least 2, got {steps}")));
    }
    let lo = cfg.c_min.unwrap_or(SCAN_C_MIN);
    WaveParams::new(length, lo)?;
    let hi = match cfg.c_max {
        Some(hi) => hi,
        None => max_speed(length).expect("admissible length") - SCAN_END_MARGIN,
    };
    WaveParams::new(length, hi)?;
    if lo >= hi {
        return Err(CliError::Usage(format!("--c-min {lo} must be below --c-max {hi}")));
    }
    let h = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { hi } else { lo + h * i as f64 })
        .collect())
}

pub fn scan(cfg: &RunConfig) -> Result<Output, CliError> {
    let length = cfg.length()?;
    let grid = scan_grid(cfg, length)?;
    let results: Vec<_> = grid
        .par_iter()
        .map(|&c| classify(length, c, cfg.modes, cfg.samples))
        .collect();

    let rows: Vec<ScanRow> = grid.iter().zip(&results).map(|(&c, r)| ScanRow::new(c, r)).collect();
    let notes: Vec<String> = grid
        .iter()
        .zip(&results)
        .filter_map(|(c, r)| r.as_ref().err().map(|e| format!("warning: c = {c:?}: {e}")))
        .collect();
    let code = if notes.len() == rows.len() { 3 } else { 0 };

    let body = match cfg.format_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("c,detQ,detP,inner_f1_1,nP,verdict\n");
            for row in &rows {
                s.push_str(&row.csv());
                s.push('\n');
            }
            s
        }
        Format::Json => json(&ScanJson { length, rows: &rows }),
    };
    Ok(Output { body, meta: None, notes, code })
}

/// `ddwave threshold`
pub fn threshold(cfg: &RunConfig) -> Result<Output, CliError> {
    let length = cfg.length()?;
    let format = cfg.format_or(Format::Json);
    match threshold_c_sampled(length, cfg.tol, cfg.samples) {
        Ok(t) => Ok(Output::ok(match format {
            Format::Json => json(&t),
            Format::Csv => format!(
                "L,c_threshold,det_lo,det_hi,iterations,tol\n{:?},{:?},{:?},{:?},{},{:?}\n",
                t.length, t.c_threshold, t.det_bracket[0], t.det_bracket[1], t.iterations, t.tol
            ),
        })),
        Err(Error::NoThreshold { scan }) => {
            #[derive(Serialize)]
            struct Row {
                c: f64,
                #[serde(rename = "detP")]
                det_p: Option<f64>,
            }
            let rows: Vec<Row> = scan
                .iter()
                .map(|&(c, d)| Row { c, det_p: d.is_finite().then_some(d) })
                .collect();
            #[derive(Serialize)]
            struct Scan<'a> {
                #[serde(rename = "L")]
                length: f64,
                scan: &'a [Row],
            }
            let body = match format {
                Format::Json => json(&Scan { length, scan: &rows }),
                Format::Csv => {
                    let mut s = String::from("c,detP\n");
                    for r in &rows {
                        let d = r.det_p.map(|d| format!("{d:?}")).unwrap_or_default();
                        let _ = writeln!(s, "{:?},{d}", r.c);
                    }
                    s
                }
            };
            let notes = vec![format!("error: {}", Error::NoThreshold { scan: Vec::new() })];
            Ok(Output { body, meta: None, notes, code: 4 })
        }
        Err(e) => Err(e.into()),
    }
}

/// Column order of the stability report, identical to its JSON key order.
const REPORT_KEYS: [&str; 16] = [
    "L", "c", "detQ", "detP", "inner_f1_1", "theta", "nD", "zD", "n0", "z0", "nDPi", "zDPi", "nP",
    "zP", "krein", "verdict",
];

/// `ddwave stability`
pub fn stability(cfg: &RunConfig) -> Result<Output, CliError> {
    let p = cfg.params()?;
    let r = classify(p.length(), p.speed(), cfg.modes, cfg.samples)?;
    let body = match cfg.format_or(Format::Json) {
        Format::Json => json(&r),
        Format::Csv => {
            let vals = [
                format!("{:?}", r.length),
                format!("{:?}", r.c),
                format!("{:?}", r.det_q),
                format!("{:?}", r.det_p),
                format!("{:?}", r.inner_f1_1),
                format!("{:?}", r.theta),
                r.n_d.to_string(),
                r.z_d.to_string(),
                r.n0.to_string(),
                r.z0.to_string(),
                r.n_dpi.to_string(),
                r.z_dpi.to_string(),
                r.n_p.to_string(),
                r.z_p.to_string(),
                r.krein.to_string(),
                r.verdict.to_string(),
            ];
            format!("{}\n{}\n", REPORT_KEYS.join(","), vals.join(","))
        }
    };
    let code = if r.verdict == Verdict::Degenerate { 5 } else { 0 };
    Ok(Output { code, ..Output::ok(body) })
}

/// `ddwave spectrum`
pub fn spectrum(cfg: &RunConfig) -> Result<Output, CliError> {
    let p = cfg.params()?;
    let tag = |stage| move |e: Error| Error::Stage { stage, source: Box::new(e) };
    let profile = build_profile(p.length(), p.speed(), cfg.samples).map_err(tag(Stage::Profile))?;
    let spec = hill_spectrum(&HillField::new(profile), cfg.modes).map_err(tag(Stage::Spectrum))?;

    #[derive(Serialize)]
    struct Footer {
        modes: usize,
        zero_mode: f64,
        zero_mode_similarity: f64,
    }
    let footer = Footer {
        modes: cfg.modes,
        zero_mode: spec.zero_mode,
        zero_mode_similarity: spec.zero_mode_similarity,
    };
    let body = match cfg.format_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("index,lambda\n");
            for (i, l) in spec.eigenvalues.iter().enumerate() {
                let _ = writeln!(s, "{i},{l:?}");
            }
            s + &json(&footer)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Full<'a> {
                #[serde(rename = "L")]
                length: f64,
                c: f64,
                eigenvalues: &'a [f64],
                #[serde(flatten)]
                footer: Footer,
            }
            json(&Full { length: p.length(), c: p.speed(), eigenvalues: &spec.eigenvalues, footer })
        }
    };
    Ok(Output::ok(body))
}

/// Sidecar path for the `wave` header: `<out>.meta.json`.
pub fn meta_path(out: &std::path::Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}
