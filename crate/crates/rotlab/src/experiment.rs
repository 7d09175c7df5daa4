//! Size sweeps: census tables per size, scaling-exponent fits and reference
//! curves with least-squares constants.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use rotlab::census::{incidences_with_set, rotation_census, CensusOptions, Classification};
use rotlab::generators::FamilySpec;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    /// Size parameter the family was generated with.
    pub size: usize,
    /// Number of points.
    pub s: usize,
    pub x: usize,
    #[serde(rename = "K")]
    pub k: u64,
    pub nk: BTreeMap<u64, u64>,
    pub n_geq: BTreeMap<u64, u64>,
    pub joints: usize,
    pub flats: usize,
    pub chart_excluded: usize,
    /// `I(P, C)` over chart rotations and non-degenerate parabolas, with the
    /// incidences lost to degenerate pairs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub incidences: Option<(u64, u64)>,
    pub wall_ms: u64,
    /// `Σ k(k−1)·N_k == K`
    pub conserved: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ExperimentRow {
    pub fn n_geq(&self, k: u64) -> u64 {
        self.nk.range(k..).map(|(_, n)| n).sum()
    }
}

/// Least-squares line `y = slope·x + intercept`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    pub points: usize,
}

pub fn fit_line(pts: &[(f64, f64)]) -> Option<LineFit> {
    let n = pts.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = pts.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    Some(LineFit {
        slope,
        intercept,
        residual: (ss / nf).sqrt(),
        points: n,
    })
}

/// Slope of `log y` against `log x` over the positive samples; needs at
/// least three of them.
pub fn fit_exponent(samples: &[(f64, f64)]) -> Option<LineFit> {
    let logs: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 3 {
        return None;
    }
    fit_line(&logs)
}

/// `C·f(s, k)` with `C` fitted by least squares against the observed `N_{≥k}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceCurve {
    pub name: &'static str,
    pub formula: &'static str,
    pub constant: f64,
    /// `(s, k, observed, C·f(s, k))`
    pub values: Vec<(usize, u64, u64, f64)>,
}

type Shape = fn(f64, f64) -> f64;

const CURVES: [(&str, &str, Shape); 3] = [
    ("s3_over_k2", "s^3/k^2", |s, k| s.powi(3) / (k * k)),
    ("s3_over_k12_7", "s^3/k^(12/7)", |s, k| s.powi(3) / k.powf(12.0 / 7.0)),
    ("s4_over_k3", "s^4/k^3", |s, k| s.powi(4) / k.powi(3)),
];

fn reference_curve(
    rows: &[ExperimentRow],
    kmax: u64,
    (name, formula, f): (&'static str, &'static str, Shape),
) -> ReferenceCurve {
    let mut obs = Vec::new();
    for r in rows.iter().filter(|r| r.error.is_none()) {
        for k in 2..=kmax {
            obs.push((r.s, k, r.n_geq(k), f(r.s as f64, k as f64)));
        }
    }
    let num: f64 = obs.iter().map(|o| o.2 as f64 * o.3).sum();
    let den: f64 = obs.iter().map(|o| o.3 * o.3).sum();
    let constant = if den > 0.0 { num / den } else { 0.0 };
    ReferenceCurve {
        name,
        formula,
        constant,
        values: obs.into_iter().map(|(s, k, n, v)| (s, k, n, constant * v)).collect(),
    }
}

/// `(s, k, N_{≥k}·k²/s³, N_{≥k}·k^{12/7}/s³)`
pub type RatioRow = (usize, u64, f64, f64);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub spec: FamilySpec,
    pub kmax: u64,
    pub rows: Vec<ExperimentRow>,
    pub ratios: Vec<RatioRow>,
    /// `log N_{≥3}` against `log s`.
    pub exponent_n_geq3: Option<LineFit>,
    /// `log N_{≥2}` against `log s`.
    pub exponent_n_geq2: Option<LineFit>,
    pub curves: Vec<ReferenceCurve>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExperimentOptions {
    pub with_incidences: bool,
    /// Write `wall_ms = 0` so that reports are reproducible byte for byte.
    pub omit_timing: bool,
}

pub fn run_row(spec: &FamilySpec, size: usize, opts: ExperimentOptions) -> ExperimentRow {
    let start = Instant::now();
    let mut row = ExperimentRow {
        size,
        s: 0,
        x: 0,
        k: 0,
        nk: BTreeMap::new(),
        n_geq: BTreeMap::new(),
        joints: 0,
        flats: 0,
        chart_excluded: 0,
        incidences: None,
        wall_ms: 0,
        conserved: false,
        error: None,
    };
    let result = spec
        .sized(size)
        .generate()
        .and_then(|set| rotation_census(&set, CensusOptions::default()).map(|c| (set, c)));
    match result {
        Ok((set, c)) => {
            let t = c.tables();
            row.s = c.s;
            row.x = c.x;
            row.k = c.k_size;
            row.conserved = t.nk.iter().map(|(k, n)| k * (k - 1) * n).sum::<u64>() == c.k_size;
            row.nk = t.nk;
            row.n_geq = t.n_geq;
            row.joints = c.count_class(Classification::Joint);
            row.flats = c.count_class(Classification::Flat);
            row.chart_excluded = c.chart_excluded();
            if opts.with_incidences {
                let chart: Vec<_> = c.entries.keys().filter(|r| !r.is_half_turn()).cloned().collect();
                row.incidences = Some(incidences_with_set(&chart, &set));
            }
            if !row.conserved {
                row.error = Some("sum of k(k-1)N_k differs from K".into());
            }
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    if !opts.omit_timing {
        row.wall_ms = start.elapsed().as_millis() as u64;
    }
    row
}

pub fn run_experiment(spec: &FamilySpec, sizes: &[usize], kmax: u64, opts: ExperimentOptions) -> ExperimentReport {
    let mut rows: Vec<ExperimentRow> = sizes.par_iter().map(|&n| run_row(spec, n, opts)).collect();
    rows.sort_by_key(|r| (r.s, r.size));
    let ok: Vec<&ExperimentRow> = rows.iter().filter(|r| r.error.is_none()).collect();
    let mut ratios = Vec::new();
    for r in &ok {
        let s3 = (r.s as f64).powi(3);
        for k in 2..=kmax {
            let n = r.n_geq(k) as f64;
            let kf = k as f64;
            ratios.push((r.s, k, n * kf * kf / s3, n * kf.powf(12.0 / 7.0) / s3));
        }
    }
    let series = |k: u64| -> Vec<(f64, f64)> { ok.iter().map(|r| (r.s as f64, r.n_geq(k) as f64)).collect() };
    let curves = CURVES.iter().map(|&c| reference_curve(&rows, kmax, c)).collect();
    ExperimentReport {
        spec: spec.clone(),
        kmax,
        exponent_n_geq3: fit_exponent(&series(3)),
        exponent_n_geq2: fit_exponent(&series(2)),
        rows,
        ratios,
        curves,
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "s",
    "x",
    "K",
    "k",
    "N_k",
    "N_geq_k",
    "joints",
    "flats",
    "chart_excluded",
    "wall_ms",
];

impl ExperimentReport {
    /// One row per `(s, k)`, `2 ≤ k ≤ kmax`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).unwrap();
        for r in self.rows.iter().filter(|r| r.error.is_none()) {
            for k in 2..=self.kmax {
                w.write_record([
                    r.s.to_string(),
                    r.x.to_string(),
                    r.k.to_string(),
                    k.to_string(),
                    r.nk.get(&k).copied().unwrap_or(0).to_string(),
                    r.n_geq(k).to_string(),
                    r.joints.to_string(),
                    r.flats.to_string(),
                    r.chart_excluded.to_string(),
                    r.wall_ms.to_string(),
                ])
                .unwrap();
            }
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn failures(&self) -> Vec<(usize, &str)> {
        self.rows
            .iter()
            .filter_map(|r| r.error.as_deref().map(|e| (r.size, e)))
            .collect()
    }
}
