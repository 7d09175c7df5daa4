//! Point-set files (JSON and two-column CSV) and census reports.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rotlab::census::{Classification, RotationCensus};
use rotlab::exact::{format_rational, parse_rational, PlanarPoint, PointSet};
use rotlab::lift::XYZPoint;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl IoError {
    fn parse(line: usize, column: usize, message: impl fmt::Display) -> Self {
        IoError::Parse {
            line,
            column,
            message: message.to_string(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PointFile {
    points: Vec<PlanarPoint>,
}

pub fn points_from_json(text: &str) -> Result<PointSet, IoError> {
    let file: PointFile = serde_json::from_str(text).map_err(|e| IoError::parse(e.line(), e.column(), e))?;
    PointSet::new(file.points).map_err(|e| IoError::Invalid(e.to_string()))
}

/// Rows `x,y`; a first row that does not parse as numbers is a header.
pub fn points_from_csv(text: &str) -> Result<PointSet, IoError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut pts = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            IoError::parse(line, 1, e)
        })?;
        let line = rec.position().map_or(i + 1, |p| p.line() as usize);
        if rec.len() != 2 {
            return Err(IoError::parse(
                line,
                1,
                format!("expected 2 fields, found {}", rec.len()),
            ));
        }
        if i == 0 && parse_rational(&rec[0]).is_err() && parse_rational(&rec[1]).is_err() {
            continue;
        }
        let mut coords = Vec::with_capacity(2);
        let mut column = 1;
        for field in rec.iter() {
            coords.push(parse_rational(field).map_err(|e| IoError::parse(line, column, e))?);
            column += field.len() + 1;
        }
        let y = coords.pop().unwrap();
        let x = coords.pop().unwrap();
        pts.push(PlanarPoint::new(x, y));
    }
    PointSet::new(pts).map_err(|e| IoError::Invalid(e.to_string()))
}

/// JSON when the first non-blank character is `{`, CSV otherwise.
pub fn points_from_str(text: &str) -> Result<PointSet, IoError> {
    if text.trim_start().starts_with('{') {
        points_from_json(text)
    } else {
        points_from_csv(text)
    }
}

pub fn read_points(path: &Path) -> Result<PointSet, IoError> {
    points_from_str(&read(path)?)
}

pub fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn points_to_json(s: &PointSet) -> String {
    let file = PointFile {
        points: s.points().to_vec(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("points serialize");
    out.push('\n');
    out
}

pub fn points_to_csv(s: &PointSet) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "y"]).unwrap();
    for p in s {
        w.write_record([format_rational(&p.x), format_rational(&p.y)]).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum XyzEntry {
    Triple([String; 3]),
    Named(XYZPoint),
}

#[derive(Deserialize)]
struct XyzFile {
    points: Vec<XyzEntry>,
}

/// `{"points": [["X","Y","Z"], ...]}`; entries may also be `{"x","y","z"}`
/// objects.
pub fn xyz_from_json(text: &str) -> Result<Vec<XYZPoint>, IoError> {
    let file: XyzFile = serde_json::from_str(text).map_err(|e| IoError::parse(e.line(), e.column(), e))?;
    file.points
        .into_iter()
        .enumerate()
        .map(|(i, e)| match e {
            XyzEntry::Named(p) => Ok(p),
            XyzEntry::Triple(t) => {
                let p = |s: &str| parse_rational(s).map_err(|err| IoError::Invalid(format!("point {i}: {err}")));
                Ok(XYZPoint::new(p(&t[0])?, p(&t[1])?, p(&t[2])?))
            }
        })
        .collect()
}

/// Summary of a census as written by `rotlab census`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub mode: String,
    pub s: usize,
    pub x: usize,
    #[serde(rename = "K")]
    pub k: u64,
    pub nk: BTreeMap<u64, u64>,
    pub n_geq: BTreeMap<u64, u64>,
    pub joints: usize,
    pub flats: usize,
    pub lows: usize,
    pub chart_excluded: usize,
    pub identity_included: bool,
    /// `Σ k(k−1)·N_k` over rotations arising from quadruples; equals `K`.
    pub sum_k_k_minus_1_nk: u64,
    /// `Σ C(k,2)·N_k`, half of the ordered count.
    pub sum_binom_k2_nk: u64,
}

impl CensusReport {
    pub fn from_census(c: &RotationCensus) -> Self {
        let t = c.tables();
        Self {
            mode: "exact".into(),
            s: c.s,
            x: c.x,
            k: c.k_size,
            nk: t.nk,
            n_geq: t.n_geq,
            joints: c.count_class(Classification::Joint),
            flats: c.count_class(Classification::Flat),
            lows: c.count_class(Classification::Low),
            chart_excluded: c.chart_excluded(),
            identity_included: c.identity_included,
            sum_k_k_minus_1_nk: c.quadruple_total(),
            sum_binom_k2_nk: c.binomial_total(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

/// One row per rotation: `p1,p2,q1,q2,k,class,chart_excluded`, in canonical
/// rotation order.
pub fn census_csv(c: &RotationCensus) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["p1", "p2", "q1", "q2", "k", "class", "chart_excluded"])
        .unwrap();
    for (rot, e) in &c.entries {
        let [p1, p2, q1, q2] = rot.key().map(format_rational);
        w.write_record([
            p1,
            p2,
            q1,
            q2,
            e.multiplicity.to_string(),
            e.classification.as_str().to_string(),
            e.chart_excluded.to_string(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rotlab::generators::grid;

    #[test]
    fn json_round_trip() {
        let g = grid(3, 3);
        assert_eq!(points_from_json(&points_to_json(&g)).unwrap(), g);
    }

    #[test]
    fn csv_round_trip_with_fractions() {
        let s = points_from_csv("x,y\n1/3,-2\n0,5/7\n").unwrap();
        assert_eq!(points_from_csv(&points_to_csv(&s)).unwrap(), s);
        assert!(points_to_csv(&s).contains("1/3,-2"));
    }

    #[test]
    fn zero_denominator_reports_position() {
        let err = points_from_csv("0,0\n1/0,2\n").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, column: 1, .. }), "{err}");
        let err = points_from_csv("0,0\n2,1/0\n").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, column: 3, .. }), "{err}");
        let err = points_from_json("{\"points\": [\n  [\"1\", \"1/0\"]\n]}").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn xyz_input_forms() {
        let pts = xyz_from_json(r#"{"points": [["1","2","1/2"], {"x":"0","y":"0","z":"0"}]}"#).unwrap();
        assert_eq!(pts.len(), 2);
    }
}
