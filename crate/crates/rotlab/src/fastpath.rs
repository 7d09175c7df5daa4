//! Floating-point census, opt-in via `--float-fast`. Values within
//! [`EPS`] are treated as equal; results are checked against the exact census
//! by the verification suites rather than trusted.

use std::collections::{BTreeMap, HashMap};

use rotlab::exact::PointSet;

use crate::io::CensusReport;

pub const EPS: f64 = 1e-9;
/// Cell size for bucketing rotation components.
const CELL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
struct FRot {
    p: (f64, f64),
    q: (f64, f64),
}

impl FRot {
    fn apply(&self, z: (f64, f64)) -> (f64, f64) {
        (
            self.p.0 * z.0 - self.p.1 * z.1 + self.q.0,
            self.p.0 * z.1 + self.p.1 * z.0 + self.q.1,
        )
    }

    fn comps(&self) -> [f64; 4] {
        [self.p.0, self.p.1, self.q.0, self.q.1]
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EPS * a.abs().max(b.abs()).max(1.0)
}

/// Rotations bucketed by rounded components. A component within `EPS` of a
/// cell boundary also probes the neighbouring cell, so near-equal values in
/// adjacent cells still merge.
#[derive(Default)]
struct Buckets {
    cells: HashMap<[i64; 4], Vec<usize>>,
    reps: Vec<FRot>,
    counts: Vec<u64>,
}

impl Buckets {
    fn candidates(v: f64) -> Vec<i64> {
        let scaled = v / CELL;
        let base = scaled.round() as i64;
        let frac = scaled - scaled.floor();
        let mut out = vec![base];
        if (frac - 0.5).abs() * CELL <= EPS * v.abs().max(1.0) {
            let other = if scaled.round() > scaled { base - 1 } else { base + 1 };
            out.push(other);
        }
        out
    }

    fn insert(&mut self, r: FRot) {
        let comps = r.comps();
        let cand: Vec<Vec<i64>> = comps.iter().map(|&v| Self::candidates(v)).collect();
        for &a in &cand[0] {
            for &b in &cand[1] {
                for &c in &cand[2] {
                    for &d in &cand[3] {
                        if let Some(ids) = self.cells.get(&[a, b, c, d]) {
                            for &id in ids {
                                let rep = self.reps[id].comps();
                                if rep.iter().zip(&comps).all(|(x, y)| close(*x, *y)) {
                                    self.counts[id] += 1;
                                    return;
                                }
                            }
                        }
                    }
                }
            }
        }
        let key = [cand[0][0], cand[1][0], cand[2][0], cand[3][0]];
        self.cells.entry(key).or_default().push(self.reps.len());
        self.reps.push(r);
        self.counts.push(1);
    }
}

fn collinear_f(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> bool {
    let det = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
    let scale = [a, b, c].iter().map(|p| p.0.abs().max(p.1.abs())).fold(1.0, f64::max);
    det.abs() <= EPS * scale * scale
}

/// The census report computed in `f64`. Sequential, so the merge order is
/// fixed and the output deterministic.
pub fn float_census(s: &PointSet, include_identity: bool) -> CensusReport {
    let pts: Vec<(f64, f64)> = s.iter().map(|p| p.to_f64()).collect();
    let n = pts.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let d = (pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2);
                pairs.push((d, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut last = f64::NAN;
    for (d, i, j) in pairs {
        if classes.is_empty() || !close(d, last) {
            classes.push(Vec::new());
            last = d;
        }
        classes.last_mut().unwrap().push((i, j));
    }
    let k_size: u64 = classes.iter().map(|c| (c.len() * (c.len() - 1)) as u64).sum();
    let mut buckets = Buckets::default();
    for class in &classes {
        for &(a, b) in class {
            let v = (pts[b].0 - pts[a].0, pts[b].1 - pts[a].1);
            let n2 = v.0 * v.0 + v.1 * v.1;
            for &(a2, b2) in class {
                if (a, b) == (a2, b2) {
                    continue;
                }
                let w = (pts[b2].0 - pts[a2].0, pts[b2].1 - pts[a2].1);
                // p = w·conj(v)/|v|²
                let p = ((w.0 * v.0 + w.1 * v.1) / n2, (w.1 * v.0 - w.0 * v.1) / n2);
                let pa = (p.0 * pts[a].0 - p.1 * pts[a].1, p.0 * pts[a].1 + p.1 * pts[a].0);
                let q = (pts[a2].0 - pa.0, pts[a2].1 - pa.1);
                buckets.insert(FRot { p, q });
            }
        }
    }
    let mut rots: Vec<(FRot, u64)> = buckets
        .reps
        .into_iter()
        .zip(buckets.counts)
        .map(|(r, c)| (r, recover_k(c)))
        .collect();
    let quadruples: u64 = rots.iter().map(|(_, k)| k * (k - 1)).sum();
    let binom = quadruples / 2;
    if include_identity {
        rots.push((
            FRot {
                p: (1.0, 0.0),
                q: (0.0, 0.0),
            },
            n as u64,
        ));
    }
    let mut nk: BTreeMap<u64, u64> = BTreeMap::new();
    let (mut joints, mut flats, mut lows, mut excluded) = (0, 0, 0, 0);
    for (r, k) in &rots {
        *nk.entry(*k).or_insert(0) += 1;
        if close(r.p.0, -1.0) && r.p.1.abs() <= EPS {
            excluded += 1;
        }
        if *k < 3 {
            lows += 1;
            continue;
        }
        let src: Vec<(f64, f64)> = pts
            .iter()
            .copied()
            .filter(|&a| {
                let b = r.apply(a);
                pts.iter().any(|&c| close(b.0, c.0) && close(b.1, c.1))
            })
            .collect();
        let joint = src.len() >= 3 && src[2..].iter().any(|&c| !collinear_f(src[0], src[1], c));
        if joint {
            joints += 1;
        } else if src.len() >= 3 {
            flats += 1;
        } else {
            lows += 1;
        }
    }
    let max = nk.keys().next_back().copied().unwrap_or(0);
    let mut n_geq = BTreeMap::new();
    let mut running = 0;
    for k in (2..=max).rev() {
        running += nk.get(&k).copied().unwrap_or(0);
        n_geq.insert(k, running);
    }
    CensusReport {
        mode: "float".into(),
        s: n,
        x: classes.len(),
        k: k_size,
        nk,
        n_geq,
        joints,
        flats,
        lows,
        chart_excluded: excluded,
        identity_included: include_identity,
        sum_k_k_minus_1_nk: quadruples,
        sum_binom_k2_nk: binom,
    }
}

/// Nearest `k` with `k(k−1) = c`; a float census may see miscounted
/// quadruples, which then shows up as a mismatch against the exact census.
fn recover_k(c: u64) -> u64 {
    ((1.0 + (1.0 + 4.0 * c as f64).sqrt()) / 2.0).round() as u64
}
