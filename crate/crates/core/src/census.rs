//! Enumeration of every rotation induced by an equal-distance quadruple.
//!
//! `K` is the set of ordered quadruples `(a, b, a', b')` with `(a, b) ≠ (a', b')`
//! and `|ab| = |a'b'| > 0`. Each such quadruple determines the rotation taking
//! `a ↦ a'` and `b ↦ b'`, and a rotation of multiplicity `k` arises from
//! exactly `k(k−1)` of them. Summing over rotations therefore recovers
//! `|K| = Σᵢ |Eᵢ|(|Eᵢ|−1)`.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{collinear, squared_distance, PlanarPoint, PointSet, Rational, Rotation};
use crate::lift::{incident, HParabola};

/// Ordered point pairs grouped by squared distance. Pairs are index pairs into
/// the point set they were built from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DistanceClasses {
    classes: BTreeMap<Rational, Vec<(usize, usize)>>,
}

impl DistanceClasses {
    pub fn classes(&self) -> &BTreeMap<Rational, Vec<(usize, usize)>> {
        &self.classes
    }

    /// Number of distinct distances, `x`.
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.classes.values().map(Vec::len)
    }

    /// `Σᵢ |Eᵢ|(|Eᵢ|−1)`
    pub fn quadruple_count(&self) -> u64 {
        self.sizes().map(|n| (n as u64) * (n as u64).saturating_sub(1)).sum()
    }
}

pub fn distance_classes(s: &PointSet) -> DistanceClasses {
    let pts = s.points();
    let mut classes: BTreeMap<Rational, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            if i != j {
                classes
                    .entry(squared_distance(&pts[i], &pts[j]))
                    .or_default()
                    .push((i, j));
            }
        }
    }
    DistanceClasses { classes }
}

/// `|K|`, the number of ordered equal-distance quadruples.
pub fn k_size(s: &PointSet) -> u64 {
    distance_classes(s).quadruple_count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Classification {
    /// Maps a non-degenerate triangle of the set into the set.
    Joint,
    /// Multiplicity at least 3, every mapped source point on one line.
    Flat,
    /// Multiplicity below 3.
    Low,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Joint => "joint",
            Classification::Flat => "flat",
            Classification::Low => "low",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub multiplicity: u64,
    /// Quadruples of `K` producing this rotation; 0 for the identity.
    pub quadruple_count: u64,
    pub classification: Classification,
    pub chart_excluded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CensusOptions {
    pub include_identity: bool,
    /// Size of a dedicated thread pool; `None` uses the ambient rayon pool.
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationCensus {
    pub entries: BTreeMap<Rotation, CensusEntry>,
    pub identity_included: bool,
    /// Number of points.
    pub s: usize,
    /// Number of distinct distances.
    pub x: usize,
    /// `|K|` from the distance classes.
    pub k_size: u64,
}

/// Recovers `k` from `c = k(k−1)`.
pub fn multiplicity_from_count(c: u64) -> Result<u64> {
    let disc = 1 + 4 * c as u128;
    let r = isqrt(disc);
    if r * r != disc {
        return Err(Error::IntegralityViolation { count: c });
    }
    let k = r.div_ceil(2) as u64;
    if k * (k - 1) != c {
        return Err(Error::IntegralityViolation { count: c });
    }
    Ok(k)
}

fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

struct ClassData<'a> {
    pairs: &'a [(usize, usize)],
    /// `conj(b − a) / |b − a|²` per pair, so that `p = (b' − a')·w`.
    inv_dirs: Vec<PlanarPoint>,
    dirs: Vec<PlanarPoint>,
}

fn count_quadruples(pts: &[PlanarPoint], classes: &DistanceClasses) -> HashMap<Rotation, u64> {
    let data: Vec<ClassData> = classes
        .classes
        .iter()
        .map(|(d2, pairs)| {
            let inv = d2.recip();
            let dirs: Vec<PlanarPoint> = pairs.iter().map(|&(a, b)| pts[b].sub(&pts[a])).collect();
            let inv_dirs = dirs.iter().map(|v| v.conj().scale(&inv)).collect();
            ClassData { pairs, inv_dirs, dirs }
        })
        .collect();
    let work: Vec<(usize, usize)> = data
        .iter()
        .enumerate()
        .flat_map(|(c, cd)| (0..cd.pairs.len()).map(move |i| (c, i)))
        .collect();
    work.par_iter()
        .fold(HashMap::new, |mut acc: HashMap<Rotation, u64>, &(c, i)| {
            let cd = &data[c];
            let a = &pts[cd.pairs[i].0];
            let w = &cd.inv_dirs[i];
            for (j, &(a2, _)) in cd.pairs.iter().enumerate() {
                if j == i {
                    continue;
                }
                let p = cd.dirs[j].cmul(w);
                let q = pts[a2].sub(&p.cmul(a));
                let rot = Rotation::new(p, q).expect("equal-length pairs give a unit p");
                *acc.entry(rot).or_insert(0) += 1;
            }
            acc
        })
        .reduce(HashMap::new, merge_counts)
}

fn merge_counts(mut a: HashMap<Rotation, u64>, b: HashMap<Rotation, u64>) -> HashMap<Rotation, u64> {
    let (mut big, small) = if a.len() >= b.len() {
        (a, b)
    } else {
        (b, std::mem::take(&mut a))
    };
    for (k, v) in small {
        *big.entry(k).or_insert(0) += v;
    }
    big
}

pub fn rotation_census(s: &PointSet, opts: CensusOptions) -> Result<RotationCensus> {
    match opts.workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            pool.install(|| census_in_pool(s, opts))
        }
        None => census_in_pool(s, opts),
    }
}

fn census_in_pool(s: &PointSet, opts: CensusOptions) -> Result<RotationCensus> {
    let classes = distance_classes(s);
    let counts = count_quadruples(s.points(), &classes);
    let lookup = s.lookup();
    let mut entries: Vec<(Rotation, u64, u64)> = counts
        .into_iter()
        .map(|(rot, c)| multiplicity_from_count(c).map(|k| (rot, k, c)))
        .collect::<Result<_>>()?;
    if opts.include_identity {
        entries.push((Rotation::identity(), s.len() as u64, 0));
    }
    let entries: BTreeMap<Rotation, CensusEntry> = entries
        .into_par_iter()
        .map(|(rot, k, c)| {
            let classification = if k >= 3 {
                classify_with(&rot, s, &lookup)
            } else {
                Classification::Low
            };
            let entry = CensusEntry {
                multiplicity: k,
                quadruple_count: c,
                classification,
                chart_excluded: rot.is_half_turn(),
            };
            (rot, entry)
        })
        .collect();
    Ok(RotationCensus {
        entries,
        identity_included: opts.include_identity,
        s: s.len(),
        x: classes.count(),
        k_size: classes.quadruple_count(),
    })
}

/// `A_τ = {a ∈ S : τ(a) ∈ S}`
pub fn source_set(tau: &Rotation, s: &PointSet) -> Vec<PlanarPoint> {
    let lookup = s.lookup();
    source_set_with(tau, s, &lookup)
}

fn source_set_with(tau: &Rotation, s: &PointSet, lookup: &HashSet<&PlanarPoint>) -> Vec<PlanarPoint> {
    s.iter().filter(|a| lookup.contains(&tau.apply(a))).cloned().collect()
}

/// `|τ(S) ∩ S|`, by applying `tau` to every point.
pub fn multiplicity(tau: &Rotation, s: &PointSet) -> usize {
    let lookup = s.lookup();
    s.iter().filter(|a| lookup.contains(&tau.apply(a))).count()
}

pub fn classify(tau: &Rotation, s: &PointSet) -> Classification {
    classify_with(tau, s, &s.lookup())
}

fn classify_with(tau: &Rotation, s: &PointSet, lookup: &HashSet<&PlanarPoint>) -> Classification {
    let src = source_set_with(tau, s, lookup);
    if src.len() < 3 {
        return Classification::Low;
    }
    if has_non_collinear_triple(&src) {
        Classification::Joint
    } else {
        Classification::Flat
    }
}

/// Whether the (distinct) points span the plane.
pub fn has_non_collinear_triple(pts: &[PlanarPoint]) -> bool {
    match pts {
        [a, b, rest @ ..] => rest.iter().any(|c| !collinear(a, b, c)),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NkTables {
    /// `N_k`: rotations of multiplicity exactly `k`.
    pub nk: BTreeMap<u64, u64>,
    /// `N_{≥k}` for every `k` from 2 up to the largest multiplicity.
    pub n_geq: BTreeMap<u64, u64>,
}

impl NkTables {
    pub fn n_geq(&self, k: u64) -> u64 {
        self.nk.range(k..).map(|(_, n)| n).sum()
    }

    pub fn n_exact(&self, k: u64) -> u64 {
        self.nk.get(&k).copied().unwrap_or(0)
    }
}

pub fn nk_tables(census: &RotationCensus) -> NkTables {
    let mut nk: BTreeMap<u64, u64> = BTreeMap::new();
    for e in census.entries.values() {
        *nk.entry(e.multiplicity).or_insert(0) += 1;
    }
    let max = nk.keys().next_back().copied().unwrap_or(0);
    let mut n_geq = BTreeMap::new();
    let mut running = 0;
    for k in (2..=max).rev() {
        running += nk.get(&k).copied().unwrap_or(0);
        n_geq.insert(k, running);
    }
    NkTables { nk, n_geq }
}

impl RotationCensus {
    pub fn tables(&self) -> NkTables {
        nk_tables(self)
    }

    /// `Σ k(k−1)` over rotations arising from `K`.
    pub fn quadruple_total(&self) -> u64 {
        self.entries.values().map(|e| e.quadruple_count).sum()
    }

    /// `Σ C(k, 2)·N_k`, the unordered-pair variant of the count, for reporting.
    pub fn binomial_total(&self) -> u64 {
        self.entries
            .iter()
            .filter(|(r, _)| !r.is_identity())
            .map(|(_, e)| e.multiplicity * (e.multiplicity - 1) / 2)
            .sum()
    }

    pub fn count_class(&self, c: Classification) -> usize {
        self.entries.values().filter(|e| e.classification == c).count()
    }

    pub fn chart_excluded(&self) -> usize {
        self.entries.values().filter(|e| e.chart_excluded).count()
    }

    pub fn get(&self, tau: &Rotation) -> Option<&CensusEntry> {
        self.entries.get(tau)
    }

    /// Rotations whose recovered multiplicity differs from direct application.
    pub fn multiplicity_mismatches(&self, s: &PointSet) -> Vec<Rotation> {
        let lookup = s.lookup();
        self.entries
            .par_iter()
            .filter(|(rot, e)| {
                let direct = s.iter().filter(|a| lookup.contains(&rot.apply(a))).count() as u64;
                direct != e.multiplicity
            })
            .map(|(r, _)| r.clone())
            .collect()
    }
}

/// Number of pairs `(τ, h)` with `τ` incident to `h`.
pub fn incidences(rotations: &[Rotation], parabolas: &[HParabola]) -> u64 {
    // A rotation meets h_{a,b} iff it sends a to b, so index parabolas by source.
    let mut by_source: HashMap<&PlanarPoint, HashSet<&PlanarPoint>> = HashMap::new();
    for h in parabolas {
        by_source.entry(h.a()).or_default().insert(h.b());
    }
    let unique: HashSet<&HParabola> = parabolas.iter().collect();
    let dup = parabolas.len() - unique.len();
    let mut total = 0u64;
    for tau in rotations {
        for (a, targets) in &by_source {
            if targets.contains(&tau.apply(a)) {
                total += 1;
            }
        }
    }
    if dup == 0 {
        return total;
    }
    // Repeated parabolas count once per occurrence.
    rotations
        .iter()
        .map(|tau| parabolas.iter().filter(|h| incident(tau, h)).count() as u64)
        .sum()
}

/// Incidences of `rotations` with all non-degenerate `h_{a,b}`, `a, b ∈ S`,
/// along with the count lost to degenerate pairs `b = −a`.
pub fn incidences_with_set(rotations: &[Rotation], s: &PointSet) -> (u64, u64) {
    let lookup = s.lookup();
    let mut kept = 0;
    let mut lost = 0;
    for tau in rotations {
        for a in s {
            let b = tau.apply(a);
            if lookup.contains(&b) {
                if a.add(&b).is_zero() {
                    lost += 1;
                } else {
                    kept += 1;
                }
            }
        }
    }
    (kept, lost)
}

/// The census recomputed from its definition: every ordered quadruple built
/// separately, rotations deduplicated afterwards. Quartic; for tests only.
pub fn brute_force_counts(s: &PointSet) -> BTreeMap<Rotation, u64> {
    let pts = s.points();
    let n = pts.len();
    let mut out = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            for a2 in 0..n {
                for b2 in 0..n {
                    if a2 == b2 || (a, b) == (a2, b2) {
                        continue;
                    }
                    let d = squared_distance(&pts[a], &pts[b]) - squared_distance(&pts[a2], &pts[b2]);
                    if !d.is_zero() {
                        continue;
                    }
                    let r = crate::exact::rotation_from_two_pairs(&pts[a], &pts[b], &pts[a2], &pts[b2])
                        .expect("equal distances");
                    *out.entry(r).or_insert(0) += 1;
                }
            }
        }
    }
    out
}
