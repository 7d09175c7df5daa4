//! Point-set families and rotation families.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{frac, int, rotation_from_two_pairs, PlanarPoint, PointSet, Rational, Rotation};

/// `{(i, j) : 0 ≤ i < w, 0 ≤ j < h}`
pub fn grid(w: usize, h: usize) -> PointSet {
    let pts = (0..w)
        .flat_map(|i| (0..h).map(move |j| PlanarPoint::from_ints(i as i64, j as i64)))
        .collect();
    PointSet::new(pts).expect("grid points are distinct")
}

/// `{(i, 0) : 0 ≤ i < n}`
pub fn collinear(n: usize) -> PointSet {
    PointSet::new((0..n).map(|i| PlanarPoint::from_ints(i as i64, 0)).collect()).expect("distinct abscissae")
}

/// Two rows `(i, 0)`, `(i, 1)` for `1 ≤ i ≤ s` and the half-integer row
/// `(i/2, 1/2)` for `1 ≤ i ≤ 2s`; `4s` points.
pub fn lower_bound_set(s: usize) -> PointSet {
    let s = s as i64;
    let mut pts = Vec::with_capacity(4 * s as usize);
    pts.extend((1..=s).map(|i| PlanarPoint::from_ints(i, 0)));
    pts.extend((1..=s).map(|i| PlanarPoint::from_ints(i, 1)));
    pts.extend((1..=2 * s).map(|i| PlanarPoint::new(frac(i, 2), frac(1, 2))));
    PointSet::new(pts).expect("rows at different heights")
}

/// `(a, b, c)` with the rotation taking `(a,0) ↦ (b,0)` and `(c,1) ↦ (a+b−c,1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBoundRotation {
    pub triple: [i64; 3],
    pub rotation: Rotation,
}

/// Every admissible triple in `[1..s]³`, in lexicographic order.
pub fn lower_bound_rotations(s: usize) -> Vec<LowerBoundRotation> {
    let s = s as i64;
    let mut out = Vec::new();
    for a in 1..=s {
        for b in 1..=s {
            for c in 1..=s {
                let e = a + b - c;
                if !(1..=s).contains(&e) {
                    continue;
                }
                let rotation = rotation_from_two_pairs(
                    &PlanarPoint::from_ints(a, 0),
                    &PlanarPoint::from_ints(c, 1),
                    &PlanarPoint::from_ints(b, 0),
                    &PlanarPoint::from_ints(e, 1),
                )
                .expect("both pairs at squared distance (a−c)²+1");
                out.push(LowerBoundRotation {
                    triple: [a, b, c],
                    rotation,
                });
            }
        }
    }
    out
}

/// Distinct rotations among the family.
pub fn distinct_rotations(family: &[LowerBoundRotation]) -> BTreeSet<Rotation> {
    family.iter().map(|r| r.rotation.clone()).collect()
}

/// `((1−t²)/(1+t²), 2t/(1+t²))`
pub fn rational_unit_vector(t: &Rational) -> PlanarPoint {
    let t2 = t * t;
    let w = Rational::one() + &t2;
    PlanarPoint::new((Rational::one() - &t2) / &w, (t * int(2)) / &w)
}

/// A rational with denominator in `1..=denom_bound` and absolute value at
/// most `range`.
pub fn random_rational<R: Rng>(rng: &mut R, range: i64, denom_bound: i64) -> Rational {
    let d = rng.gen_range(1..=denom_bound.max(1));
    let n = rng.gen_range(-range * d..=range * d);
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn random_point<R: Rng>(rng: &mut R, range: i64, denom_bound: i64) -> PlanarPoint {
    PlanarPoint::new(
        random_rational(rng, range, denom_bound),
        random_rational(rng, range, denom_bound),
    )
}

/// A rational unit vector from a random tan-half-angle parameter.
pub fn random_unit<R: Rng>(rng: &mut R, denom_bound: i64) -> PlanarPoint {
    rational_unit_vector(&random_rational(rng, 4, denom_bound))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `s` distinct points with coordinates in `[−coord_range, coord_range]` and
/// denominators at most `denom_bound`; duplicates are redrawn.
pub fn random_points(s: usize, seed: u64, coord_range: i64, denom_bound: i64) -> Result<PointSet> {
    let denom_bound = denom_bound.max(1);
    // Lattice points available: (2·range·D + 1)² at least for denominator D.
    let side = 2 * coord_range as u128 * denom_bound as u128 + 1;
    if side * side < s as u128 {
        return Err(Error::InvalidParameter(format!(
            "cannot place {s} distinct points with range {coord_range} and denominator bound {denom_bound}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut seen = BTreeSet::new();
    let mut pts = Vec::with_capacity(s);
    while pts.len() < s {
        let p = random_point(&mut rng, coord_range, denom_bound);
        if seen.insert(p.clone()) {
            pts.push(p);
        }
    }
    PointSet::new(pts)
}

pub const REFRAME_ATTEMPTS: usize = 64;

/// A random rotation after which no ordered pair is antipodal (`b = −a`,
/// including `a = b = 0`) and all abscissae are distinct. The identity is
/// tried first.
pub fn generic_reframe(s: &PointSet, seed: u64) -> Result<(PointSet, Rotation)> {
    let mut rng = rng_from_seed(seed);
    for attempt in 0..REFRAME_ATTEMPTS {
        let tau = if attempt == 0 {
            Rotation::identity()
        } else {
            let p = random_unit(&mut rng, 16);
            let q = random_point(&mut rng, 8, 16);
            Rotation::new(p, q).expect("unit vector")
        };
        let image = s.map(&tau);
        if is_generic(&image) {
            return Ok((image, tau));
        }
    }
    Err(Error::ReframeFailed(REFRAME_ATTEMPTS))
}

/// No antipodal pair and no repeated abscissa.
pub fn is_generic(s: &PointSet) -> bool {
    let lookup = s.lookup();
    if s.iter().any(|a| lookup.contains(&a.neg())) {
        return false;
    }
    let xs: BTreeSet<&Rational> = s.iter().map(|p| &p.x).collect();
    xs.len() == s.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Grid,
    Random,
    Collinear,
    LowerBound,
}

/// Which family to build and its size parameters. For sweeps, `s` is the
/// size parameter: the side of a square grid, the point count of random and
/// collinear sets, and the construction parameter of the lower-bound set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub rows: usize,
    pub cols: usize,
    pub s: usize,
    pub seed: u64,
    pub coord_range: i64,
    pub denom_bound: i64,
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            rows: 1,
            cols: 1,
            s: 1,
            seed: 0,
            coord_range: 10,
            denom_bound: 1,
        }
    }

    /// The spec with its size set to `n` as a sweep would.
    pub fn sized(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.s = n;
        out.rows = n;
        out.cols = n;
        out
    }

    pub fn generate(&self) -> Result<PointSet> {
        let check = |v: usize, name: &str| {
            if v == 0 {
                Err(Error::InvalidParameter(format!("{name} must be at least 1")))
            } else {
                Ok(())
            }
        };
        match self.family {
            Family::Grid => {
                check(self.rows, "rows")?;
                check(self.cols, "cols")?;
                Ok(grid(self.cols, self.rows))
            }
            Family::Random => {
                check(self.s, "s")?;
                random_points(self.s, self.seed, self.coord_range, self.denom_bound)
            }
            Family::Collinear => {
                check(self.s, "s")?;
                Ok(collinear(self.s))
            }
            Family::LowerBound => {
                check(self.s, "s")?;
                Ok(lower_bound_set(self.s))
            }
        }
    }
}

/// Whether every coordinate has denominator at most `bound`.
pub fn denominators_within(s: &PointSet, bound: i64) -> bool {
    let b = BigInt::from(bound);
    s.iter().all(|p| p.x.denom() <= &b && p.y.denom() <= &b)
}

/// Whether any point sits at the origin, which makes `h_{0,0}` degenerate.
pub fn has_origin(s: &PointSet) -> bool {
    s.iter().any(|p| p.x.is_zero() && p.y.is_zero())
}
