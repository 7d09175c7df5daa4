//! Exact scalars, planar points and rigid motions.
//!
//! Every coordinate is a [`Rational`] in lowest terms, so structural equality
//! of two values is equality of the numbers they denote. Rigid motions are
//! stored through the unit complex number `p = (cos θ, sin θ)` and the
//! translation `q`; the angle itself is never materialized.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` in lowest terms. Panics on `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {text:?}: {reason}")]
pub struct RationalParseError {
    pub text: String,
    pub reason: &'static str,
}

/// Parses `"n"` or `"n/d"`. Non-reduced input is accepted and reduced; a zero
/// or negative denominator is rejected.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, RationalParseError> {
    let err = |reason| RationalParseError {
        text: text.to_string(),
        reason,
    };
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let num = BigInt::from_str(num).map_err(|_| err("numerator is not an integer"))?;
    let den = match den {
        Some(d) => {
            let d = BigInt::from_str(d).map_err(|_| err("denominator is not an integer"))?;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            if d.is_negative() {
                return Err(err("negative denominator"));
            }
            d
        }
        None => BigInt::one(),
    };
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter storing a rational as its canonical string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(de::Error::custom)
    }
}

/// A point of the plane, also used as a complex number `x + iy`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanarPoint {
    pub x: Rational,
    pub y: Rational,
}

impl PlanarPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(int(x), int(y))
    }

    pub fn origin() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Self::new(Rational::one(), Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.x, -&self.y)
    }

    pub fn scale(&self, t: &Rational) -> Self {
        Self::new(&self.x * t, &self.y * t)
    }

    /// Complex product.
    pub fn cmul(&self, o: &Self) -> Self {
        Self::new(&self.x * &o.x - &self.y * &o.y, &self.x * &o.y + &self.y * &o.x)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.x.clone(), -&self.y)
    }

    pub fn dot(&self, o: &Self) -> Rational {
        &self.x * &o.x + &self.y * &o.y
    }

    /// `x·o.y − y·o.x`
    pub fn cross(&self, o: &Self) -> Rational {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.x.to_f64().unwrap_or(f64::NAN), self.y.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for PlanarPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

impl Serialize for PlanarPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&format_rational(&self.x))?;
        t.serialize_element(&format_rational(&self.y))?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for PlanarPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct PointVisitor;
        impl<'de> Visitor<'de> for PointVisitor {
            type Value = PlanarPoint;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a pair of rational strings")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<PlanarPoint, A::Error> {
                let x: String = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let y: String = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                let x = parse_rational(&x).map_err(de::Error::custom)?;
                let y = parse_rational(&y).map_err(de::Error::custom)?;
                Ok(PlanarPoint::new(x, y))
            }
        }
        d.deserialize_tuple(2, PointVisitor)
    }
}

pub fn squared_distance(a: &PlanarPoint, b: &PlanarPoint) -> Rational {
    a.sub(b).norm_sq()
}

/// Twice the signed area of the triangle `abc`.
pub fn orientation(a: &PlanarPoint, b: &PlanarPoint, c: &PlanarPoint) -> Rational {
    b.sub(a).cross(&c.sub(a))
}

pub fn collinear(a: &PlanarPoint, b: &PlanarPoint, c: &PlanarPoint) -> bool {
    orientation(a, b, c).is_zero()
}

fn check_unit(p: &PlanarPoint) -> Result<()> {
    if p.norm_sq().is_one() {
        Ok(())
    } else {
        Err(Error::NotUnit(format_rational(&p.x), format_rational(&p.y)))
    }
}

/// Orientation-preserving rigid motion `z ↦ p·z + q` with `|p| = 1`.
///
/// Field order makes the derived `Ord`/`Hash` the canonical key
/// `(p₁, p₂, q₁, q₂)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rotation {
    p: PlanarPoint,
    q: PlanarPoint,
}

impl Rotation {
    pub fn new(p: PlanarPoint, q: PlanarPoint) -> Result<Self> {
        check_unit(&p)?;
        Ok(Self { p, q })
    }

    pub fn identity() -> Self {
        Self {
            p: PlanarPoint::one(),
            q: PlanarPoint::origin(),
        }
    }

    pub fn translation(q: PlanarPoint) -> Self {
        Self {
            p: PlanarPoint::one(),
            q,
        }
    }

    pub fn p(&self) -> &PlanarPoint {
        &self.p
    }

    pub fn q(&self) -> &PlanarPoint {
        &self.q
    }

    pub fn is_identity(&self) -> bool {
        self.p.x.is_one() && self.p.y.is_zero() && self.q.is_zero()
    }

    pub fn is_translation(&self) -> bool {
        self.p.x.is_one() && self.p.y.is_zero()
    }

    /// `p = −1`: the rotation by π, which lies outside the tan-half-angle chart.
    pub fn is_half_turn(&self) -> bool {
        self.p.x == -Rational::one() && self.p.y.is_zero()
    }

    pub fn apply(&self, z: &PlanarPoint) -> PlanarPoint {
        self.p.cmul(z).add(&self.q)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Rotation) -> Rotation {
        Rotation {
            p: self.p.cmul(&other.p),
            q: self.p.cmul(&other.q).add(&self.q),
        }
    }

    /// `self ∘ φ`
    pub fn compose_anti(&self, phi: &AntiRotation) -> AntiRotation {
        AntiRotation {
            p: self.p.cmul(&phi.p),
            q: self.p.cmul(&phi.q).add(&self.q),
        }
    }

    pub fn inverse(&self) -> Rotation {
        let pc = self.p.conj();
        Rotation {
            q: pc.cmul(&self.q).neg(),
            p: pc,
        }
    }

    pub fn key(&self) -> [&Rational; 4] {
        [&self.p.x, &self.p.y, &self.q.x, &self.q.y]
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z -> {}*z + {}", self.p, self.q)
    }
}

/// The unique rotation taking `a ↦ a2` and `b ↦ b2`.
pub fn rotation_from_two_pairs(
    a: &PlanarPoint,
    b: &PlanarPoint,
    a2: &PlanarPoint,
    b2: &PlanarPoint,
) -> Result<Rotation> {
    if a == b {
        return Err(Error::DegeneratePair);
    }
    let src = b.sub(a);
    let dst = b2.sub(a2);
    let len = src.norm_sq();
    let len2 = dst.norm_sq();
    if len != len2 {
        return Err(Error::DistanceMismatch(format_rational(&len), format_rational(&len2)));
    }
    let p = dst.cmul(&src.conj()).scale(&len.recip());
    let q = a2.sub(&p.cmul(a));
    let rot = Rotation::new(p, q)?;
    debug_assert!(rot.apply(a) == *a2 && rot.apply(b) == *b2);
    Ok(rot)
}

pub fn apply_rotation(tau: &Rotation, z: &PlanarPoint) -> PlanarPoint {
    tau.apply(z)
}

/// Orientation-reversing rigid motion `z ↦ p·conj(z) + q` with `|p| = 1`.
///
/// The reflection axis through the origin has direction `√p`; the form
/// `z ↦ conj(p'·z + q')` converts via `p = conj(p')`, `q = conj(q')`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AntiRotation {
    p: PlanarPoint,
    q: PlanarPoint,
}

impl AntiRotation {
    pub fn new(p: PlanarPoint, q: PlanarPoint) -> Result<Self> {
        check_unit(&p)?;
        Ok(Self { p, q })
    }

    /// Builds `z ↦ conj(p'·z + q')`.
    pub fn from_conjugate_form(p_prime: &PlanarPoint, q_prime: &PlanarPoint) -> Result<Self> {
        Self::new(p_prime.conj(), q_prime.conj())
    }

    /// Returns `(p', q')` with `self(z) = conj(p'·z + q')`.
    pub fn to_conjugate_form(&self) -> (PlanarPoint, PlanarPoint) {
        (self.p.conj(), self.q.conj())
    }

    pub fn p(&self) -> &PlanarPoint {
        &self.p
    }

    pub fn q(&self) -> &PlanarPoint {
        &self.q
    }

    pub fn apply(&self, z: &PlanarPoint) -> PlanarPoint {
        self.p.cmul(&z.conj()).add(&self.q)
    }

    /// `self ∘ τ`
    pub fn compose_rotation(&self, tau: &Rotation) -> AntiRotation {
        AntiRotation {
            p: self.p.cmul(&tau.p().conj()),
            q: self.p.cmul(&tau.q().conj()).add(&self.q),
        }
    }

    /// `self ∘ other`, an orientation-preserving motion.
    pub fn compose(&self, other: &AntiRotation) -> Rotation {
        Rotation {
            p: self.p.cmul(&other.p.conj()),
            q: self.p.cmul(&other.q.conj()).add(&self.q),
        }
    }
}

impl fmt::Display for AntiRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z -> {}*conj(z) + {}", self.p, self.q)
    }
}

pub fn apply_anti_rotation(phi: &AntiRotation, z: &PlanarPoint) -> PlanarPoint {
    phi.apply(z)
}

/// An ordered list of pairwise distinct points.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PointSet {
    points: Vec<PlanarPoint>,
}

impl PointSet {
    pub fn new(points: Vec<PlanarPoint>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if !seen.insert(p) {
                return Err(Error::DuplicatePoint(format_rational(&p.x), format_rational(&p.y)));
            }
        }
        Ok(Self { points })
    }

    /// Drops repeated points, keeping first occurrences.
    pub fn dedup_from(points: impl IntoIterator<Item = PlanarPoint>) -> Self {
        let mut seen = HashSet::new();
        let points = points.into_iter().filter(|p| seen.insert(p.clone())).collect();
        Self { points }
    }

    pub fn points(&self) -> &[PlanarPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PlanarPoint> {
        self.points.iter()
    }

    pub fn lookup(&self) -> HashSet<&PlanarPoint> {
        self.points.iter().collect()
    }

    pub fn map(&self, tau: &Rotation) -> PointSet {
        PointSet {
            points: self.points.iter().map(|z| tau.apply(z)).collect(),
        }
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a PlanarPoint;
    type IntoIter = std::slice::Iter<'a, PlanarPoint>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}
