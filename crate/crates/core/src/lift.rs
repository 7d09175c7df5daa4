//! The three-dimensional side of the reduction.
//!
//! A rotation `z ↦ pz + q` with `p = (cos θ, sin θ)` and `q = (ξ, η)` is a
//! point of `(ξ, η, θ)`-space. The chart `Z = tan(θ/2)`, `X = ξ(1+Z²)`,
//! `Y = η(1+Z²)` turns the helix of all rotations sending `a` to `b` into
//! the planar parabola
//!
//! ```text
//! X = (a₁+b₁)Z² + 2a₂Z + (b₁−a₁)
//! Y = (a₂+b₂)Z² − 2a₁Z + (b₂−a₂)
//! ```
//!
//! The chart covers every rotation except the half-turns (`p = −1`).

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    format_rational, rational_str, rotation_from_two_pairs, squared_distance, PlanarPoint, Rational, Rotation,
};
use crate::polymethod::upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct XYZPoint {
    #[serde(with = "rational_str")]
    pub x: Rational,
    #[serde(with = "rational_str")]
    pub y: Rational,
    #[serde(with = "rational_str")]
    pub z: Rational,
}

impl XYZPoint {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Self {
        Self { x, y, z }
    }
}

/// tan(θ/2) = sin θ / (1 + cos θ).
pub fn z_of(tau: &Rotation) -> Result<Rational> {
    if tau.is_half_turn() {
        return Err(Error::ChartExcluded);
    }
    let p = tau.p();
    Ok(&p.y / (Rational::one() + &p.x))
}

pub fn lift_rotation(tau: &Rotation) -> Result<XYZPoint> {
    let z = z_of(tau)?;
    let w = Rational::one() + &z * &z;
    Ok(XYZPoint::new(&tau.q().x * &w, &tau.q().y * &w, z))
}

/// Inverse of [`lift_rotation`].
pub fn unlift(pt: &XYZPoint) -> Rotation {
    let w = Rational::one() + &pt.z * &pt.z;
    let p = PlanarPoint::new((Rational::one() - &pt.z * &pt.z) / &w, (&pt.z + &pt.z) / &w);
    let q = PlanarPoint::new(&pt.x / &w, &pt.y / &w);
    Rotation::new(p, q).expect("tan-half-angle parametrization is unit")
}

/// The lifted helix of all rotations taking `a` to `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HParabola {
    a: PlanarPoint,
    b: PlanarPoint,
    xcoef: [Rational; 3],
    ycoef: [Rational; 3],
}

/// Chart coefficients `[Z², Z, 1]` of the `X` and `Y` equations, without
/// the non-degeneracy check.
pub fn chart_coefficients(a: &PlanarPoint, b: &PlanarPoint) -> ([Rational; 3], [Rational; 3]) {
    let two = Rational::from_integer(2.into());
    (
        [&a.x + &b.x, &two * &a.y, &b.x - &a.x],
        [&a.y + &b.y, -(&two * &a.x), &b.y - &a.y],
    )
}

impl HParabola {
    pub fn a(&self) -> &PlanarPoint {
        &self.a
    }

    pub fn b(&self) -> &PlanarPoint {
        &self.b
    }

    pub fn xcoef(&self) -> &[Rational; 3] {
        &self.xcoef
    }

    pub fn ycoef(&self) -> &[Rational; 3] {
        &self.ycoef
    }

    /// `X(Z)`
    pub fn x_poly(&self) -> UPoly {
        UPoly::quadratic(&self.xcoef)
    }

    /// `Y(Z)`
    pub fn y_poly(&self) -> UPoly {
        UPoly::quadratic(&self.ycoef)
    }

    pub fn point_at(&self, z: &Rational) -> XYZPoint {
        XYZPoint::new(self.x_poly().eval(z), self.y_poly().eval(z), z.clone())
    }

    /// Whether `pt` satisfies both chart equations.
    pub fn contains_point(&self, pt: &XYZPoint) -> bool {
        self.x_poly().eval(&pt.z) == pt.x && self.y_poly().eval(&pt.z) == pt.y
    }
}

#[derive(Serialize, Deserialize)]
struct HParabolaWire {
    a: PlanarPoint,
    b: PlanarPoint,
}

impl Serialize for HParabola {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HParabolaWire {
            a: self.a.clone(),
            b: self.b.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HParabola {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = HParabolaWire::deserialize(d)?;
        parabola_from_pair(&w.a, &w.b).map_err(serde::de::Error::custom)
    }
}

/// `h_{a,b}`. When `b = −a ≠ 0` the curve collapses to a line and is
/// rejected. The pair `a = b = 0` is kept: its curve is the `Z`-axis, the
/// rotations about the origin, and every incidence formula still applies.
pub fn parabola_from_pair(a: &PlanarPoint, b: &PlanarPoint) -> Result<HParabola> {
    if a.add(b).is_zero() && !a.is_zero() {
        return Err(Error::DegenerateParabola);
    }
    let (xcoef, ycoef) = chart_coefficients(a, b);
    Ok(HParabola {
        a: a.clone(),
        b: b.clone(),
        xcoef,
        ycoef,
    })
}

/// Whether `tau` maps `h.a` to `h.b`.
pub fn incident(tau: &Rotation, h: &HParabola) -> bool {
    tau.apply(&h.a) == h.b
}

/// Direction of the helix `h` at `tau`, in `(ξ, η, θ)` coordinates.
pub fn tangent_direction(h: &HParabola, tau: &Rotation) -> Result<[Rational; 3]> {
    if !incident(tau, h) {
        return Err(Error::NotIncident);
    }
    Ok(helix_tangent(&h.a, tau.p()))
}

/// `(a₁ sin θ + a₂ cos θ, −a₁ cos θ + a₂ sin θ, 1)`
pub fn helix_tangent(a: &PlanarPoint, p: &PlanarPoint) -> [Rational; 3] {
    [&a.x * &p.y + &a.y * &p.x, -(&a.x * &p.x) + &a.y * &p.y, Rational::one()]
}

pub fn det3(m: &[[Rational; 3]; 3]) -> Rational {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// Whether the tangents of three parabolas through `tau` are coplanar.
pub fn tangents_coplanar(tau: &Rotation, hs: [&HParabola; 3]) -> Result<bool> {
    let m = [
        tangent_direction(hs[0], tau)?,
        tangent_direction(hs[1], tau)?,
        tangent_direction(hs[2], tau)?,
    ];
    Ok(det3(&m).is_zero())
}

/// Whether some three of the source points give non-coplanar helix tangents
/// at a rotation with linear part `p`.
pub fn is_joint_by_tangents(p: &PlanarPoint, sources: &[PlanarPoint]) -> bool {
    let t: Vec<[Rational; 3]> = sources.iter().map(|a| helix_tangent(a, p)).collect();
    let n = t.len();
    if n < 3 {
        return false;
    }
    // Every tangent has last coordinate 1: they are coplanar iff their tips are
    // collinear, so test each tip against one fixed pair of distinct tips.
    let base = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .find(|&(i, j)| t[i] != t[j]);
    let Some((i, j)) = base else {
        return false;
    };
    (0..n).any(|k| k != i && k != j && !det3(&[t[i].clone(), t[j].clone(), t[k].clone()]).is_zero())
}

/// The unique rotation on both parabolas, if any.
pub fn parabola_intersection(h1: &HParabola, h2: &HParabola) -> Result<Option<Rotation>> {
    if h1 == h2 {
        return Err(Error::SameParabola);
    }
    if h1.a == h2.a || h1.b == h2.b {
        return Ok(None);
    }
    if squared_distance(&h1.a, &h2.a) != squared_distance(&h1.b, &h2.b) {
        return Ok(None);
    }
    rotation_from_two_pairs(&h1.a, &h2.a, &h1.b, &h2.b).map(Some)
}

/// `(a₁, a₂, b₁, b₂)`
pub fn dualize_parabola(h: &HParabola) -> [Rational; 4] {
    [h.a.x.clone(), h.a.y.clone(), h.b.x.clone(), h.b.y.clone()]
}

/// Two linear equations in `(a₁, a₂, b₁, b₂)`, each as 4 coefficients and a
/// constant term: `c·(a₁,a₂,b₁,b₂) + c₀ = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualPlane {
    pub equations: [[Rational; 5]; 2],
}

impl DualPlane {
    pub fn contains(&self, v: &[Rational; 4]) -> bool {
        self.equations.iter().all(|eq| {
            let s = eq[..4]
                .iter()
                .zip(v)
                .map(|(c, x)| c * x)
                .fold(eq[4].clone(), |a, b| a + b);
            s.is_zero()
        })
    }

    pub fn to_strings(&self) -> [[String; 5]; 2] {
        self.equations.clone().map(|eq| eq.map(|c| format_rational(&c)))
    }
}

impl Serialize for DualPlane {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// The 2-plane of all `(a, b)` whose parabola passes through the lift of `tau`.
pub fn dualize_rotation(tau: &Rotation) -> Result<DualPlane> {
    let XYZPoint { x, y, z } = lift_rotation(tau)?;
    let one = Rational::one();
    let zero = Rational::zero();
    let z2 = &z * &z;
    let two_z = &z + &z;
    Ok(DualPlane {
        equations: [
            [&z2 - &one, two_z.clone(), &z2 + &one, zero.clone(), -x],
            [-two_z, &z2 - &one, zero, &z2 + &one, -y],
        ],
    })
}
