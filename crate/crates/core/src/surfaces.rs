//! Special surfaces: the union of the parabolas `h_{a+t·d, b+t·d'}` swept by
//! a line of sources `a + t·d` and its image under a rotation.
//!
//! With `(λ, μ)` a rational multiple of `d + d'` the surface is the zero set of
//!
//! ```text
//! E₂(Z)X − E₁(Z)Y + (E₁Q₄ − E₂Q₃)(Z),   E₁ = λZ + μ,  E₂ = μZ − λ,
//! ```
//!
//! where `Q₃`, `Q₄` are the chart quadratics of `(a, b)`. A parabola `h_{c,e}`
//! lies on it iff `e = φ(c)` for a fixed anti-rotation `φ`, whose axis is
//! parallel to `(λ, μ)`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, AntiRotation, PlanarPoint, PointSet, Rational, Rotation};
use crate::lift::{chart_coefficients, parabola_from_pair, z_of, HParabola, XYZPoint};
use crate::polymethod::{e1, e2, special_free_term, RealRoot, TriPoly, UPoly, Var};

/// The rotation and source line a surface was built from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Provenance {
    pub tau0: Rotation,
    pub a: PlanarPoint,
    pub d: PlanarPoint,
    /// `p·d`
    pub d_img: PlanarPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpecialSurface {
    lam: Rational,
    mu: Rational,
    q3: [Rational; 3],
    q4: [Rational; 3],
    provenance: Option<Provenance>,
}

/// `Σ` through `τ` swept by the sources `a + t·d`.
pub fn surface_from_rotation_line(tau: &Rotation, a: &PlanarPoint, d: &PlanarPoint) -> Result<SpecialSurface> {
    if d.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let lm = PlanarPoint::one().add(tau.p()).cmul(d);
    if lm.is_zero() {
        return Err(Error::HalfTurnDegenerate);
    }
    let b = tau.apply(a);
    let (q3, q4) = chart_coefficients(a, &b);
    Ok(SpecialSurface {
        lam: lm.x,
        mu: lm.y,
        q3,
        q4,
        provenance: Some(Provenance {
            tau0: tau.clone(),
            a: a.clone(),
            d: d.clone(),
            d_img: tau.p().cmul(d),
        }),
    })
}

impl SpecialSurface {
    /// A surface from bare coefficients; `q3`, `q4` are the chart quadratics
    /// of some pair `(a, b)` and are checked for that shape.
    pub fn from_parts(lam: Rational, mu: Rational, q3: [Rational; 3], q4: [Rational; 3]) -> Result<Self> {
        if lam.is_zero() && mu.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let half = Rational::new(1.into(), 2.into());
        // Q₃ = (a₁+b₁, 2a₂, b₁−a₁), Q₄ = (a₂+b₂, −2a₁, b₂−a₂)
        let a = PlanarPoint::new(-&q4[1] * &half, &q3[1] * &half);
        let b = PlanarPoint::new(&q3[0] - &a.x, &q4[0] - &a.y);
        let (e3, e4) = chart_coefficients(&a, &b);
        if e3 != q3 || e4 != q4 {
            return Err(Error::InvalidParameter(
                "q3 and q4 are not the chart quadratics of a point pair".into(),
            ));
        }
        Ok(Self {
            lam,
            mu,
            q3,
            q4,
            provenance: None,
        })
    }

    pub fn lam(&self) -> &Rational {
        &self.lam
    }

    pub fn mu(&self) -> &Rational {
        &self.mu
    }

    pub fn q3(&self) -> &[Rational; 3] {
        &self.q3
    }

    pub fn q4(&self) -> &[Rational; 3] {
        &self.q4
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn e1(&self) -> UPoly {
        e1(&self.lam, &self.mu)
    }

    pub fn e2(&self) -> UPoly {
        e2(&self.lam, &self.mu)
    }

    /// `E₁Q₄ − E₂Q₃`, a cubic in `Z`.
    pub fn free(&self) -> UPoly {
        special_free_term(&self.lam, &self.mu, &self.q3, &self.q4)
    }

    /// `(k₁, k₀)` with `free = (Z²+1)(k₁Z + k₀)`.
    pub fn free_quotient(&self) -> (Rational, Rational) {
        let (quo, rem) = self.free().div_rem(&UPoly::from_ints(&[1, 0, 1]));
        debug_assert!(rem.is_zero());
        (quo.coeff(1), quo.coeff(0))
    }

    pub fn polynomial(&self) -> TriPoly {
        let x = &TriPoly::from_z(&self.e2()) * &TriPoly::var(Var::X);
        let y = &TriPoly::from_z(&self.e1()) * &TriPoly::var(Var::Y);
        &(&x - &y) + &TriPoly::from_z(&self.free())
    }

    pub fn eval(&self, pt: &XYZPoint) -> Rational {
        self.e2().eval(&pt.z) * &pt.x - self.e1().eval(&pt.z) * &pt.y + self.free().eval(&pt.z)
    }

    /// The surface polynomial restricted to `h`, of degree at most 3.
    pub fn substituted(&self, h: &HParabola) -> UPoly {
        &(&(&self.e2() * &h.x_poly()) - &(&self.e1() * &h.y_poly())) + &self.free()
    }

    /// Family quadratics `(Q₁, Q₂)`: the chart quadratics of the direction
    /// pair `(d, d')`, so that `h_{a+td, b+td'}` has `X = Q₃ + tQ₁`.
    pub fn family_quadratics(&self) -> Option<(UPoly, UPoly)> {
        let pv = self.provenance.as_ref()?;
        let (q1, q2) = chart_coefficients(&pv.d, &pv.d_img);
        Some((UPoly::quadratic(&q1), UPoly::quadratic(&q2)))
    }

    /// `h_{a+t·d, b+t·d'}`
    pub fn family_parabola(&self, t: &Rational) -> Option<Result<HParabola>> {
        let pv = self.provenance.as_ref()?;
        let b = pv.tau0.apply(&pv.a);
        Some(parabola_from_pair(
            &pv.a.add(&pv.d.scale(t)),
            &b.add(&pv.d_img.scale(t)),
        ))
    }

    /// Coefficient vector scaled to coprime integers with a positive leading
    /// term. Equal keys mean equal zero sets.
    pub fn canonical_key(&self) -> Vec<TermEntryKey> {
        let p = self.polynomial();
        let l = p.terms().values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let lr = Rational::from_integer(l);
        let ints: Vec<([u32; 3], BigInt)> = p.terms().iter().map(|(e, c)| (*e, (c * &lr).to_integer())).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
        let sign = match ints.last() {
            Some((_, c)) if c.is_negative() => -BigInt::one(),
            _ => BigInt::one(),
        };
        ints.into_iter().map(|(e, c)| TermEntryKey(e, c / &g * &sign)).collect()
    }

    pub fn contains_parabola(&self, h: &HParabola) -> bool {
        self.substituted(h).is_zero()
    }

    pub fn crossings(&self, h: &HParabola) -> Crossings {
        crossings(self, h)
    }
}

/// One term of [`SpecialSurface::canonical_key`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermEntryKey(pub [u32; 3], pub BigInt);

pub fn contains_parabola(sigma: &SpecialSurface, h: &HParabola) -> bool {
    sigma.contains_parabola(h)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Crossings {
    Contained,
    /// Distinct real `Z`-values where `h` meets the surface, increasing.
    Roots(Vec<RealRoot>),
}

pub fn crossings(sigma: &SpecialSurface, h: &HParabola) -> Crossings {
    let f = sigma.substituted(h);
    if f.is_zero() {
        Crossings::Contained
    } else {
        Crossings::Roots(f.real_roots())
    }
}

/// The anti-rotation `φ` with `h_{c,e} ⊂ Σ ⇔ e = φ(c)`.
///
/// Along `h_{c,e}` the linear part `E₂X − E₁Y` equals
/// `(Z²+1)[Z·((μ,−λ)·(c+e)) + (λ,μ)·(c−e)]`, and the free term is
/// `(Z²+1)(k₁Z + k₀)`. Containment is the pair of linear conditions
/// `(μ,−λ)·(c+e) = −k₁` and `(λ,μ)·(c−e) = −k₀`, which fix `e` given `c`.
pub fn anti_rotation_of(sigma: &SpecialSurface) -> AntiRotation {
    let (k1, k0) = sigma.free_quotient();
    let (l, m) = (&sigma.lam, &sigma.mu);
    let partner = |c: &PlanarPoint| {
        // μe₁ − λe₂ = r₁, λe₁ + μe₂ = r₂
        let r1 = -&k1 - (m * &c.x - l * &c.y);
        let r2 = &k0 + (l * &c.x + m * &c.y);
        let det = l * l + m * m;
        PlanarPoint::new((m * &r1 + l * &r2) / &det, (m * &r2 - l * &r1) / &det)
    };
    let shift = partner(&PlanarPoint::origin());
    let r = partner(&PlanarPoint::one()).sub(&shift);
    AntiRotation::new(r, shift).expect("containment locus is an anti-rotation")
}

/// Reflection part `(λ + iμ)² / (λ² + μ²)` of [`anti_rotation_of`].
pub fn reflection_part(lam: &Rational, mu: &Rational) -> PlanarPoint {
    let w = PlanarPoint::new(lam.clone(), mu.clone());
    let n = w.norm_sq();
    w.cmul(&w).scale(&n.recip())
}

/// Pairs `(a, b)` of points of `S` with `h_{a,b}` on the surface.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SurfaceSets {
    pub pairs: Vec<(PlanarPoint, PlanarPoint)>,
}

impl SurfaceSets {
    pub fn a(&self) -> Vec<PlanarPoint> {
        self.pairs.iter().map(|(a, _)| a.clone()).collect()
    }

    pub fn b(&self) -> Vec<PlanarPoint> {
        self.pairs.iter().map(|(_, b)| b.clone()).collect()
    }
}

pub fn surface_sets(sigma: &SpecialSurface, s: &PointSet) -> SurfaceSets {
    let lookup = s.lookup();
    let phi = anti_rotation_of(sigma);
    let mut pairs = Vec::new();
    for a in s {
        let b = phi.apply(a);
        if !lookup.contains(&b) {
            continue;
        }
        if let Ok(h) = parabola_from_pair(a, &b) {
            if sigma.contains_parabola(&h) {
                pairs.push((a.clone(), b));
            }
        }
    }
    SurfaceSets { pairs }
}

/// Number of pairs `(h, Σ)` with `h ⊂ Σ`.
pub fn count_containments(parabolas: &[HParabola], surfaces: &[SpecialSurface]) -> u64 {
    parabolas
        .par_iter()
        .map(|h| surfaces.iter().filter(|s| s.contains_parabola(h)).count() as u64)
        .sum()
}

/// Distinct surfaces by canonical key, first occurrence kept.
pub fn dedup_surfaces(surfaces: Vec<SpecialSurface>) -> Vec<SpecialSurface> {
    let mut seen = HashSet::new();
    surfaces
        .into_iter()
        .filter(|s| seen.insert(s.canonical_key()))
        .collect()
}

/// The axis `n·x = offset` of the anti-rotation together with its glide
/// `shift`, measured along `(−n₂, n₁)` in units of `|n|²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceParam {
    pub normal: PlanarPoint,
    #[serde(with = "crate::exact::rational_str")]
    pub offset: Rational,
    #[serde(with = "crate::exact::rational_str")]
    pub shift: Rational,
}

impl SurfaceParam {
    pub fn new(normal: PlanarPoint, offset: Rational, shift: Rational) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::ZeroDirection);
        }
        Ok(Self { normal, offset, shift })
    }

    /// Rescales so the first nonzero component of the normal is 1.
    pub fn canonical(&self) -> Self {
        let s = if self.normal.x.is_zero() {
            self.normal.y.clone()
        } else {
            self.normal.x.clone()
        };
        let inv = s.recip();
        Self {
            normal: self.normal.scale(&inv),
            offset: &self.offset * &inv,
            shift: &self.shift * &s,
        }
    }

    pub fn direction(&self) -> PlanarPoint {
        PlanarPoint::new(-&self.normal.y, self.normal.x.clone())
    }

    /// Glide reflection in the axis by `shift·direction`.
    pub fn anti_rotation(&self) -> AntiRotation {
        let n = &self.normal;
        let n2 = n.norm_sq();
        let r = n.cmul(n).scale(&-n2.recip());
        let q = n
            .scale(&(&self.offset * Rational::from_integer(2.into()) / &n2))
            .add(&self.direction().scale(&self.shift));
        AntiRotation::new(r, q).expect("reflection part has unit norm")
    }

    /// Slope form `y = αx + β` of the axis and the glide `σ·(1, α)`, defined
    /// when the axis is not vertical.
    pub fn alpha_beta_sigma(&self) -> Option<(Rational, Rational, Rational)> {
        let (n1, n2) = (&self.normal.x, &self.normal.y);
        if n2.is_zero() {
            return None;
        }
        Some((-n1 / n2, &self.offset / n2, -&self.shift * n2))
    }

    pub fn from_alpha_beta_sigma(alpha: &Rational, beta: &Rational, sigma: &Rational) -> Self {
        // Axis −αx + y = β, direction (−1, −α) scaled by −σ gives σ(1, α).
        Self {
            normal: PlanarPoint::new(-alpha, Rational::one()),
            offset: beta.clone(),
            shift: -sigma.clone(),
        }
        .canonical()
    }
}

pub fn surface_param(sigma: &SpecialSurface) -> SurfaceParam {
    let phi = anti_rotation_of(sigma);
    let n = PlanarPoint::new(-&sigma.mu, sigma.lam.clone());
    let c0 = phi.q();
    let offset = n.dot(c0) / Rational::from_integer(2.into());
    let dir = PlanarPoint::new(-&n.y, n.x.clone());
    let shift = c0.dot(&dir) / n.norm_sq();
    SurfaceParam {
        normal: n,
        offset,
        shift,
    }
    .canonical()
}

#[derive(Serialize, Deserialize)]
struct SurfaceWire {
    lam: String,
    mu: String,
    q3: [String; 3],
    q4: [String; 3],
    free: [String; 4],
}

fn strings<const N: usize>(v: &[Rational; N]) -> [String; N] {
    std::array::from_fn(|i| format_rational(&v[i]))
}

impl Serialize for SpecialSurface {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let f = self.free();
        let free: [Rational; 4] = std::array::from_fn(|i| f.coeff(3 - i));
        SurfaceWire {
            lam: format_rational(&self.lam),
            mu: format_rational(&self.mu),
            q3: strings(&self.q3),
            q4: strings(&self.q4),
            free: strings(&free),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpecialSurface {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = SurfaceWire::deserialize(d)?;
        let p = |t: &str| parse_rational(t).map_err(D::Error::custom);
        let q =
            |v: &[String; 3]| -> std::result::Result<[Rational; 3], D::Error> { Ok([p(&v[0])?, p(&v[1])?, p(&v[2])?]) };
        let surface =
            SpecialSurface::from_parts(p(&w.lam)?, p(&w.mu)?, q(&w.q3)?, q(&w.q4)?).map_err(D::Error::custom)?;
        let f = surface.free();
        for (i, t) in w.free.iter().enumerate() {
            if p(t)? != f.coeff(3 - i) {
                return Err(D::Error::custom("free term does not match lam, mu, q3, q4"));
            }
        }
        Ok(surface)
    }
}

/// `Z₀` of the base rotation, when the surface has one in the chart.
pub fn base_z(sigma: &SpecialSurface) -> Option<Rational> {
    sigma.provenance.as_ref().and_then(|pv| z_of(&pv.tau0).ok())
}
