//! Sparse polynomials in the chart variables `X, Y, Z`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{format_rational, int, parse_rational, Rational};
use crate::lift::XYZPoint;
use crate::polymethod::upoly::UPoly;

pub type Exponent = [u32; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X = 0,
    Y = 1,
    Z = 2,
}

/// Map from exponent triple to nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TriPoly {
    terms: BTreeMap<Exponent, Rational>,
}

impl TriPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(exp: Exponent, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v as usize] = 1;
        Self::monomial(e, Rational::one())
    }

    /// Lifts a polynomial in `Z`.
    pub fn from_z(u: &UPoly) -> Self {
        let mut p = Self::zero();
        for (k, c) in u.coeffs().iter().enumerate() {
            p.add_term([0, 0, k as u32], c.clone());
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Rational> {
        &self.terms
    }

    pub fn coeff(&self, exp: Exponent) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[0] + e[1] + e[2]).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn eval(&self, pt: &XYZPoint) -> Rational {
        // Powers are cached per variable; exponents stay small at desk scale.
        let max = self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0) as usize;
        let powers = |base: &Rational| {
            let mut v = Vec::with_capacity(max + 1);
            v.push(Rational::one());
            for i in 0..max {
                let next = &v[i] * base;
                v.push(next);
            }
            v
        };
        let (px, py, pz) = (powers(&pt.x), powers(&pt.y), powers(&pt.z));
        self.terms
            .iter()
            .map(|(e, c)| c * &px[e[0] as usize] * &py[e[1] as usize] * &pz[e[2] as usize])
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn partial(&self, v: Var) -> Self {
        let i = v as usize;
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = *e;
            ne[i] -= 1;
            out.add_term(ne, c * int(e[i] as i64));
        }
        out
    }

    pub fn gradient(&self) -> [TriPoly; 3] {
        [self.partial(Var::X), self.partial(Var::Y), self.partial(Var::Z)]
    }

    /// Symmetric 3×3 matrix of second partials.
    pub fn hessian(&self) -> [[TriPoly; 3]; 3] {
        let g = self.gradient();
        let vars = [Var::X, Var::Y, Var::Z];
        std::array::from_fn(|i| std::array::from_fn(|j| g[i].partial(vars[j])))
    }

    /// Substitutes `X = x(Z)`, `Y = y(Z)` and keeps `Z`.
    pub fn compose_curve(&self, x: &UPoly, y: &UPoly) -> UPoly {
        let max = self.terms.keys().flat_map(|e| [e[0], e[1]]).max().unwrap_or(0) as usize;
        let powers = |base: &UPoly| {
            let mut v = vec![UPoly::constant(Rational::one())];
            for i in 0..max {
                let next = &v[i] * base;
                v.push(next);
            }
            v
        };
        let (xp, yp) = (powers(x), powers(y));
        // Group by (i, j) so each X^i Y^j product is built once, with the Z-part by Horner.
        let mut grouped: BTreeMap<(u32, u32), Vec<Rational>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = grouped.entry((e[0], e[1])).or_default();
            if v.len() <= e[2] as usize {
                v.resize(e[2] as usize + 1, Rational::zero());
            }
            v[e[2] as usize] = c.clone();
        }
        let mut out = UPoly::zero();
        for ((i, j), zc) in grouped {
            let xy = &xp[i as usize] * &yp[j as usize];
            out = &out + &(&xy * &UPoly::new(zc));
        }
        out
    }

    /// Divides by the leading coefficient (largest exponent in lexicographic
    /// order), giving a unique representative of the polynomial up to scale.
    pub fn canonical(&self) -> Self {
        match self.terms.iter().next_back() {
            Some((_, lead)) => self.scale(&lead.recip()),
            None => Self::zero(),
        }
    }

    pub fn to_entries(&self) -> Vec<TermEntry> {
        self.terms
            .iter()
            .map(|(e, c)| TermEntry(e[0], e[1], e[2], format_rational(c)))
            .collect()
    }

    pub fn from_entries(entries: &[TermEntry]) -> Result<Self, crate::exact::RationalParseError> {
        let mut p = Self::zero();
        for TermEntry(i, j, k, c) in entries {
            p.add_term([*i, *j, *k], parse_rational(c)?);
        }
        Ok(p)
    }
}

/// Wire form `[i, j, k, "coeff"]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermEntry(pub u32, pub u32, pub u32, pub String);

impl Serialize for TriPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_entries().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TriPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let entries = Vec::<TermEntry>::deserialize(d)?;
        TriPoly::from_entries(&entries).map_err(serde::de::Error::custom)
    }
}

impl Add for &TriPoly {
    type Output = TriPoly;
    fn add(self, o: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &TriPoly {
    type Output = TriPoly;
    fn sub(self, o: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Neg for &TriPoly {
    type Output = TriPoly;
    fn neg(self) -> TriPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &TriPoly {
    type Output = TriPoly;
    fn mul(self, o: &TriPoly) -> TriPoly {
        let mut out = TriPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["X", "Y", "Z"];
        let terms: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mut parts = vec![format_rational(c)];
                for (n, &k) in names.iter().zip(e) {
                    match k {
                        0 => {}
                        1 => parts.push(n.to_string()),
                        _ => parts.push(format!("{n}^{k}")),
                    }
                }
                parts.join("*")
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
