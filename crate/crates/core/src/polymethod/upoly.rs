//! Univariate polynomials over the rationals and Sturm-sequence root isolation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{format_rational, int, Rational};

/// Dense polynomial, coefficients from the constant term upwards. Trailing
/// zeros are never stored, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// From `[c₂, c₁, c₀]`, the order the chart coefficients are written in.
    pub fn quadratic(desc: &[Rational; 3]) -> Self {
        Self::new(vec![desc[2].clone(), desc[1].clone(), desc[0].clone()])
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `Z`.
    pub fn var() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * z + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let c = &rem[i] / &lead;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] -= &c * dc;
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (UPoly::new(quot), UPoly::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self / gcd(self, self')`: same roots, all simple.
    pub fn square_free(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Integer multiple with coprime integer coefficients and positive leading term.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -1 } else { 1 };
        for c in &mut ints {
            *c = &*c / &g * sign;
        }
        ints
    }

    /// Compose `self(inner(Z))` by Horner's rule.
    pub fn compose(&self, inner: &UPoly) -> UPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(UPoly::zero(), |acc, c| &(&acc * inner) + &UPoly::constant(c.clone()))
    }

    /// Sturm chain `f, f', −rem(f, f'), …`.
    pub fn sturm_sequence(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone()];
        if self.is_zero() {
            return seq;
        }
        let mut prev = self.clone();
        let mut cur = self.derivative();
        while !cur.is_zero() {
            let r = prev.div_rem(&cur).1;
            seq.push(cur.clone());
            prev = cur;
            cur = -&r;
        }
        seq
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        let seq = self.square_free().sturm_sequence();
        let bound = self.root_bound();
        sign_changes(&seq, &-&bound) - sign_changes(&seq, &bound)
    }

    /// A bound `B` with every real root in `(−B, B)` (Cauchy).
    pub fn root_bound(&self) -> Rational {
        let Some(lead) = self.leading() else {
            return Rational::one();
        };
        let lead = lead.abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        max + int(1)
    }

    /// All distinct real roots in increasing order. Rational roots are found
    /// exactly; each irrational root is returned with an isolating interval
    /// `(lo, hi)` containing no other root.
    pub fn real_roots(&self) -> Vec<RealRoot> {
        assert!(!self.is_zero(), "the zero polynomial has every number as a root");
        let f = self.square_free();
        if f.degree() == Some(0) {
            return Vec::new();
        }
        let seq = f.sturm_sequence();
        let bound = f.root_bound();
        let mut out = Vec::new();
        isolate(&f, &seq, -&bound, bound, &mut out);
        let lead_int = f.primitive_integer().last().cloned().unwrap();
        out.into_iter()
            .map(|r| match r {
                RealRoot::Isolated { lo, hi } => resolve_rational(&f, &seq, lo, hi, &lead_int),
                exact => exact,
            })
            .collect()
    }
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign variations of the chain evaluated at `x`, zeros skipped.
pub fn sign_changes(seq: &[UPoly], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in seq {
        let s = sign_of(&p.eval(x));
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealRoot {
    Exact(Rational),
    /// Exactly one root, irrational, lies in the open interval.
    Isolated {
        lo: Rational,
        hi: Rational,
    },
}

impl RealRoot {
    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            RealRoot::Exact(r) => Some(r),
            RealRoot::Isolated { .. } => None,
        }
    }
}

impl fmt::Display for RealRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealRoot::Exact(r) => write!(f, "{}", format_rational(r)),
            RealRoot::Isolated { lo, hi } => {
                write!(f, "({}, {})", format_rational(lo), format_rational(hi))
            }
        }
    }
}

/// Roots of the square-free `f` in `(lo, hi]`.
fn isolate(f: &UPoly, seq: &[UPoly], lo: Rational, hi: Rational, out: &mut Vec<RealRoot>) {
    let n = sign_changes(seq, &lo) - sign_changes(seq, &hi);
    if n == 0 {
        return;
    }
    if n == 1 {
        if f.eval(&hi).is_zero() {
            out.push(RealRoot::Exact(hi));
        } else {
            out.push(RealRoot::Isolated { lo, hi });
        }
        return;
    }
    let mid = (&lo + &hi) / int(2);
    isolate(f, seq, lo, mid.clone(), out);
    isolate(f, seq, mid, hi, out);
}

/// A rational root `p/q` of an integer polynomial has `q | lead`; two such
/// fractions differ by at least `1/lead²`, so once the interval is narrower
/// than that, the simplest fraction inside is the only rational candidate.
fn resolve_rational(f: &UPoly, seq: &[UPoly], mut lo: Rational, mut hi: Rational, lead: &BigInt) -> RealRoot {
    let l = Rational::from_integer(lead.abs());
    let width = (&l * &l * int(2)).recip();
    while &hi - &lo >= width {
        let mid = (&lo + &hi) / int(2);
        if f.eval(&mid).is_zero() {
            return RealRoot::Exact(mid);
        }
        if sign_changes(seq, &lo) - sign_changes(seq, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let candidate = simplest_between(&lo, &hi);
    if f.eval(&candidate).is_zero() {
        RealRoot::Exact(candidate)
    } else {
        RealRoot::Isolated { lo, hi }
    }
}

/// The fraction with the smallest denominator in the open interval `(lo, hi)`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "empty interval");
    if lo.is_negative() && hi.is_positive() {
        return Rational::zero();
    }
    if !hi.is_positive() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    let next = &fl + int(1);
    if next < *hi {
        return next;
    }
    // Both ends share the integer part: continue on reciprocals of the fractional parts.
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    let inner = if lo_frac.is_zero() {
        hi_frac.recip().floor() + int(1)
    } else {
        simplest_between(&hi_frac.recip(), &lo_frac.recip())
    };
    fl + inner.recip()
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rational(c),
                1 => format!("{}*Z", format_rational(c)),
                _ => format!("{}*Z^{}", format_rational(c), i),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
