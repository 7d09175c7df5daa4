//! Polynomial toolkit in the chart variables: vanishing fits, critical and
//! flat points, the flatness operator `Π`, and recognition of special
//! polynomials.
//!
//! Flatness tests presuppose a generic coordinate frame. Frames supplied by
//! the caller are not checked; see `generators::generic_reframe`.

pub mod linalg;
pub mod tripoly;
pub mod upoly;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, Rational};
use crate::lift::{chart_coefficients, HParabola, XYZPoint};
pub use tripoly::{Exponent, TermEntry, TriPoly, Var};
pub use upoly::{RealRoot, UPoly};

/// Largest point count accepted by [`fit_vanishing`].
pub const FIT_CAPACITY: usize = 120;

fn binom3(d: usize) -> usize {
    (d + 3) * (d + 2) * (d + 1) / 6
}

/// Least `d` with `C(d+3, 3) > m`: the smallest degree guaranteed to admit a
/// nonzero polynomial through `m` points.
pub fn fit_degree(m: usize) -> usize {
    (0..).find(|&d| binom3(d) > m).unwrap()
}

/// Every exponent of total degree at most `d`, graded then lexicographic.
pub fn monomials(d: usize) -> Vec<Exponent> {
    let d = d as u32;
    let mut out = Vec::new();
    for total in 0..=d {
        for i in (0..=total).rev() {
            for j in (0..=total - i).rev() {
                out.push([i, j, total - i - j]);
            }
        }
    }
    out
}

/// A nonzero polynomial of degree at most [`fit_degree`] vanishing on every
/// point, from an exact nullspace vector of the evaluation matrix.
pub fn fit_vanishing(points: &[XYZPoint]) -> Result<TriPoly> {
    if points.len() > FIT_CAPACITY {
        return Err(Error::CapacityExceeded {
            max: FIT_CAPACITY,
            got: points.len(),
        });
    }
    let d = fit_degree(points.len());
    let mons = monomials(d);
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|pt| mons.iter().map(|e| monomial_value(e, pt)).collect())
        .collect();
    let v = linalg::nullspace_vector(&rows, mons.len()).expect("more monomials than points leaves a nontrivial kernel");
    Ok(TriPoly::from_terms(mons.into_iter().zip(v)))
}

fn monomial_value(e: &Exponent, pt: &XYZPoint) -> Rational {
    pow(&pt.x, e[0]) * pow(&pt.y, e[1]) * pow(&pt.z, e[2])
}

fn pow(r: &Rational, k: u32) -> Rational {
    num_traits::pow(r.clone(), k as usize)
}

/// `p(X(Z), Y(Z), Z)` along the parabola.
pub fn restrict_to_parabola(p: &TriPoly, h: &HParabola) -> UPoly {
    p.compose_curve(&h.x_poly(), &h.y_poly())
}

pub fn vanishes_on_parabola(p: &TriPoly, h: &HParabola) -> bool {
    restrict_to_parabola(p, h).is_zero()
}

/// `Π(p) = p_Y² p_XX − 2 p_X p_Y p_XY + p_X² p_YY`
pub fn pi(p: &TriPoly) -> TriPoly {
    let px = p.partial(Var::X);
    let py = p.partial(Var::Y);
    let pxx = px.partial(Var::X);
    let pxy = px.partial(Var::Y);
    let pyy = py.partial(Var::Y);
    let t1 = &(&py * &py) * &pxx;
    let t2 = &(&(&px * &py) * &pxy).scale(&int(2));
    let t3 = &(&px * &px) * &pyy;
    &(&t1 - t2) + &t3
}

pub fn is_critical_point(p: &TriPoly, pt: &XYZPoint) -> bool {
    p.eval(pt).is_zero() && p.gradient().iter().all(|g| g.eval(pt).is_zero())
}

/// `p` and all of its first partials vanish identically along `h`.
pub fn is_critical_parabola(p: &TriPoly, h: &HParabola) -> bool {
    vanishes_on_parabola(p, h) && p.gradient().iter().all(|g| vanishes_on_parabola(g, h))
}

pub fn is_flat_parabola(p: &TriPoly, h: &HParabola) -> bool {
    vanishes_on_parabola(&pi(p), h)
}

/// Decomposition of a special polynomial
/// `E₂(Z)X − E₁(Z)Y + (E₁Q₄ − E₂Q₃)(Z)` with `E₁ = λZ + μ`, `E₂ = μZ − λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialForm {
    pub lam: Rational,
    pub mu: Rational,
    /// `Q₃`, written `[c₂, c₁, c₀]`.
    pub q3: [Rational; 3],
    pub q4: [Rational; 3],
}

pub fn e1(lam: &Rational, mu: &Rational) -> UPoly {
    UPoly::new(vec![mu.clone(), lam.clone()])
}

pub fn e2(lam: &Rational, mu: &Rational) -> UPoly {
    UPoly::new(vec![-lam, mu.clone()])
}

/// `E₁Q₄ − E₂Q₃` for the chart quadratics of the pair `(a, b)`.
pub fn special_free_term(lam: &Rational, mu: &Rational, q3: &[Rational; 3], q4: &[Rational; 3]) -> UPoly {
    &(&e1(lam, mu) * &UPoly::quadratic(q4)) - &(&e2(lam, mu) * &UPoly::quadratic(q3))
}

/// Recognizes a special polynomial. The free term is matched by solving for
/// the pair `(a, b)` whose chart quadratics produce it.
pub fn is_special_form(p: &TriPoly) -> Option<SpecialForm> {
    let mut xpart = vec![Rational::zero(); 2];
    let mut ypart = vec![Rational::zero(); 2];
    let mut free = vec![Rational::zero(); 4];
    for (e, c) in p.terms() {
        let k = e[2] as usize;
        match (e[0], e[1]) {
            (1, 0) if k < 2 => xpart[k] = c.clone(),
            (0, 1) if k < 2 => ypart[k] = c.clone(),
            (0, 0) if k < 4 => free[k] = c.clone(),
            _ => return None,
        }
    }
    // X coefficient is μZ − λ; Y coefficient is −(λZ + μ).
    let mu = xpart[1].clone();
    let lam = -&xpart[0];
    if lam.is_zero() && mu.is_zero() {
        return None;
    }
    if ypart[1] != -&lam || ypart[0] != -&mu {
        return None;
    }
    // The free term is linear in (a₁, a₂, b₁, b₂); build its columns.
    let basis = |i: usize| {
        let mut v = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
        v[i] = Rational::one();
        let a = crate::exact::PlanarPoint::new(v[0].clone(), v[1].clone());
        let b = crate::exact::PlanarPoint::new(v[2].clone(), v[3].clone());
        let (q3, q4) = chart_coefficients(&a, &b);
        special_free_term(&lam, &mu, &q3, &q4)
    };
    let cols: Vec<UPoly> = (0..4).map(basis).collect();
    let m: Vec<Vec<Rational>> = (0..4).map(|k| cols.iter().map(|c| c.coeff(k)).collect()).collect();
    let sol = linalg::solve(&m, &free)?;
    let a = crate::exact::PlanarPoint::new(sol[0].clone(), sol[1].clone());
    let b = crate::exact::PlanarPoint::new(sol[2].clone(), sol[3].clone());
    let (q3, q4) = chart_coefficients(&a, &b);
    Some(SpecialForm { lam, mu, q3, q4 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::PlanarPoint;
    use crate::lift::parabola_from_pair;

    fn x() -> TriPoly {
        TriPoly::var(Var::X)
    }
    fn y() -> TriPoly {
        TriPoly::var(Var::Y)
    }
    fn z() -> TriPoly {
        TriPoly::var(Var::Z)
    }
    fn c(v: i64) -> TriPoly {
        TriPoly::constant(int(v))
    }
    fn pt(a: i64, b: i64, c: i64) -> XYZPoint {
        XYZPoint::new(int(a), int(b), int(c))
    }
    fn h(a: (i64, i64), b: (i64, i64)) -> HParabola {
        parabola_from_pair(&PlanarPoint::from_ints(a.0, a.1), &PlanarPoint::from_ints(b.0, b.1)).unwrap()
    }
    /// (Z−1)X − (Z+1)Y
    fn quarter_surface() -> TriPoly {
        &(&(&z() - &c(1)) * &x()) - &(&(&z() + &c(1)) * &y())
    }

    #[test]
    fn fit_degree_thresholds() {
        assert_eq!(fit_degree(0), 0);
        assert_eq!(fit_degree(1), 1);
        assert_eq!(fit_degree(3), 1);
        assert_eq!(fit_degree(4), 2);
        assert_eq!(fit_degree(27), 4);
        assert_eq!(fit_degree(119), 7);
        assert_eq!(monomials(2).len(), 10);
    }

    #[test]
    fn fit_single_point_and_four() {
        let p = fit_vanishing(&[pt(0, 0, 0)]).unwrap();
        assert!(!p.is_zero() && p.degree().unwrap() <= 1);
        assert!(p.eval(&pt(0, 0, 0)).is_zero());
        let pts = [pt(1, 2, 3), pt(-1, 0, 2), pt(4, 4, -1), pt(0, 5, 7)];
        let p = fit_vanishing(&pts).unwrap();
        assert!(p.degree().unwrap() <= 2);
        assert!(pts.iter().all(|q| p.eval(q).is_zero()));
    }

    #[test]
    fn fit_on_parabola_vanishes_identically() {
        let hp = h((1, 2), (3, -1));
        let pts: Vec<XYZPoint> = (0..9).map(|t| hp.point_at(&int(t - 4))).collect();
        let p = fit_vanishing(&pts).unwrap();
        let d = p.degree().unwrap() as usize;
        assert!(fit_degree(9) >= 2 && 9 > 2 * fit_degree(9) && d <= 2);
        assert!(vanishes_on_parabola(&p, &hp));
    }

    #[test]
    fn fit_capacity() {
        let pts: Vec<XYZPoint> = (0..121).map(|i| pt(i, 0, 0)).collect();
        assert_eq!(fit_vanishing(&pts), Err(Error::CapacityExceeded { max: 120, got: 121 }));
    }

    #[test]
    fn vanishing_examples() {
        let hp = h((0, 0), (1, 0));
        assert!(vanishes_on_parabola(&y(), &hp));
        assert!(!vanishes_on_parabola(&x(), &hp));
        assert!(vanishes_on_parabola(&quarter_surface(), &h((1, 0), (0, 1))));
    }

    #[test]
    fn pi_examples() {
        assert!(pi(&quarter_surface()).is_zero());
        let sphere = &(&(&(&x() * &x()) + &(&y() * &y())) + &(&z() * &z())) - &c(1);
        assert_eq!(pi(&sphere), (&(&x() * &x()) + &(&y() * &y())).scale(&int(8)));
        let xyz = &(&x() * &y()) * &z();
        let expect = (&(&(&x() * &y()) * &z()) * &(&z() * &z())).scale(&int(-2));
        assert_eq!(pi(&xyz), expect);
    }

    #[test]
    fn critical_examples() {
        let q = &(&(&x() * &x()) + &(&y() * &y())) + &(&z() * &z());
        assert!(is_critical_point(&q, &pt(0, 0, 0)));
        let hp = h((0, 0), (1, 0));
        assert!(is_critical_parabola(&(&y() * &y()), &hp));
        assert!(vanishes_on_parabola(&y(), &hp));
        assert!(!is_critical_parabola(&y(), &hp));
    }

    #[test]
    fn flat_examples() {
        assert!(is_flat_parabola(&quarter_surface(), &h((1, 0), (0, 1))));
        let sphere = &(&(&(&x() * &x()) + &(&y() * &y())) + &(&z() * &z())) - &c(1);
        assert!(!is_flat_parabola(&sphere, &h((0, 0), (1, 0))));
        assert!(is_flat_parabola(&(&y() * &y()), &h((0, 0), (1, 0))));
    }

    #[test]
    fn special_form_examples() {
        let f = is_special_form(&quarter_surface()).unwrap();
        assert_eq!((f.lam.clone(), f.mu.clone()), (int(1), int(1)));
        assert!(special_free_term(&f.lam, &f.mu, &f.q3, &f.q4).is_zero());
        assert!(is_special_form(&x()).is_none());
        assert!(is_special_form(&(&(&z() * &z()) * &z())).is_none());
    }

    #[test]
    fn special_form_rejects_free_term_not_divisible() {
        // Free term Z³ cannot be E₁Q₄ − E₂Q₃, which is always a multiple of Z²+1.
        let p = &quarter_surface() + &(&(&z() * &z()) * &z());
        assert!(is_special_form(&p).is_none());
    }
}
