//! Randomized invariant suites behind `rotlab verify`.
//!
//! Every check is exact except the float/exact census comparison. Failures are
//! report content: the suites never panic on a violated invariant.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rotlab::census::{
    classify, has_non_collinear_triple, k_size, rotation_census, source_set, CensusOptions, Classification,
};
use rotlab::exact::{
    collinear, int, orientation, squared_distance, AntiRotation, PlanarPoint, PointSet, Rational, Rotation,
};
use rotlab::generators::{random_point, random_points, random_unit, rng_from_seed};
use rotlab::lift::{
    det3, dualize_parabola, dualize_rotation, helix_tangent, incident, is_joint_by_tangents, lift_rotation,
    parabola_from_pair, parabola_intersection, tangent_direction, z_of, HParabola, XYZPoint,
};
use rotlab::polymethod::{
    fit_degree, fit_vanishing, is_special_form, pi, vanishes_on_parabola, RealRoot, TriPoly, UPoly, Var,
};
use rotlab::surfaces::{anti_rotation_of, surface_from_rotation_line, Crossings, SpecialSurface};
use rotlab::Result as CoreResult;

use crate::fastpath::float_census;
use crate::io::CensusReport;

pub const SUITES: [&str; 6] = ["core", "lift", "census", "surfaces", "polymethod", "all"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    pub first_failure: Option<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            passed: 0,
            total: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(detail());
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.ok() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} {}/{}", self.name, self.passed, self.total)?;
        if let Some(d) = &self.first_failure {
            write!(f, " (first failure: {d})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuiteReport {
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn extend(&mut self, other: SuiteReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

pub type RotationBuilder = fn(&PlanarPoint, &PlanarPoint, &PlanarPoint, &PlanarPoint) -> CoreResult<Rotation>;

pub fn verify_suite(name: &str, cases: usize, seed: u64) -> Option<SuiteReport> {
    let mut rng = rng_from_seed(seed);
    let rep = match name {
        "core" => core_suite(rotlab::rotation_from_two_pairs, cases, &mut rng),
        "lift" => lift_suite(cases, &mut rng),
        "census" => census_suite(cases, &mut rng),
        "surfaces" => surfaces_suite(cases, &mut rng),
        "polymethod" => polymethod_suite(cases, &mut rng),
        "all" => {
            let mut all = SuiteReport::default();
            for s in &SUITES[..5] {
                all.extend(verify_suite(s, cases, seed)?);
            }
            all
        }
        _ => return None,
    };
    Some(rep)
}

const RANGE: i64 = 6;
const DENOM: i64 = 4;

fn point(rng: &mut ChaCha8Rng) -> PlanarPoint {
    random_point(rng, RANGE, DENOM)
}

/// A random rotation in the chart (tan-half-angle units never give `p = −1`).
pub fn chart_rotation(rng: &mut ChaCha8Rng) -> Rotation {
    Rotation::new(random_unit(rng, DENOM), point(rng)).expect("unit p")
}

fn distinct_pair(rng: &mut ChaCha8Rng) -> (PlanarPoint, PlanarPoint) {
    loop {
        let (a, b) = (point(rng), point(rng));
        if a != b {
            return (a, b);
        }
    }
}

/// `h_{a, τ(a)}` for a random `a` with a non-degenerate image.
fn incident_parabola(tau: &Rotation, rng: &mut ChaCha8Rng) -> (PlanarPoint, HParabola) {
    loop {
        let a = point(rng);
        if let Ok(h) = parabola_from_pair(&a, &tau.apply(&a)) {
            return (a, h);
        }
    }
}

fn random_parabola(rng: &mut ChaCha8Rng) -> HParabola {
    loop {
        if let Ok(h) = parabola_from_pair(&point(rng), &point(rng)) {
            return h;
        }
    }
}

pub fn core_suite(builder: RotationBuilder, cases: usize, rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut round_trip = Check::new("core.two_pair_round_trip");
    let mut compose = Check::new("core.composition");
    let mut distance = Check::new("core.distance_invariance");
    let mut keys = Check::new("core.key_vs_probe_dedup");
    for _ in 0..cases {
        let tau = chart_rotation(rng);
        let (a, b) = distinct_pair(rng);
        let (a2, b2) = (tau.apply(&a), tau.apply(&b));
        let built = builder(&a, &b, &a2, &b2);
        round_trip.record(
            built.as_ref().is_ok_and(|r| r.apply(&a) == a2 && r.apply(&b) == b2),
            || format!("a={a} b={b} a'={a2} b'={b2} -> {built:?}"),
        );

        let sigma = chart_rotation(rng);
        let phi = AntiRotation::new(random_unit(rng, DENOM), point(rng)).unwrap();
        let z = point(rng);
        let c = tau.compose(&sigma);
        let ca = tau.compose_anti(&phi);
        let unit = c.p().norm_sq().is_one() && ca.p().norm_sq().is_one();
        compose.record(
            unit && c.apply(&z) == tau.apply(&sigma.apply(&z)) && ca.apply(&z) == tau.apply(&phi.apply(&z)),
            || format!("tau={tau} sigma={sigma} phi={phi} z={z}"),
        );

        let d = squared_distance(&a, &b);
        distance.record(
            d == squared_distance(&tau.apply(&a), &tau.apply(&b))
                && d == squared_distance(&phi.apply(&a), &phi.apply(&b)),
            || format!("a={a} b={b}"),
        );

        // A second rotation: equal to tau half of the time, rebuilt from other pairs.
        let other = if rng.gen_bool(0.5) {
            let (c1, c2) = distinct_pair(rng);
            builder(&c1, &c2, &tau.apply(&c1), &tau.apply(&c2)).unwrap_or_else(|_| tau.clone())
        } else {
            chart_rotation(rng)
        };
        let probes = [PlanarPoint::origin(), PlanarPoint::one()];
        let by_probe = probes.iter().all(|p| tau.apply(p) == other.apply(p));
        keys.record((tau.key() == other.key()) == by_probe, || format!("{tau} vs {other}"));
    }
    SuiteReport {
        checks: vec![round_trip, compose, distance, keys],
    }
}

pub fn lift_suite(cases: usize, rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut chart = Check::new("lift.chart_consistency");
    let mut tangents = Check::new("lift.tangent_determinant_vs_collinearity");
    let mut distinct = Check::new("lift.distinct_tangents");
    let mut pairs = Check::new("lift.pairwise_intersection");
    let mut dual = Check::new("lift.duality");
    for _ in 0..cases {
        let tau = chart_rotation(rng);
        let lifted = lift_rotation(&tau).unwrap();
        let h = if rng.gen_bool(0.5) {
            incident_parabola(&tau, rng).1
        } else {
            random_parabola(rng)
        };
        let inc = incident(&tau, &h);
        chart.record(inc == h.contains_point(&lifted), || {
            format!("tau={tau} h=({}, {})", h.a(), h.b())
        });
        let plane = dualize_rotation(&tau).unwrap();
        dual.record(inc == plane.contains(&dualize_parabola(&h)), || format!("tau={tau}"));

        let (ok, detail) = tangent_instance(rng);
        tangents.record(ok, || detail);

        let (a, ha) = incident_parabola(&tau, rng);
        let (c, hc) = incident_parabola(&tau, rng);
        if a != c {
            let ta = tangent_direction(&ha, &tau).unwrap();
            let tc = tangent_direction(&hc, &tau).unwrap();
            distinct.record(ta != tc, || format!("a={a} c={c}"));
        }

        let (ok, detail) = intersection_instance(rng);
        pairs.record(ok, || detail);
    }
    SuiteReport {
        checks: vec![chart, tangents, distinct, pairs, dual],
    }
}

/// Three sources, collinear half of the time; the tangent determinant must
/// vanish exactly when they are collinear.
pub fn tangent_instance(rng: &mut ChaCha8Rng) -> (bool, String) {
    let tau = chart_rotation(rng);
    let (a, b) = distinct_pair(rng);
    let c = if rng.gen_bool(0.5) {
        let t = Rational::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=4).into());
        a.add(&b.sub(&a).scale(&t))
    } else {
        point(rng)
    };
    let m = [&a, &b, &c].map(|s| helix_tangent(s, tau.p()));
    let zero = det3(&m).is_zero();
    (
        zero == collinear(&a, &b, &c),
        format!("p={} sources {a} {b} {c}", tau.p()),
    )
}

/// `h_{a,b}`, `h_{c,d}`; `d = τ(c)` for the rotation through `h_{a,b}` half of
/// the time.
pub fn intersection_instance(rng: &mut ChaCha8Rng) -> (bool, String) {
    let tau = chart_rotation(rng);
    let (a, h1) = incident_parabola(&tau, rng);
    let h2 = if rng.gen_bool(0.5) {
        incident_parabola(&tau, rng).1
    } else {
        random_parabola(rng)
    };
    if h1 == h2 {
        return (true, String::new());
    }
    let (c, d) = (h2.a(), h2.b());
    let b = h1.b();
    let expect = &a != c && squared_distance(&a, c) == squared_distance(b, d);
    let got = parabola_intersection(&h1, &h2).unwrap();
    let ok = match &got {
        None => !expect,
        Some(r) => expect && incident(r, &h1) && incident(r, &h2),
    };
    (ok, format!("h1=({a}, {b}) h2=({c}, {d}) got {got:?}"))
}

pub fn census_suite(cases: usize, rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut identity = Check::new("census.quadruple_identity");
    let mut lower = Check::new("census.quadruple_lower_bound");
    let mut oracle = Check::new("census.multiplicity_oracle");
    let mut agree = Check::new("census.classification_vs_tangents");
    let mut determinism = Check::new("census.worker_determinism");
    let mut float = Check::new("census.float_exact_agreement");
    for _ in 0..cases {
        let s = rng.gen_range(3..=10);
        let set = random_points(s, rng.gen(), 3, 2).expect("enough room");
        let c = rotation_census(&set, CensusOptions::default()).unwrap();
        identity.record(c.quadruple_total() == k_size(&set), || format!("s={s}"));
        let x = c.x as u64;
        let ss = (s * (s - 1)) as u64;
        let lhs = Rational::from_integer(c.k_size.into());
        let rhs = Rational::new(((ss - x) * (ss - x)).into(), x.into());
        lower.record(x == 0 || lhs >= rhs, || format!("K={} x={x}", c.k_size));
        oracle.record(c.multiplicity_mismatches(&set).is_empty(), || format!("s={s}"));
        for (rot, e) in c
            .entries
            .iter()
            .filter(|(r, e)| e.multiplicity >= 3 && !r.is_half_turn())
        {
            let src = source_set(rot, &set);
            let by_tangent = is_joint_by_tangents(rot.p(), &src);
            agree.record(by_tangent == (e.classification == Classification::Joint), || {
                format!("{rot}")
            });
        }
        let c3 = rotation_census(
            &set,
            CensusOptions {
                include_identity: false,
                workers: Some(3),
            },
        )
        .unwrap();
        determinism.record(c3 == c, || format!("s={s}"));
        let f = float_census(&set, false);
        let e = CensusReport::from_census(&c);
        float.record(
            f.nk == e.nk && f.joints == e.joints && f.flats == e.flats && f.k == e.k,
            || format!("s={s}: float {:?} exact {:?}", f.nk, e.nk),
        );
    }
    SuiteReport {
        checks: vec![identity, lower, oracle, agree, determinism, float],
    }
}

/// A surface from a random chart rotation, source and direction.
pub fn random_surface(rng: &mut ChaCha8Rng) -> SpecialSurface {
    loop {
        let tau = chart_rotation(rng);
        let a = point(rng);
        let d = point(rng);
        if let Ok(s) = surface_from_rotation_line(&tau, &a, &d) {
            return s;
        }
    }
}

/// Exact identities of one surface; `None` when all hold, else the first
/// violated one.
pub fn surface_identities(sigma: &SpecialSurface, rng: &mut ChaCha8Rng, probes: usize) -> Option<String> {
    let pv = sigma.provenance().expect("constructed surface");
    let z0 = z_of(&pv.tau0).unwrap();
    let (q1, q2) = sigma.family_quadratics().unwrap();
    if !q1.eval(&z0).is_zero() || !q2.eval(&z0).is_zero() {
        return Some("Q1(Z0) or Q2(Z0) nonzero".into());
    }
    let endpoint = sigma.e1().eval(&z0) * &pv.d_img.x + sigma.e2().eval(&z0) * &pv.d_img.y;
    if !endpoint.is_zero() {
        return Some("E1(Z0)*d'1 + E2(Z0)*d'2 nonzero".into());
    }
    let (_, rem) = sigma.free().div_rem(&UPoly::from_ints(&[1, 0, 1]));
    if !rem.is_zero() {
        return Some("free term not divisible by Z^2+1".into());
    }
    if !sigma.eval(&lift_rotation(&pv.tau0).unwrap()).is_zero() {
        return Some("base rotation off the surface".into());
    }
    for t in -2..=2 {
        match sigma.family_parabola(&int(t)).unwrap() {
            Ok(h) if !sigma.contains_parabola(&h) => return Some(format!("family member t={t} not contained")),
            _ => {}
        }
    }
    let phi = anti_rotation_of(sigma);
    for _ in 0..probes {
        let c = point(rng);
        let e = phi.apply(&c);
        if let Ok(h) = parabola_from_pair(&c, &e) {
            if !sigma.contains_parabola(&h) {
                return Some(format!("phi({c}) = {e} but h not contained"));
            }
        }
        let (c, e) = (point(rng), point(rng));
        if let Ok(h) = parabola_from_pair(&c, &e) {
            if sigma.contains_parabola(&h) != (phi.apply(&c) == e) {
                return Some(format!("containment of h({c}, {e}) disagrees with phi"));
            }
        }
    }
    None
}

/// A parabola not on `sigma`, crossing it at a known rational `Z` half of the
/// time.
pub fn crossing_parabola(sigma: &SpecialSurface, rng: &mut ChaCha8Rng) -> HParabola {
    loop {
        let h = if rng.gen_bool(0.5) {
            let t = int(rng.gen_range(-3..=3));
            let fam = match sigma.family_parabola(&t).unwrap() {
                Ok(h) => h,
                Err(_) => continue,
            };
            let z = Rational::new(rng.gen_range(-6..=6).into(), rng.gen_range(1..=3).into());
            let on = rotlab::lift::unlift(&fam.point_at(&z));
            incident_parabola(&on, rng).1
        } else {
            random_parabola(rng)
        };
        if !sigma.contains_parabola(&h) {
            return h;
        }
    }
}

/// At most three roots, each exact root a common point.
pub fn crossing_instance(sigma: &SpecialSurface, h: &HParabola) -> (bool, String) {
    match sigma.crossings(h) {
        Crossings::Contained => (false, "reported contained".into()),
        Crossings::Roots(roots) => {
            let ok = roots.len() <= 3
                && roots.iter().filter_map(RealRoot::as_exact).all(|z| {
                    let pt = h.point_at(z);
                    sigma.eval(&pt).is_zero() && h.contains_point(&pt)
                });
            (ok, format!("h=({}, {}) roots {roots:?}", h.a(), h.b()))
        }
    }
}

pub fn surfaces_suite(cases: usize, rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut ids = Check::new("surfaces.identities");
    let mut mutual = Check::new("surfaces.mutual_intersection");
    let mut orient = Check::new("surfaces.opposite_orientation");
    let mut cross = Check::new("surfaces.crossing_bound");
    let mut special = Check::new("surfaces.special_form_round_trip");
    for _ in 0..cases {
        let sigma = random_surface(rng);
        let failure = surface_identities(&sigma, rng, 20);
        ids.record(failure.is_none(), || failure.unwrap_or_default());

        let fam: Vec<HParabola> = [-1, 2]
            .iter()
            .filter_map(|&t| sigma.family_parabola(&int(t)).unwrap().ok())
            .collect();
        if fam.len() == 2 {
            let r = parabola_intersection(&fam[0], &fam[1]).unwrap();
            mutual.record(
                r.as_ref().is_some_and(|r| incident(r, &fam[0]) && incident(r, &fam[1])),
                || "family members do not meet".into(),
            );
        }

        let phi = anti_rotation_of(&sigma);
        let tri = [point(rng), point(rng), point(rng)];
        let img = tri.clone().map(|p| phi.apply(&p));
        let o1 = orientation(&tri[0], &tri[1], &tri[2]);
        let o2 = orientation(&img[0], &img[1], &img[2]);
        let congruent = (0..3)
            .all(|i| squared_distance(&tri[i], &tri[(i + 1) % 3]) == squared_distance(&img[i], &img[(i + 1) % 3]));
        orient.record(congruent && o1 == -o2, || format!("{tri:?}"));

        let h = crossing_parabola(&sigma, rng);
        let (ok, detail) = crossing_instance(&sigma, &h);
        cross.record(ok, || detail);

        let form = is_special_form(&sigma.polynomial());
        special.record(form.is_some_and(|f| &f.lam * sigma.mu() == &f.mu * sigma.lam()), || {
            "special form not recognized".into()
        });
    }
    SuiteReport {
        checks: vec![ids, mutual, orient, cross, special],
    }
}

fn random_xyz(rng: &mut ChaCha8Rng) -> XYZPoint {
    let mut r = || Rational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=3).into());
    XYZPoint::new(r(), r(), r())
}

fn random_poly(rng: &mut ChaCha8Rng, degree: u32, terms: usize) -> TriPoly {
    let mut p = TriPoly::zero();
    while p.is_zero() {
        for _ in 0..terms {
            let i = rng.gen_range(0..=degree);
            let j = rng.gen_range(0..=degree - i);
            let k = rng.gen_range(0..=degree - i - j);
            p.add_term([i, j, k], int(rng.gen_range(-5..=5)));
        }
    }
    p
}

/// Fit soundness on `m` random points; `None` when sound.
pub fn fit_instance(rng: &mut ChaCha8Rng, m: usize) -> Option<String> {
    let mut pts: Vec<XYZPoint> = Vec::new();
    while pts.len() < m {
        let p = random_xyz(rng);
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let p = fit_vanishing(&pts).ok()?;
    let d = p.degree();
    if p.is_zero() || d.is_none_or(|d| d as usize > fit_degree(m)) {
        return Some(format!("m={m}: degree {d:?} exceeds bound {}", fit_degree(m)));
    }
    if !pts.iter().all(|q| p.eval(q).is_zero()) {
        return Some(format!("m={m}: fit does not vanish on inputs"));
    }
    pi_degree_violation(&p)
}

/// `deg Π(p) ≤ 3·deg(p) − 4` for `deg p ≥ 2`.
pub fn pi_degree_violation(p: &TriPoly) -> Option<String> {
    let d = p.degree()?;
    if d < 2 {
        return None;
    }
    match pi(p).degree() {
        Some(e) if e + 4 > 3 * d => Some(format!("deg Pi = {e} for deg p = {d}")),
        _ => None,
    }
}

/// A flat rotation through three collinear sources, `p` fitted on nine
/// points of each of the three parabolas. Returns the violated property.
pub fn flat_instance(rng: &mut ChaCha8Rng) -> Option<String> {
    let tau = chart_rotation(rng);
    let z0 = z_of(&tau).unwrap();
    let hs = loop {
        let a = point(rng);
        let d = point(rng);
        if d.is_zero() {
            continue;
        }
        let srcs = [a.clone(), a.add(&d), a.add(&d.scale(&int(2)))];
        let hs: Vec<_> = srcs
            .iter()
            .filter_map(|s| parabola_from_pair(s, &tau.apply(s)).ok())
            .collect();
        if hs.len() == 3 {
            break hs;
        }
    };
    let mut pts = Vec::new();
    for h in &hs {
        let mut z = z0.clone();
        for _ in 0..9 {
            z += Rational::new(1.into(), rng.gen_range(1..=3).into());
            pts.push(h.point_at(&z));
        }
    }
    pts.sort();
    pts.dedup();
    let p = fit_vanishing(&pts).ok()?;
    let d = p.degree().unwrap_or(0) as usize;
    if !hs.iter().all(|h| vanishes_on_parabola(&p, h)) {
        return Some(format!("fit of degree {d} does not vanish on all three parabolas"));
    }
    let lifted = lift_rotation(&tau).unwrap();
    if !pi(&p).eval(&lifted).is_zero() {
        return Some(format!("Pi(p)(tau) nonzero at {tau}"));
    }
    pi_degree_violation(&p)
}

/// `Π(f·g)(τ) = g(τ)³·Π(f)(τ)` at a point of `{f = 0}` with `f` linear.
pub fn product_rule_instance(rng: &mut ChaCha8Rng) -> Option<String> {
    let coef = |rng: &mut ChaCha8Rng| int(rng.gen_range(-6..=6));
    let (mut al, be, ga, de) = (coef(rng), coef(rng), coef(rng), coef(rng));
    if al.is_zero() {
        al = Rational::one();
    }
    let f = TriPoly::from_terms([
        ([1, 0, 0], al.clone()),
        ([0, 1, 0], be.clone()),
        ([0, 0, 1], ga.clone()),
        ([0, 0, 0], de.clone()),
    ]);
    let g = random_poly(rng, 3, 5);
    let pt = random_xyz(rng);
    let x = -(&be * &pt.y + &ga * &pt.z + &de) / &al;
    let tau = XYZPoint::new(x, pt.y, pt.z);
    debug_assert!(f.eval(&tau).is_zero());
    let lhs = pi(&(&f * &g)).eval(&tau);
    let gv = g.eval(&tau);
    let rhs = &gv * &gv * &gv * pi(&f).eval(&tau);
    if lhs != rhs {
        return Some(format!("f={f} g={g}"));
    }
    pi_degree_violation(&(&f * &g))
}

pub fn polymethod_suite(cases: usize, rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut fit = Check::new("polymethod.fit_soundness");
    let mut rule = Check::new("polymethod.two_d_plus_one");
    let mut product = Check::new("polymethod.product_rule");
    let mut surface_pi = Check::new("polymethod.pi_of_special_polynomial");
    let mut flat = Check::new("polymethod.flat_rotation_pi");
    let mut partial_deg = Check::new("polymethod.partial_degree");
    for i in 0..cases {
        let m = rng.gen_range(1..=35);
        let failure = fit_instance(rng, m);
        fit.record(failure.is_none(), || failure.unwrap_or_default());

        let h = random_parabola(rng);
        let m = rng.gen_range(3..=25);
        let on_h: Vec<XYZPoint> = (0..m).map(|z| h.point_at(&int(z as i64 - 3))).collect();
        // Vanishing at 2d+1 points of h forces vanishing on all of h.
        match fit_vanishing(&on_h) {
            Ok(q) => {
                let d = q.degree().unwrap_or(0) as usize;
                rule.record(2 * d + 1 > m || vanishes_on_parabola(&q, &h), || format!("m={m} p={q}"));
            }
            Err(e) => rule.record(false, || e.to_string()),
        }
        let p = random_poly(rng, 3, 6);

        let failure = product_rule_instance(rng);
        product.record(failure.is_none(), || failure.unwrap_or_default());

        let sigma = random_surface(rng);
        surface_pi.record(pi(&sigma.polynomial()).is_zero(), || {
            "Pi of special polynomial nonzero".into()
        });

        for v in [Var::X, Var::Y, Var::Z] {
            let dp = p.partial(v);
            partial_deg.record(dp.degree().is_none_or(|e| e < p.degree().unwrap()), || format!("p={p}"));
        }

        // The flat construction fits 27 points; run it on a share of the cases.
        if i % 4 == 0 {
            let failure = flat_instance(rng);
            flat.record(failure.is_none(), || failure.unwrap_or_default());
        }
    }
    SuiteReport {
        checks: vec![fit, rule, product, surface_pi, flat, partial_deg],
    }
}

/// Joint iff some non-degenerate triangle of sources exists; shared by the
/// classification check.
pub fn classify_by_sources(tau: &Rotation, s: &PointSet) -> Classification {
    let src = source_set(tau, s);
    if src.len() < 3 {
        Classification::Low
    } else if has_non_collinear_triple(&src) {
        Classification::Joint
    } else {
        Classification::Flat
    }
}

/// Whether `classify` and the tangent test agree for `tau`.
pub fn classification_agrees(tau: &Rotation, s: &PointSet) -> bool {
    let c = classify(tau, s);
    if c == Classification::Low || tau.is_half_turn() {
        return true;
    }
    is_joint_by_tangents(tau.p(), &source_set(tau, s)) == (c == Classification::Joint)
}
