//! Expansion of split rational functions into local fields at the places of
//! explicit models — the projective line, and the surface charts along the
//! curve `{y = 0}` in the plane or through the origin — plus verification
//! harnesses for the Weil and Parshin reciprocity laws.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::field::{Fp, PrimeField};
use crate::series::{LaurentSeries, SeriesError, TwoLocalElement};
use crate::symbols::{self, SymbolsError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("unsupported factor: {0}")]
    UnsupportedFactor(String),
    #[error("precision unstable: {0}")]
    Unstable(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Symbols(#[from] SymbolsError),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
}

/// Split rational function on the line: `c * prod (t - a_i)^{e_i}` with all
/// roots in the prime field.
#[derive(Debug, Clone)]
pub struct RationalFn1 {
    field: PrimeField,
    constant: Fp,
    factors: Vec<(Fp, i64)>,
}

impl RationalFn1 {
    pub fn new(field: PrimeField, constant: Fp, factors: Vec<(Fp, i64)>) -> Result<Self, GeomError> {
        if field.is_zero(constant) {
            return Err(GeomError::UnsupportedFactor("zero constant".into()));
        }
        let mut seen = BTreeSet::new();
        for &(a, e) in &factors {
            if e == 0 {
                return Err(GeomError::UnsupportedFactor("zero exponent".into()));
            }
            if !seen.insert(a.0) {
                return Err(GeomError::UnsupportedFactor(format!("repeated root {a}")));
            }
        }
        Ok(RationalFn1 { field, constant, factors })
    }

    pub fn constant(field: PrimeField, c: Fp) -> Result<Self, GeomError> {
        Self::new(field, c, vec![])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn factors(&self) -> &[(Fp, i64)] {
        &self.factors
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    /// Laurent expansion in the local parameter at a finite point or at
    /// infinity (`None`), to `rel` guaranteed terms.
    pub fn expand(&self, point: Option<Fp>, rel: i64) -> Result<LaurentSeries, GeomError> {
        let k = self.field;
        let mut acc = LaurentSeries::monomial(k, self.constant, 0);
        match point {
            Some(a) => {
                // t = u + a: each factor becomes (a - a_i) + u.
                for &(root, e) in &self.factors {
                    let f = LaurentSeries::exact(k, &[(0, k.sub(a, root).0 as i64), (1, 1)]);
                    acc = acc.mul(&f.pow(e, rel)?);
                }
            }
            None => {
                // t = 1/u: each factor becomes u^{-1} (1 - a_i u).
                for &(root, e) in &self.factors {
                    let f = LaurentSeries::exact(k, &[(-1, 1), (0, k.neg(root).0 as i64)]);
                    acc = acc.mul(&f.pow(e, rel)?);
                }
            }
        }
        Ok(acc.truncate_rel(rel))
    }
}

impl std::fmt::Display for RationalFn1 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.constant)?;
        for &(a, e) in &self.factors {
            write!(f, "*(t-{a})^{e}")?;
        }
        Ok(())
    }
}

/// Affine-linear form `alpha + beta x + gamma y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearForm {
    pub alpha: Fp,
    pub beta: Fp,
    pub gamma: Fp,
}

impl LinearForm {
    pub fn is_constant(&self) -> bool {
        self.beta.0 == 0 && self.gamma.0 == 0
    }

    pub fn is_homogeneous(&self) -> bool {
        self.alpha.0 == 0
    }

    fn proportional(&self, other: &LinearForm, k: PrimeField) -> bool {
        let a = [self.alpha, self.beta, self.gamma];
        let b = [other.alpha, other.beta, other.gamma];
        for i in 0..3 {
            if !k.is_zero(a[i]) && !k.is_zero(b[i]) {
                let r = k.div(b[i], a[i]).expect("nonzero");
                return (0..3).all(|j| k.mul(a[j], r) == b[j]);
            }
            if k.is_zero(a[i]) != k.is_zero(b[i]) {
                return false;
            }
        }
        true
    }
}

impl std::fmt::Display for LinearForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({} + {}x + {}y)", self.alpha, self.beta, self.gamma)
    }
}

/// Split rational function on the plane: `c * prod l_i^{e_i}` with pairwise
/// non-proportional linear forms.
#[derive(Debug, Clone)]
pub struct RationalFnXY {
    field: PrimeField,
    constant: Fp,
    factors: Vec<(LinearForm, i64)>,
}

impl RationalFnXY {
    pub fn new(
        field: PrimeField,
        constant: Fp,
        factors: Vec<(LinearForm, i64)>,
    ) -> Result<Self, GeomError> {
        if field.is_zero(constant) {
            return Err(GeomError::UnsupportedFactor("zero constant".into()));
        }
        for (i, &(ref l, e)) in factors.iter().enumerate() {
            if e == 0 {
                return Err(GeomError::UnsupportedFactor("zero exponent".into()));
            }
            if l.is_constant() {
                return Err(GeomError::UnsupportedFactor(format!(
                    "constant factor {l}; fold it into the leading constant"
                )));
            }
            for (lp, _) in &factors[..i] {
                if l.proportional(lp, field) {
                    return Err(GeomError::UnsupportedFactor(format!(
                        "proportional factors {lp} and {l}"
                    )));
                }
            }
        }
        Ok(RationalFnXY { field, constant, factors })
    }

    pub fn constant(field: PrimeField, c: Fp) -> Result<Self, GeomError> {
        Self::new(field, c, vec![])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn factors(&self) -> &[(LinearForm, i64)] {
        &self.factors
    }

    pub fn total_exponent_weight(&self) -> i64 {
        self.factors.iter().map(|&(_, e)| e.abs()).sum()
    }
}

impl std::fmt::Display for RationalFnXY {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.constant)?;
        for &(l, e) in &self.factors {
            write!(f, "*{l}^{e}")?;
        }
        Ok(())
    }
}

/// A place carrying a two-dimensional local field: a point of the fixed
/// curve `{y = 0}` (finite or at infinity), or a formal germ through the
/// origin (`{y = lambda x}`, or `{x = 0}` for `None`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Place {
    CurvePoint(Option<Fp>),
    Germ(Option<Fp>),
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::CurvePoint(Some(a)) => write!(f, "point x={a} on y=0"),
            Place::CurvePoint(None) => write!(f, "point at infinity on y=0"),
            Place::Germ(Some(l)) => write!(f, "germ y={l}x"),
            Place::Germ(None) => write!(f, "germ x=0"),
        }
    }
}

/// Which reciprocity law a set of places belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    Point,
    Curve,
}

/// Chart substitution of one linear factor at a place, as an exact element
/// of the local field with inner parameter `t1 = u`, outer `t2 = t`.
fn factor_at(l: &LinearForm, place: &Place, k: PrimeField) -> TwoLocalElement {
    let (alpha, beta, gamma) = (l.alpha.0 as i64, l.beta.0 as i64, l.gamma.0 as i64);
    match place {
        // x = u + a, y = t.
        Place::CurvePoint(Some(a)) => TwoLocalElement::exact(
            k,
            &[(alpha + beta * a.0 as i64, 0, 0), (beta, 1, 0), (gamma, 0, 1)],
        ),
        // x = 1/u, y = t/u.
        Place::CurvePoint(None) => TwoLocalElement::exact(
            k,
            &[(beta, -1, 0), (alpha, 0, 0), (gamma, -1, 1)],
        ),
        // x = u, y = t + lambda u.
        Place::Germ(Some(lambda)) => TwoLocalElement::exact(
            k,
            &[(alpha, 0, 0), (beta + gamma * lambda.0 as i64, 1, 0), (gamma, 0, 1)],
        ),
        // x = t, y = u.
        Place::Germ(None) => {
            TwoLocalElement::exact(k, &[(alpha, 0, 0), (gamma, 1, 0), (beta, 0, 1)])
        }
    }
}

/// Expand a split function at a place to absolute precision `(n1, n2)`.
pub fn expand_at(
    f: &RationalFnXY,
    place: &Place,
    n1: i64,
    n2: i64,
) -> Result<TwoLocalElement, GeomError> {
    let k = f.field;
    let slack = f.total_exponent_weight() + 2;
    let (r1, r2) = (n1 + slack, n2 + slack);
    let mut acc = TwoLocalElement::monomial(k, f.constant, 0, 0);
    for (l, e) in &f.factors {
        let base = factor_at(l, place, k);
        acc = acc.mul(&base.pow(*e, r2, r1)?);
    }
    Ok(acc.truncate_abs(n1, n2))
}

/// Support places of a family of split functions under a law: the distinct
/// germs dividing an input for the point law; the points of the curve on a
/// factor zero, plus infinity, for the curve law. Off this list all three
/// expansions have trivial pairings.
pub fn support_places(fns: &[&RationalFnXY], law: Law) -> Result<Vec<Place>, GeomError> {
    let mut out = BTreeSet::new();
    match law {
        Law::Point => {
            for f in fns {
                let k = f.field;
                for (l, _) in &f.factors {
                    if !l.is_homogeneous() {
                        continue; // unit at the origin
                    }
                    if k.is_zero(l.gamma) {
                        out.insert(Place::Germ(None)); // the line x = 0
                    } else {
                        let lambda = k.neg(k.div(l.beta, l.gamma)?);
                        out.insert(Place::Germ(Some(lambda)));
                    }
                }
            }
        }
        Law::Curve => {
            let mut any_factor = false;
            for f in fns {
                let k = f.field;
                for (l, _) in &f.factors {
                    any_factor = true;
                    if !k.is_zero(l.beta) {
                        // alpha + beta x vanishes on the curve at -alpha/beta.
                        let a = k.neg(k.div(l.alpha, l.beta)?);
                        out.insert(Place::CurvePoint(Some(a)));
                    }
                }
            }
            if any_factor {
                out.insert(Place::CurvePoint(None));
            }
        }
    }
    let mut places: Vec<Place> = out.into_iter().collect();
    places.sort_by_key(place_sort_key);
    Ok(places)
}

/// Finite places ascending, then the infinite one of each kind.
fn place_sort_key(p: &Place) -> (u8, u8, u64) {
    match p {
        Place::CurvePoint(Some(a)) => (0, 0, a.0),
        Place::CurvePoint(None) => (0, 1, 0),
        Place::Germ(Some(l)) => (1, 0, l.0),
        Place::Germ(None) => (1, 1, 0),
    }
}

fn check_point_law_factors(f: &RationalFnXY) -> Result<(), GeomError> {
    let k = f.field;
    for (l, _) in &f.factors {
        if !l.is_homogeneous() && k.is_zero(l.alpha) {
            return Err(GeomError::UnsupportedFactor(format!(
                "factor {l} neither passes through the origin nor is a unit there"
            )));
        }
    }
    Ok(())
}

/// Per-place entry of a reciprocity report.
#[derive(Debug, Clone)]
pub struct PlaceValue {
    pub place: Place,
    pub nu: i64,
    pub symbol: Fp,
}

/// Result of a two-dimensional reciprocity check.
#[derive(Debug, Clone)]
pub struct ParshinReport {
    pub places: Vec<PlaceValue>,
    pub nu_sum: i64,
    pub product: Fp,
    pub pass: bool,
    pub n1: i64,
    pub n2: i64,
}

fn parshin_places(
    f: &RationalFnXY,
    g: &RationalFnXY,
    h: &RationalFnXY,
    places: &[Place],
    n1: i64,
    n2: i64,
) -> Result<(Vec<PlaceValue>, i64, Fp), GeomError> {
    let k = f.field;
    let mut entries = Vec::new();
    let mut nu_sum = 0i64;
    let mut product = k.one();
    for &place in places {
        let fe = expand_at(f, &place, n1, n2)?;
        let ge = expand_at(g, &place, n1, n2)?;
        let he = expand_at(h, &place, n1, n2)?;
        let nu = symbols::nu_k(&fe, &ge)?;
        let symbol = symbols::triple_symbol(&fe, &ge, &he)?.value();
        nu_sum += nu;
        product = k.mul(product, symbol);
        entries.push(PlaceValue { place, nu, symbol });
    }
    Ok((entries, nu_sum, product))
}

fn parshin_check(
    f: &RationalFnXY,
    g: &RationalFnXY,
    h: &RationalFnXY,
    law: Law,
) -> Result<ParshinReport, GeomError> {
    let places = support_places(&[f, g, h], law)?;
    let weight =
        f.total_exponent_weight() + g.total_exponent_weight() + h.total_exponent_weight();
    let n = weight + 4;
    let (entries, nu_sum, product) = parshin_places(f, g, h, &places, n, n)?;
    // Re-expansion at +2 must reproduce every local value.
    let (again, nu2, prod2) = parshin_places(f, g, h, &places, n + 2, n + 2)?;
    for (a, b) in entries.iter().zip(&again) {
        if a.nu != b.nu || a.symbol != b.symbol {
            return Err(GeomError::Unstable(format!(
                "values at {} changed under the +2 re-expansion",
                a.place
            )));
        }
    }
    debug_assert_eq!((nu_sum, product), (nu2, prod2));
    let pass = nu_sum == 0 && product == f.field.one();
    Ok(ParshinReport { places: entries, nu_sum, product, pass, n1: n, n2: n })
}

/// Parshin reciprocity around the origin: sum of pairings and product of
/// triple symbols over the germs through the point.
pub fn parshin_point_check(
    f: &RationalFnXY,
    g: &RationalFnXY,
    h: &RationalFnXY,
) -> Result<ParshinReport, GeomError> {
    check_point_law_factors(f)?;
    check_point_law_factors(g)?;
    check_point_law_factors(h)?;
    parshin_check(f, g, h, Law::Point)
}

/// Parshin reciprocity along the curve `{y = 0}`, the infinity chart
/// included.
pub fn parshin_curve_check(
    f: &RationalFnXY,
    g: &RationalFnXY,
    h: &RationalFnXY,
) -> Result<ParshinReport, GeomError> {
    parshin_check(f, g, h, Law::Curve)
}

/// Per-point entry of a Weil reciprocity report.
#[derive(Debug, Clone)]
pub struct WeilEntry {
    pub point: Option<Fp>,
    pub symbol: Fp,
}

#[derive(Debug, Clone)]
pub struct WeilReport {
    pub points: Vec<WeilEntry>,
    pub product: Fp,
    pub pass: bool,
}

/// Weil reciprocity on the projective line: the tame symbols of `f` and `g`
/// at every root or pole plus infinity multiply to 1.
pub fn weil_check(f: &RationalFn1, g: &RationalFn1) -> Result<WeilReport, GeomError> {
    let k = f.field;
    let mut points: BTreeSet<Option<Fp>> = BTreeSet::new();
    for &(a, _) in f.factors().iter().chain(g.factors()) {
        points.insert(Some(a));
    }
    points.insert(None);
    let mut points: Vec<Option<Fp>> = points.into_iter().collect();
    points.sort_by_key(|p| (p.is_none() as u8, p.map(|a| a.0).unwrap_or(0)));
    let rel = 4;
    let mut entries = Vec::new();
    let mut product = k.one();
    for point in points {
        let fe = f.expand(point, rel)?;
        let ge = g.expand(point, rel)?;
        let symbol = symbols::tame1d(&fe, &ge)?.value();
        product = k.mul(product, symbol);
        entries.push(WeilEntry { point, symbol });
    }
    Ok(WeilReport { points: entries, product, pass: product == k.one() })
}

/// Re-expansion of a local element under the parameter change
/// `t1 -> t1 (1 + t1)`, `t2 -> t2 (1 + t1)`: each monomial picks up the
/// factor `(1 + t1)^{i + j}`.
pub fn reparametrize(e: &TwoLocalElement) -> Result<TwoLocalElement, GeomError> {
    let k = e.field();
    let one_plus = LaurentSeries::exact(k, &[(0, 1), (1, 1)]);
    let mut acc = match e.outer_prec() {
        Some(p) => TwoLocalElement::zero_mod(k, p),
        None => TwoLocalElement::zero(k),
    };
    for (j, s) in e.t2_terms() {
        let rel = match s.prec() {
            // (1 + t1)^n only spreads upward, matching the known region.
            Some(p) => p - s.val().unwrap_or(p) + 1,
            None => 2 * (j.abs() + s.terms().map(|(i, _)| i.abs()).max().unwrap_or(0)) + 4,
        };
        let mut level = match s.prec() {
            Some(p) => LaurentSeries::zero_mod(k, p),
            None => LaurentSeries::zero(k),
        };
        for (i, c) in s.terms() {
            let twist = one_plus.pow(i + j, rel.max(1))?;
            level = level.add(&twist.scale(c).shift(i));
        }
        acc = acc.add(&TwoLocalElement::from_coeffs(k, [(j, level)], e.outer_prec()));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Rank2Val;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn form(k: PrimeField, a: i64, b: i64, c: i64) -> LinearForm {
        LinearForm { alpha: k.elt(a), beta: k.elt(b), gamma: k.elt(c) }
    }

    fn xy(k: PrimeField, c: i64, factors: &[(i64, i64, i64, i64)]) -> RationalFnXY {
        RationalFnXY::new(
            k,
            k.elt(c),
            factors.iter().map(|&(a, b, g, e)| (form(k, a, b, g), e)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn expand_examples() {
        let k = f7();
        // x + y at the germ y = 0: u + t.
        let f = xy(k, 1, &[(0, 1, 1, 1)]);
        let e = expand_at(&f, &Place::Germ(Some(Fp(0))), 6, 6).unwrap();
        assert_eq!(e.rank2_val().unwrap(), Rank2Val::new(1, 0));
        // y/x at the germ y = 0: t * u^{-1}.
        let f = xy(k, 1, &[(0, 0, 1, 1), (0, 1, 0, -1)]);
        let e = expand_at(&f, &Place::Germ(Some(Fp(0))), 6, 6).unwrap();
        assert_eq!(e.rank2_val().unwrap(), Rank2Val::new(-1, 1));
        // x at the infinity point of the curve: u^{-1}.
        let f = xy(k, 1, &[(0, 1, 0, 1)]);
        let e = expand_at(&f, &Place::CurvePoint(None), 6, 6).unwrap();
        assert_eq!(e.rank2_val().unwrap(), Rank2Val::new(-1, 0));
    }

    #[test]
    fn support_examples() {
        let k = f7();
        let x = xy(k, 1, &[(0, 1, 0, 1)]);
        let y = xy(k, 1, &[(0, 0, 1, 1)]);
        let s = support_places(&[&x, &y], Law::Point).unwrap();
        assert_eq!(s, vec![Place::Germ(Some(Fp(0))), Place::Germ(None)]);

        // {y, x-1, x-2} on the curve: points 1, 2, and infinity.
        let f1 = xy(k, 1, &[(0, 0, 1, 1)]);
        let f2 = xy(k, 1, &[(-1, 1, 0, 1)]);
        let f3 = xy(k, 1, &[(-2, 1, 0, 1)]);
        let s = support_places(&[&f1, &f2, &f3], Law::Curve).unwrap();
        assert_eq!(
            s,
            vec![
                Place::CurvePoint(Some(Fp(1))),
                Place::CurvePoint(Some(Fp(2))),
                Place::CurvePoint(None),
            ]
        );

        let c = RationalFnXY::constant(k, Fp(3)).unwrap();
        assert!(support_places(&[&c], Law::Curve).unwrap().is_empty());
        assert!(support_places(&[&c], Law::Point).unwrap().is_empty());
    }

    #[test]
    fn weil_worked_case() {
        let k = f7();
        // f = t, g = t - 1: symbols -1 at 0, 1 at 1, -1 at infinity.
        let f = RationalFn1::new(k, Fp(1), vec![(Fp(0), 1)]).unwrap();
        let g = RationalFn1::new(k, Fp(1), vec![(Fp(1), 1)]).unwrap();
        let r = weil_check(&f, &g).unwrap();
        assert!(r.pass);
        let by_point: Vec<(Option<Fp>, Fp)> =
            r.points.iter().map(|e| (e.point, e.symbol)).collect();
        assert_eq!(
            by_point,
            vec![(Some(Fp(0)), Fp(6)), (Some(Fp(1)), Fp(1)), (None, Fp(6))]
        );
    }

    #[test]
    fn weil_two_point_case() {
        let k = f7();
        // f = g = t: (-1 at 0)(-1 at infinity) = 1.
        let f = RationalFn1::new(k, Fp(1), vec![(Fp(0), 1)]).unwrap();
        let r = weil_check(&f, &f).unwrap();
        assert!(r.pass);
        assert_eq!(r.points.len(), 2);
        assert_eq!(r.points[0].symbol, Fp(6));
        assert_eq!(r.points[1].symbol, Fp(6));
    }

    #[test]
    fn weil_constant_case() {
        let k = f7();
        let f = RationalFn1::constant(k, Fp(5)).unwrap();
        let g = RationalFn1::new(k, Fp(1), vec![(Fp(2), 3), (Fp(4), -1)]).unwrap();
        let r = weil_check(&f, &g).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn weil_randomized() {
        let mut rng = StdRng::seed_from_u64(7);
        let k = f7();
        for _ in 0..60 {
            let mut mk = |rng: &mut StdRng, max_roots: usize| {
                let mut roots: Vec<Fp> = (0..7).map(Fp).collect();
                let mut factors = Vec::new();
                for _ in 0..rng.gen_range(0..=max_roots) {
                    let idx = rng.gen_range(0..roots.len());
                    let a = roots.swap_remove(idx);
                    let mut e = 0;
                    while e == 0 {
                        e = rng.gen_range(-3..4);
                    }
                    factors.push((a, e));
                }
                RationalFn1::new(k, Fp(rng.gen_range(1..7)), factors).unwrap()
            };
            let f = mk(&mut rng, 4);
            let g = mk(&mut rng, 4);
            let r = weil_check(&f, &g).unwrap();
            assert!(r.pass, "Weil product != 1 for f = {f}, g = {g}");
        }
    }

    #[test]
    fn parshin_point_worked_case() {
        let k = f7();
        let x = xy(k, 1, &[(0, 1, 0, 1)]);
        let y = xy(k, 1, &[(0, 0, 1, 1)]);
        let c = RationalFnXY::constant(k, Fp(3)).unwrap();
        let r = parshin_point_check(&x, &y, &c).unwrap();
        assert!(r.pass);
        // nu = +1 along y = 0 and -1 along x = 0, symbols c and c^{-1}.
        assert_eq!(r.places.len(), 2);
        assert_eq!(r.places[0].place, Place::Germ(Some(Fp(0))));
        assert_eq!(r.places[0].nu, 1);
        assert_eq!(r.places[0].symbol, Fp(3));
        assert_eq!(r.places[1].place, Place::Germ(None));
        assert_eq!(r.places[1].nu, -1);
        assert_eq!(r.places[1].symbol, Fp(5));
    }

    #[test]
    fn parshin_point_antisymmetry_case() {
        let k = f7();
        let f = xy(k, 2, &[(0, 1, 1, 1), (0, 1, 6, 2)]);
        let r = parshin_point_check(&f, &f, &f).unwrap();
        assert_eq!(r.nu_sum, 0);
        for e in &r.places {
            assert_eq!(e.nu, 0);
        }
    }

    #[test]
    fn parshin_constant_inputs_have_empty_support() {
        let k = f7();
        let a = RationalFnXY::constant(k, Fp(2)).unwrap();
        let b = RationalFnXY::constant(k, Fp(3)).unwrap();
        let c = RationalFnXY::constant(k, Fp(5)).unwrap();
        for r in [
            parshin_curve_check(&a, &b, &c).unwrap(),
            parshin_point_check(&a, &b, &c).unwrap(),
        ] {
            assert!(r.pass);
            assert!(r.places.is_empty());
            assert_eq!(r.nu_sum, 0);
            assert_eq!(r.product, Fp(1));
        }
    }

    #[test]
    fn parshin_curve_worked_case() {
        let k = f7();
        let y = xy(k, 1, &[(0, 0, 1, 1)]);
        let x = xy(k, 1, &[(0, 1, 0, 1)]);
        let c = RationalFnXY::constant(k, Fp(4)).unwrap();
        let r = parshin_curve_check(&y, &x, &c).unwrap();
        assert!(r.pass);
        assert_eq!(r.places.len(), 2); // x = 0 and infinity
        assert_eq!(r.places[0].nu + r.places[1].nu, 0);
    }

    fn random_point_fn(rng: &mut StdRng, k: PrimeField) -> RationalFnXY {
        // Lines through the origin plus units at the origin.
        let mut lines: Vec<LinearForm> = (0..7)
            .map(|l| form(k, 0, -(l as i64), 1))
            .chain([form(k, 0, 1, 0)])
            .collect();
        let mut factors = Vec::new();
        for _ in 0..rng.gen_range(0..4) {
            let idx = rng.gen_range(0..lines.len());
            let l = lines.swap_remove(idx);
            let mut e = 0;
            while e == 0 {
                e = rng.gen_range(-2..3);
            }
            factors.push((l, e));
        }
        if rng.gen_bool(0.5) {
            let unit = loop {
                let l = form(k, rng.gen_range(1..7), rng.gen_range(0..7), rng.gen_range(0..7));
                if !l.is_constant() {
                    break l;
                }
            };
            factors.push((unit, 1));
        }
        RationalFnXY::new(k, Fp(rng.gen_range(1..7)), factors).unwrap()
    }

    #[test]
    fn parshin_point_randomized() {
        let mut rng = StdRng::seed_from_u64(11);
        let k = f7();
        for _ in 0..25 {
            let f = random_point_fn(&mut rng, k);
            let g = random_point_fn(&mut rng, k);
            let h = random_point_fn(&mut rng, k);
            let r = parshin_point_check(&f, &g, &h).unwrap();
            assert!(r.pass, "point law failed for f={f}, g={g}, h={h}");
        }
    }

    fn random_curve_fn(rng: &mut StdRng, k: PrimeField) -> RationalFnXY {
        let mut pool: Vec<LinearForm> = (0..7)
            .map(|a| form(k, -(a as i64), 1, 0))
            .chain([form(k, 0, 0, 1), form(k, 3, 0, 1), form(k, 0, 1, 1), form(k, 1, 2, 3)])
            .collect();
        let mut factors = Vec::new();
        for _ in 0..rng.gen_range(1..4) {
            let idx = rng.gen_range(0..pool.len());
            let l = pool.swap_remove(idx);
            let mut e = 0;
            while e == 0 {
                e = rng.gen_range(-2..3);
            }
            factors.push((l, e));
        }
        RationalFnXY::new(k, Fp(rng.gen_range(1..7)), factors).unwrap()
    }

    #[test]
    fn parshin_curve_randomized() {
        let mut rng = StdRng::seed_from_u64(13);
        let k = f7();
        for _ in 0..25 {
            let f = random_curve_fn(&mut rng, k);
            let g = random_curve_fn(&mut rng, k);
            let h = random_curve_fn(&mut rng, k);
            let r = parshin_curve_check(&f, &g, &h).unwrap();
            assert!(r.pass, "curve law failed for f={f}, g={g}, h={h}");
            // The infinity chart is exercised in every case.
            assert!(r.places.iter().any(|p| p.place == Place::CurvePoint(None)));
        }
    }

    #[test]
    fn off_support_places_are_trivial() {
        let mut rng = StdRng::seed_from_u64(17);
        let k = f7();
        for _ in 0..20 {
            let f = random_point_fn(&mut rng, k);
            let g = random_point_fn(&mut rng, k);
            let h = random_point_fn(&mut rng, k);
            let support = support_places(&[&f, &g, &h], Law::Point).unwrap();
            let probe = (0..7)
                .map(|l| Place::Germ(Some(Fp(l))))
                .chain([Place::Germ(None)])
                .find(|p| !support.contains(p));
            let Some(place) = probe else { continue };
            let fe = expand_at(&f, &place, 8, 8).unwrap();
            let ge = expand_at(&g, &place, 8, 8).unwrap();
            let he = expand_at(&h, &place, 8, 8).unwrap();
            assert_eq!(symbols::nu_k(&fe, &ge).unwrap(), 0);
            assert_eq!(symbols::triple_symbol(&fe, &ge, &he).unwrap().value(), Fp(1));
        }
    }

    #[test]
    fn chart_independence_under_reparametrization() {
        let mut rng = StdRng::seed_from_u64(19);
        let k = f7();
        for _ in 0..15 {
            let f = random_point_fn(&mut rng, k);
            let g = random_point_fn(&mut rng, k);
            let h = random_point_fn(&mut rng, k);
            for place in support_places(&[&f, &g, &h], Law::Point).unwrap() {
                let fe = expand_at(&f, &place, 10, 10).unwrap();
                let ge = expand_at(&g, &place, 10, 10).unwrap();
                let he = expand_at(&h, &place, 10, 10).unwrap();
                let fr = reparametrize(&fe).unwrap();
                let gr = reparametrize(&ge).unwrap();
                let hr = reparametrize(&he).unwrap();
                assert_eq!(
                    symbols::nu_k(&fe, &ge).unwrap(),
                    symbols::nu_k(&fr, &gr).unwrap()
                );
                assert_eq!(
                    symbols::triple_symbol(&fe, &ge, &he).unwrap().value(),
                    symbols::triple_symbol(&fr, &gr, &hr).unwrap().value()
                );
            }
        }
    }

    #[test]
    fn constructor_validation() {
        let k = f7();
        assert!(RationalFn1::new(k, Fp(0), vec![]).is_err());
        assert!(RationalFn1::new(k, Fp(1), vec![(Fp(2), 0)]).is_err());
        assert!(RationalFn1::new(k, Fp(1), vec![(Fp(2), 1), (Fp(2), 2)]).is_err());
        assert!(RationalFnXY::new(k, Fp(1), vec![(form(k, 1, 0, 0), 1)]).is_err());
        assert!(RationalFnXY::new(
            k,
            Fp(1),
            vec![(form(k, 1, 2, 3), 1), (form(k, 2, 4, 6), 1)]
        )
        .is_err());
    }
}
