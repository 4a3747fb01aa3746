//! Truncated elements of the iterated Laurent field `k((t1))((t2))`.
//!
//! An element is a finite map from `t2`-exponents to `t1`-series, with an
//! outer precision bound in `t2` and per-coefficient inner precision in `t1`.
//! Coefficients that are provably zero are never stored; coefficients that
//! are only *possibly* zero (no known terms, finite precision) are kept, so
//! a valuation query on them fails loudly.

use std::collections::BTreeMap;

use crate::field::{Fp, PrimeField};
use crate::series::laurent::{LaurentSeries, SeriesError};

/// Rank-2 valuation `(nu1, nu2)`: `nu2` is the `t2`-adic valuation, `nu1`
/// the `t1`-adic valuation of the leading `t2`-coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rank2Val {
    pub nu1: i64,
    pub nu2: i64,
}

impl Rank2Val {
    pub fn new(nu1: i64, nu2: i64) -> Self {
        Rank2Val { nu1, nu2 }
    }

    pub fn is_zero(&self) -> bool {
        self.nu1 == 0 && self.nu2 == 0
    }
}

impl std::ops::Add for Rank2Val {
    type Output = Rank2Val;
    fn add(self, rhs: Rank2Val) -> Rank2Val {
        Rank2Val::new(self.nu1 + rhs.nu1, self.nu2 + rhs.nu2)
    }
}

/// Multiplicative decomposition `c * t1^a1 * t2^a2 * unit` with the unit a
/// principal unit (residue 1, valuation (0, 0)).
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub c: Fp,
    pub a1: i64,
    pub a2: i64,
    pub unit: TwoLocalElement,
}

impl NormalForm {
    /// Reassemble `c * t1^a1 * t2^a2 * unit`.
    pub fn reassemble(&self) -> TwoLocalElement {
        self.unit.scale(self.c).shift(self.a1, self.a2)
    }
}

/// Element of `k((t1))((t2))` with tracked inner and outer precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoLocalElement {
    field: PrimeField,
    coeffs: BTreeMap<i64, LaurentSeries>,
    outer_prec: Option<i64>,
}

impl TwoLocalElement {
    pub fn zero(field: PrimeField) -> Self {
        TwoLocalElement { field, coeffs: BTreeMap::new(), outer_prec: None }
    }

    pub fn zero_mod(field: PrimeField, outer_prec: i64) -> Self {
        TwoLocalElement { field, coeffs: BTreeMap::new(), outer_prec: Some(outer_prec) }
    }

    pub fn constant(field: PrimeField, c: i64) -> Self {
        Self::monomial(field, field.elt(c), 0, 0)
    }

    /// `c * t1^i1 * t2^i2`, exact.
    pub fn monomial(field: PrimeField, c: Fp, i1: i64, i2: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !field.is_zero(c) {
            coeffs.insert(i2, LaurentSeries::monomial(field, c, i1));
        }
        TwoLocalElement { field, coeffs, outer_prec: None }
    }

    /// Build from `t2`-coefficients; exact-zero coefficients are dropped and
    /// coefficients at exponents past `outer_prec` discarded.
    pub fn from_coeffs(
        field: PrimeField,
        coeffs: impl IntoIterator<Item = (i64, LaurentSeries)>,
        outer_prec: Option<i64>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (e, s) in coeffs {
            assert_eq!(s.field().modulus(), field.modulus(), "mixed coefficient fields");
            if s.is_exactly_zero() {
                continue;
            }
            if let Some(p) = outer_prec {
                if e >= p {
                    continue;
                }
            }
            match map.remove(&e) {
                None => {
                    map.insert(e, s);
                }
                Some(prev) => {
                    let sum = prev.add(&s);
                    if !sum.is_exactly_zero() {
                        map.insert(e, sum);
                    }
                }
            }
        }
        TwoLocalElement { field, coeffs: map, outer_prec }
    }

    /// Exact element from monomial terms `(coefficient, t1-exp, t2-exp)`.
    pub fn exact(field: PrimeField, terms: &[(i64, i64, i64)]) -> Self {
        let mut acc = Self::zero(field);
        for &(c, i1, i2) in terms {
            acc = acc.add(&Self::monomial(field, field.elt(c), i1, i2));
        }
        acc
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn outer_prec(&self) -> Option<i64> {
        self.outer_prec
    }

    /// Floor over all stored coefficients' `t1`-precision.
    pub fn inner_prec(&self) -> Option<i64> {
        self.coeffs.values().filter_map(|s| s.prec()).min()
    }

    pub fn t2_terms(&self) -> impl Iterator<Item = (i64, &LaurentSeries)> + '_ {
        self.coeffs.iter().map(|(&e, s)| (e, s))
    }

    /// Coefficient of `t2^e`, or `Err` if `e` is outside the outer precision.
    pub fn t2_coeff(&self, e: i64) -> Result<LaurentSeries, SeriesError> {
        if let Some(p) = self.outer_prec {
            if e >= p {
                return Err(SeriesError::Indeterminate { needed: e + 1, available: p });
            }
        }
        Ok(self
            .coeffs
            .get(&e)
            .cloned()
            .unwrap_or_else(|| LaurentSeries::zero(self.field)))
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.coeffs.is_empty() && self.outer_prec.is_none()
    }

    /// Some stored coefficient has a known nonzero term, and every stored
    /// coefficient below it is provably nonzero too (they always are, since
    /// exact zeros are dropped), so the leading term is certain.
    pub fn is_provably_nonzero(&self) -> bool {
        self.coeffs
            .values()
            .next()
            .map(|s| s.is_provably_nonzero())
            .unwrap_or(false)
    }

    /// Least `t2`-exponent that could carry nonzero content.
    pub(crate) fn lower_bound2(&self) -> Option<i64> {
        match self.coeffs.keys().next() {
            Some(&e) => Some(e),
            None => self.outer_prec,
        }
    }

    /// Least `t1`-exponent over all stored coefficients that could carry
    /// nonzero content (known valuation, or precision for unknown-zero).
    pub fn min_inner_exponent(&self) -> Option<i64> {
        self.coeffs.values().filter_map(|s| s.lower_bound()).min()
    }

    /// Greatest stored `t2`-exponent.
    pub fn max_outer_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(
            self.field.modulus(),
            other.field.modulus(),
            "mixed coefficient fields"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let outer_prec = match (self.outer_prec, other.outer_prec) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        let mut all: BTreeMap<i64, LaurentSeries> = self.coeffs.clone();
        for (&e, s) in &other.coeffs {
            match all.remove(&e) {
                None => {
                    all.insert(e, s.clone());
                }
                Some(prev) => {
                    all.insert(e, prev.add(s));
                }
            }
        }
        Self::from_coeffs(self.field, all, outer_prec)
    }

    pub fn neg(&self) -> Self {
        let coeffs: BTreeMap<_, _> = self.coeffs.iter().map(|(&e, s)| (e, s.neg())).collect();
        TwoLocalElement { field: self.field, coeffs, outer_prec: self.outer_prec }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fp) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(self.field);
        }
        let coeffs: BTreeMap<_, _> = self.coeffs.iter().map(|(&e, s)| (e, s.scale(c))).collect();
        TwoLocalElement { field: self.field, coeffs, outer_prec: self.outer_prec }
    }

    /// Multiply by `t1^i1 * t2^i2`.
    pub fn shift(&self, i1: i64, i2: i64) -> Self {
        let coeffs: BTreeMap<_, _> = self
            .coeffs
            .iter()
            .map(|(&e, s)| (e + i2, s.shift(i1)))
            .collect();
        TwoLocalElement {
            field: self.field,
            coeffs,
            outer_prec: self.outer_prec.map(|p| p + i2),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        if self.is_exactly_zero() || other.is_exactly_zero() {
            return Self::zero(self.field);
        }
        let outer_prec = match (self.lower_bound2(), other.lower_bound2()) {
            (Some(la), Some(lb)) => {
                let from_b = other.outer_prec.map(|p| la + p);
                let from_a = self.outer_prec.map(|p| lb + p);
                match (from_a, from_b) {
                    (None, None) => None,
                    (Some(x), None) => Some(x),
                    (None, Some(y)) => Some(y),
                    (Some(x), Some(y)) => Some(x.min(y)),
                }
            }
            _ => None,
        };
        let mut acc: BTreeMap<i64, LaurentSeries> = BTreeMap::new();
        for (&ea, sa) in &self.coeffs {
            for (&eb, sb) in &other.coeffs {
                let e = ea + eb;
                if let Some(p) = outer_prec {
                    if e >= p {
                        break;
                    }
                }
                let prod = sa.mul(sb);
                match acc.remove(&e) {
                    None => {
                        acc.insert(e, prod);
                    }
                    Some(prev) => {
                        acc.insert(e, prev.add(&prod));
                    }
                }
            }
        }
        Self::from_coeffs(self.field, acc, outer_prec)
    }

    /// Cost-control cap: like `truncate_rel`, but exact data that fits
    /// entirely under the caps stays exact.
    pub(crate) fn cap_rel(&self, r1: i64, r2: i64) -> Self {
        let outer = match self.lower_bound2() {
            Some(lb) => {
                let cap = lb + r2;
                let dropped = self.coeffs.keys().any(|&e| e >= cap);
                match self.outer_prec {
                    Some(p) => Some(p.min(cap)),
                    None if dropped => Some(cap),
                    None => None,
                }
            }
            None => self.outer_prec,
        };
        let coeffs: BTreeMap<_, _> = self
            .coeffs
            .iter()
            .map(|(&e, s)| (e, s.cap_rel(r1)))
            .collect();
        Self::from_coeffs(self.field, coeffs, outer)
    }

    /// Cap relative precision: `r2` outer terms past `nu2`, coefficients to
    /// `r1` terms past their own valuation.
    pub fn truncate_rel(&self, r1: i64, r2: i64) -> Self {
        let outer = match self.lower_bound2() {
            Some(lb) => match self.outer_prec {
                Some(p) => Some(p.min(lb + r2)),
                None => Some(lb + r2),
            },
            None => self.outer_prec,
        };
        let coeffs: BTreeMap<_, _> = self
            .coeffs
            .iter()
            .map(|(&e, s)| (e, s.truncate_rel(r1)))
            .collect();
        Self::from_coeffs(self.field, coeffs, outer)
    }

    /// Cap the outer precision at `t2^p2` only.
    pub fn truncate_outer_abs(&self, p2: i64) -> Self {
        let outer = match self.outer_prec {
            Some(p) => Some(p.min(p2)),
            None => Some(p2),
        };
        Self::from_coeffs(self.field, self.coeffs.clone(), outer)
    }

    /// Cap every stored coefficient at `t1^p1`; the outer precision stays.
    pub fn truncate_inner_abs(&self, p1: i64) -> Self {
        let coeffs: BTreeMap<_, _> = self
            .coeffs
            .iter()
            .map(|(&e, s)| (e, s.truncate_abs(p1)))
            .collect();
        Self::from_coeffs(self.field, coeffs, self.outer_prec)
    }

    /// Cap absolute precision at `t1^p1` (every coefficient) and `t2^p2`.
    pub fn truncate_abs(&self, p1: i64, p2: i64) -> Self {
        let outer = match self.outer_prec {
            Some(p) => Some(p.min(p2)),
            None => Some(p2),
        };
        let coeffs: BTreeMap<_, _> = self
            .coeffs
            .iter()
            .map(|(&e, s)| (e, s.truncate_abs(p1)))
            .collect();
        Self::from_coeffs(self.field, coeffs, outer)
    }

    /// Rank-2 valuation; errors on zero or insufficient precision.
    pub fn rank2_val(&self) -> Result<Rank2Val, SeriesError> {
        match self.coeffs.iter().next() {
            Some((&e2, s)) => match s.val() {
                Some(e1) => Ok(Rank2Val::new(e1, e2)),
                // Leading t2-coefficient is possibly zero: undecidable.
                None => Err(SeriesError::ZeroLeading),
            },
            None => match self.outer_prec {
                Some(_) => Err(SeriesError::ZeroLeading),
                None => Err(SeriesError::ZeroValuation),
            },
        }
    }

    /// Multiplicative normal form `c * t1^a1 * t2^a2 * (1 + ...)`.
    pub fn normal_form(&self) -> Result<NormalForm, SeriesError> {
        let v = self.rank2_val()?;
        let lead = self.coeffs.get(&v.nu2).expect("leading coefficient exists");
        let (_, c) = lead.leading()?;
        let c_inv = self.field.inv(c)?;
        let unit = self.scale(c_inv).shift(-v.nu1, -v.nu2);
        debug_assert_eq!(unit.rank2_val().ok(), Some(Rank2Val::new(0, 0)));
        Ok(NormalForm { c, a1: v.nu1, a2: v.nu2, unit })
    }

    /// Inverse, guaranteeing `outer_terms` past `-nu2` and asking `inner_rel`
    /// relative precision of the inverted leading coefficient.
    pub fn inv(&self, outer_terms: i64, inner_rel: i64) -> Result<Self, SeriesError> {
        assert!(outer_terms >= 1 && inner_rel >= 1);
        let v = self.rank2_val()?;
        if let Some(p) = self.outer_prec {
            let avail = p - v.nu2;
            if avail < outer_terms {
                return Err(SeriesError::Indeterminate { needed: outer_terms, available: avail });
            }
        }
        let lead = self.coeffs.get(&v.nu2).expect("leading coefficient exists");
        let lead_inv = lead.inv(inner_rel)?;
        // u = self * t2^{-nu2} = lead * (1 + r), r with positive t2-valuation.
        let u = self.shift(0, -v.nu2);
        let mut r = Self::zero(self.field);
        for (e, s) in u.t2_terms() {
            if e == 0 {
                continue;
            }
            r = r.add(&Self::from_coeffs(
                self.field,
                [(e, s.mul(&lead_inv))],
                None,
            ));
        }
        if let Some(p) = u.outer_prec {
            r = Self::from_coeffs(self.field, r.coeffs, Some(p));
        }
        // s_m = 1 - r*s_{m-1} telescopes the geometric series for (1+r)^{-1}.
        let one = Self::constant(self.field, 1);
        let mut geo = one.clone();
        for _ in 1..outer_terms {
            geo = one.sub(&r.mul(&geo)).cap_outer(outer_terms);
        }
        let mut inv_u = geo.mul_series_coeffwise(&lead_inv);
        // The partial geometric sum is exact only when there was nothing to
        // sum; otherwise the tail is genuinely unknown past the cap.
        if !r.is_exactly_zero() {
            inv_u = inv_u.truncate_outer_abs(outer_terms);
        }
        Ok(inv_u.shift(0, -v.nu2))
    }

    /// `self^n`; negative powers invert first with the given guarantees.
    pub fn pow(&self, n: i64, outer_terms: i64, inner_rel: i64) -> Result<Self, SeriesError> {
        if n == 0 {
            return Ok(Self::constant(self.field, 1));
        }
        let base = if n < 0 {
            self.inv(outer_terms, inner_rel)?
        } else {
            self.clone()
        };
        let mut acc = Self::constant(self.field, 1);
        let mut sq = base;
        let mut e = n.unsigned_abs();
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&sq).cap_rel(inner_rel, outer_terms);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = sq.mul(&sq).cap_rel(inner_rel, outer_terms);
        }
        Ok(acc)
    }

    fn cap_outer(&self, rel_terms: i64) -> Self {
        match self.lower_bound2() {
            Some(lb) => {
                let cap = lb + rel_terms;
                let dropped = self.coeffs.keys().any(|&e| e >= cap);
                let outer = match self.outer_prec {
                    Some(p) => Some(p.min(cap)),
                    None if dropped => Some(cap),
                    None => None,
                };
                Self::from_coeffs(self.field, self.coeffs.clone(), outer)
            }
            None => self.clone(),
        }
    }

    fn mul_series_coeffwise(&self, s: &LaurentSeries) -> Self {
        let coeffs: BTreeMap<_, _> = self.coeffs.iter().map(|(&e, c)| (e, c.mul(s))).collect();
        Self::from_coeffs(self.field, coeffs, self.outer_prec)
    }

    /// Reduce mod the `t2`-ideal then the `t1`-ideal: the residue in `k`.
    pub fn residue00(&self) -> Result<Fp, SeriesError> {
        let s = self.t2_coeff(0)?;
        s.constant_term()
    }
}

impl std::fmt::Display for TwoLocalElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (e, s) in self.t2_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({s})*t2^{e}")?;
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(p) = self.outer_prec {
            write!(f, " + O(t2^{p})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn rank2_val_examples() {
        let k = f7();
        // t1^{-2} t2^3 + higher t2
        let a = TwoLocalElement::exact(k, &[(1, -2, 3), (1, 0, 4)]);
        assert_eq!(a.rank2_val().unwrap(), Rank2Val::new(-2, 3));
        // t2^{-1} t1 + 5 t2^0 t1^{-1}
        let b = TwoLocalElement::exact(k, &[(1, 1, -1), (5, -1, 0)]);
        assert_eq!(b.rank2_val().unwrap(), Rank2Val::new(1, -1));
        let c = TwoLocalElement::constant(k, 4);
        assert_eq!(c.rank2_val().unwrap(), Rank2Val::new(0, 0));
    }

    #[test]
    fn rank2_val_error_states() {
        let k = f7();
        assert!(matches!(
            TwoLocalElement::zero(k).rank2_val(),
            Err(SeriesError::ZeroValuation)
        ));
        assert!(matches!(
            TwoLocalElement::zero_mod(k, 3).rank2_val(),
            Err(SeriesError::ZeroLeading)
        ));
        // Leading coefficient only known as O(t1^2): indeterminate.
        let iffy = TwoLocalElement::from_coeffs(
            k,
            [(0, LaurentSeries::zero_mod(k, 2)), (1, LaurentSeries::constant(k, 1))],
            None,
        );
        assert!(matches!(iffy.rank2_val(), Err(SeriesError::ZeroLeading)));
    }

    #[test]
    fn normal_form_examples() {
        let k = f5();
        // 3 t1^2 t2^{-1} (1 + t1 t2)
        let a = TwoLocalElement::exact(k, &[(3, 2, -1), (3, 3, 0)]);
        let nf = a.normal_form().unwrap();
        assert_eq!(nf.c, Fp(3));
        assert_eq!((nf.a1, nf.a2), (2, -1));
        assert_eq!(nf.unit, TwoLocalElement::exact(k, &[(1, 0, 0), (1, 1, 1)]));

        // 2 + t1 over F_5: unit = 1 + 3 t1 since 2^{-1} = 3
        let b = TwoLocalElement::exact(k, &[(2, 0, 0), (1, 1, 0)]);
        let nf = b.normal_form().unwrap();
        assert_eq!(nf.c, Fp(2));
        assert_eq!((nf.a1, nf.a2), (0, 0));
        assert_eq!(nf.unit, TwoLocalElement::exact(k, &[(1, 0, 0), (3, 1, 0)]));

        let t2 = TwoLocalElement::exact(k, &[(1, 0, 1)]);
        let nf = t2.normal_form().unwrap();
        assert_eq!((nf.c, nf.a1, nf.a2), (Fp(1), 0, 1));
        assert_eq!(nf.unit, TwoLocalElement::constant(k, 1));
    }

    #[test]
    fn normal_form_round_trip() {
        let k = f7();
        let a = TwoLocalElement::exact(k, &[(3, -1, 2), (2, 0, 2), (6, 4, 3), (1, -3, 5)]);
        let nf = a.normal_form().unwrap();
        assert_eq!(nf.reassemble(), a);
        // Round-trip holds at finite precision too.
        let b = a.truncate_abs(5, 5);
        assert_eq!(b.normal_form().unwrap().reassemble(), b);
    }

    #[test]
    fn inverse_round_trip() {
        let k = f7();
        let a = TwoLocalElement::exact(k, &[(2, -1, 1), (1, 0, 1), (3, -2, 2)]);
        let inv = a.inv(4, 5).unwrap();
        let prod = a.mul(&inv);
        assert_eq!(prod.rank2_val().unwrap(), Rank2Val::new(0, 0));
        assert_eq!(prod.residue00().unwrap(), Fp(1));
        // All known terms of the product besides the constant must vanish.
        for (e2, s) in prod.t2_terms() {
            for (e1, c) in s.terms() {
                assert!(e1 == 0 && e2 == 0 && c == Fp(1), "stray term at ({e1},{e2}): {c}");
            }
        }
    }

    fn random_nonzero(rng: &mut StdRng, k: PrimeField) -> TwoLocalElement {
        loop {
            let mut terms = Vec::new();
            for _ in 0..rng.gen_range(1..5) {
                terms.push((
                    rng.gen_range(0..k.modulus() as i64),
                    rng.gen_range(-3..4),
                    rng.gen_range(-3..4),
                ));
            }
            let e = TwoLocalElement::exact(k, &terms);
            if e.is_provably_nonzero() {
                return e;
            }
        }
    }

    #[test]
    fn valuation_additivity_randomized() {
        let mut rng = StdRng::seed_from_u64(7);
        let k = f5();
        for _ in 0..200 {
            let a = random_nonzero(&mut rng, k);
            let b = random_nonzero(&mut rng, k);
            let va = a.rank2_val().unwrap();
            let vb = b.rank2_val().unwrap();
            assert_eq!(a.mul(&b).rank2_val().unwrap(), va + vb);
        }
    }

    #[test]
    fn precision_soundness_two_level() {
        let k = f5();
        let a = TwoLocalElement::from_coeffs(
            k,
            [
                (0, LaurentSeries::with_prec(k, &[(0, 1), (1, 2)], 4)),
                (1, LaurentSeries::exact(k, &[(-1, 3)])),
            ],
            Some(3),
        );
        let b = TwoLocalElement::exact(k, &[(1, 1, 1), (2, -1, 0)]);
        let p = a.mul(&b);
        let op = p.outer_prec().unwrap();
        for (e2, s) in p.t2_terms() {
            assert!(e2 < op);
            if let Some(p1) = s.prec() {
                for (e1, _) in s.terms() {
                    assert!(e1 < p1);
                }
            }
        }
    }
}
