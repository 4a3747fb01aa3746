//! Truncated Laurent series over a prime field.
//!
//! A series carries its known coefficients plus an explicit precision: either
//! exact (finitely supported data known completely) or `O(t^N)` (coefficients
//! at exponents `>= N` unknown). Every operation propagates the precision it
//! can actually guarantee; operations that need more than is available fail
//! with `Indeterminate` instead of guessing.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{Fp, PrimeField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("leading coefficient is not provably nonzero at the current precision")]
    ZeroLeading,
    #[error("insufficient precision: needed {needed}, available {available}")]
    Indeterminate { needed: i64, available: i64 },
    #[error("valuation of a zero element is undefined")]
    ZeroValuation,
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
}

/// Laurent series in one variable over `F_p`.
///
/// `prec = None` means the series is exact (all unlisted coefficients are
/// zero); `prec = Some(n)` means coefficients at exponents `>= n` are unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: PrimeField,
    coeffs: BTreeMap<i64, Fp>,
    prec: Option<i64>,
}

impl LaurentSeries {
    /// Exact series from (exponent, coefficient) terms.
    pub fn exact(field: PrimeField, terms: &[(i64, i64)]) -> Self {
        let mut coeffs = BTreeMap::new();
        for &(e, c) in terms {
            let c = field.elt(c);
            if !field.is_zero(c) {
                let entry = coeffs.entry(e).or_insert(field.zero());
                *entry = field.add(*entry, c);
            }
        }
        coeffs.retain(|_, c| !field.is_zero(*c));
        LaurentSeries { field, coeffs, prec: None }
    }

    /// Series known modulo `t^prec`.
    pub fn with_prec(field: PrimeField, terms: &[(i64, i64)], prec: i64) -> Self {
        let mut s = Self::exact(field, terms);
        s.coeffs.retain(|&e, _| e < prec);
        s.prec = Some(prec);
        s
    }

    pub fn zero(field: PrimeField) -> Self {
        LaurentSeries { field, coeffs: BTreeMap::new(), prec: None }
    }

    /// The unknown element `O(t^prec)`: no known terms, possibly zero.
    pub fn zero_mod(field: PrimeField, prec: i64) -> Self {
        LaurentSeries { field, coeffs: BTreeMap::new(), prec: Some(prec) }
    }

    pub fn constant(field: PrimeField, c: i64) -> Self {
        Self::exact(field, &[(0, c)])
    }

    pub fn monomial(field: PrimeField, c: Fp, e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !field.is_zero(c) {
            coeffs.insert(e, c);
        }
        LaurentSeries { field, coeffs, prec: None }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// True only for the exact zero series.
    pub fn is_exactly_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    /// A nonzero coefficient is known.
    pub fn is_provably_nonzero(&self) -> bool {
        !self.coeffs.is_empty()
    }

    /// Least exponent with a known nonzero coefficient.
    pub fn val(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Exponents known to be below any possible nonzero content. For a
    /// provably nonzero series this is the valuation; for `O(t^N)` it is `N`.
    pub(crate) fn lower_bound(&self) -> Option<i64> {
        match self.val() {
            Some(v) => Some(v),
            None => self.prec, // exact zero -> None, meaning +infinity
        }
    }

    /// Precision relative to the valuation (number of guaranteed terms).
    pub fn rel_prec(&self) -> Option<i64> {
        match (self.val(), self.prec) {
            (Some(v), Some(p)) => Some(p - v),
            _ => None,
        }
    }

    /// Coefficient at `e`, or `Err` if `e` is outside the known range.
    pub fn coeff(&self, e: i64) -> Result<Fp, SeriesError> {
        if let Some(p) = self.prec {
            if e >= p {
                return Err(SeriesError::Indeterminate { needed: e + 1, available: p });
            }
        }
        Ok(self.coeffs.get(&e).copied().unwrap_or(self.field.zero()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Fp)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn leading(&self) -> Result<(i64, Fp), SeriesError> {
        self.coeffs
            .iter()
            .next()
            .map(|(&e, &c)| (e, c))
            .ok_or(SeriesError::ZeroLeading)
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(
            self.field.modulus(),
            other.field.modulus(),
            "mixed coefficient fields"
        );
    }

    fn normalized(mut self) -> Self {
        if let Some(p) = self.prec {
            self.coeffs.retain(|&e, _| e < p);
        }
        let field = self.field;
        self.coeffs.retain(|_, c| !field.is_zero(*c));
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let prec = match (self.prec, other.prec) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        let mut coeffs = self.coeffs.clone();
        for (&e, &c) in &other.coeffs {
            let entry = coeffs.entry(e).or_insert(self.field.zero());
            *entry = self.field.add(*entry, c);
        }
        LaurentSeries { field: self.field, coeffs, prec }.normalized()
    }

    pub fn neg(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&e, &c)| (e, self.field.neg(c)))
            .collect();
        LaurentSeries { field: self.field, coeffs, prec: self.prec }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fp) -> Self {
        if self.field.is_zero(c) {
            // Scaling by zero yields the exact zero series.
            return Self::zero(self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&e, &v)| (e, self.field.mul(v, c)))
            .collect();
        LaurentSeries { field: self.field, coeffs, prec: self.prec }
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect();
        LaurentSeries { field: self.field, coeffs, prec: self.prec.map(|p| p + k) }
    }

    /// Product with the best guaranteed precision:
    /// `prec = min(val(a) + prec(b), val(b) + prec(a))` for nonzero inputs.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        if self.is_exactly_zero() || other.is_exactly_zero() {
            return Self::zero(self.field);
        }
        let prec = match (self.lower_bound(), other.lower_bound()) {
            (Some(la), Some(lb)) => {
                let from_b = other.prec.map(|p| la + p);
                let from_a = self.prec.map(|p| lb + p);
                match (from_a, from_b) {
                    (None, None) => None,
                    (Some(x), None) => Some(x),
                    (None, Some(y)) => Some(y),
                    (Some(x), Some(y)) => Some(x.min(y)),
                }
            }
            // One side is exact zero; handled above.
            _ => None,
        };
        let mut coeffs: BTreeMap<i64, Fp> = BTreeMap::new();
        for (&ea, &ca) in &self.coeffs {
            for (&eb, &cb) in &other.coeffs {
                let e = ea + eb;
                if let Some(p) = prec {
                    if e >= p {
                        break; // exponents ascend within the inner loop
                    }
                }
                let term = self.field.mul(ca, cb);
                let entry = coeffs.entry(e).or_insert(self.field.zero());
                *entry = self.field.add(*entry, term);
            }
        }
        LaurentSeries { field: self.field, coeffs, prec }.normalized()
    }

    /// Cap the relative precision at `r` terms past the valuation.
    pub fn truncate_rel(&self, r: i64) -> Self {
        match self.val() {
            Some(v) => self.truncate_abs(v + r),
            None => self.clone(),
        }
    }

    /// Cost-control cap: like `truncate_rel`, but an exact series that fits
    /// entirely under the cap stays exact.
    pub(crate) fn cap_rel(&self, r: i64) -> Self {
        match self.val() {
            Some(v) if !self.is_exact() || self.coeffs.keys().any(|&e| e >= v + r) => {
                self.truncate_abs(v + r)
            }
            _ => self.clone(),
        }
    }

    /// Cap the absolute precision at `t^p`.
    pub fn truncate_abs(&self, p: i64) -> Self {
        let prec = match self.prec {
            Some(q) => Some(q.min(p)),
            None => Some(p),
        };
        let mut coeffs = self.coeffs.clone();
        coeffs.retain(|&e, _| e < p);
        LaurentSeries { field: self.field, coeffs, prec }
    }

    /// Multiplicative inverse to `rel_prec` terms past the valuation of the
    /// result. Exact monomials invert exactly.
    pub fn inv(&self, rel_prec: i64) -> Result<Self, SeriesError> {
        let (v, lead) = self.leading()?;
        assert!(rel_prec >= 1, "inverse needs at least one term");
        if let Some(avail) = self.rel_prec() {
            if avail < rel_prec {
                return Err(SeriesError::Indeterminate { needed: rel_prec, available: avail });
            }
        }
        let lead_inv = self.field.inv(lead)?;
        if self.coeffs.len() == 1 && self.is_exact() {
            return Ok(Self::monomial(self.field, lead_inv, -v));
        }
        // c[0] = 1/a0, c[n] = -(1/a0) * sum_{k=1}^{n} a[k] c[n-k], a[k] = coeff at v+k.
        let mut inv_coeffs: Vec<Fp> = Vec::with_capacity(rel_prec as usize);
        inv_coeffs.push(lead_inv);
        for n in 1..rel_prec {
            let mut sum = self.field.zero();
            for k in 1..=n {
                let ak = self.coeffs.get(&(v + k)).copied().unwrap_or(self.field.zero());
                if self.field.is_zero(ak) {
                    continue;
                }
                sum = self.field.add(sum, self.field.mul(ak, inv_coeffs[(n - k) as usize]));
            }
            inv_coeffs.push(self.field.neg(self.field.mul(lead_inv, sum)));
        }
        let mut coeffs = BTreeMap::new();
        for (n, c) in inv_coeffs.into_iter().enumerate() {
            if !self.field.is_zero(c) {
                coeffs.insert(-v + n as i64, c);
            }
        }
        Ok(LaurentSeries { field: self.field, coeffs, prec: Some(-v + rel_prec) })
    }

    /// `self^n`, capping intermediates at `rel_prec` guaranteed terms.
    /// Exact data that fits under the cap stays exact (monomial powers in
    /// particular are exact).
    pub fn pow(&self, n: i64, rel_prec: i64) -> Result<Self, SeriesError> {
        if n == 0 {
            return Ok(Self::constant(self.field, 1));
        }
        let base = if n < 0 { self.inv(rel_prec)? } else { self.cap_rel(rel_prec) };
        let mut acc = Self::constant(self.field, 1);
        let mut sq = base;
        let mut e = n.unsigned_abs();
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&sq).cap_rel(rel_prec);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = sq.mul(&sq).cap_rel(rel_prec);
        }
        Ok(acc)
    }

    /// `self^n` without truncation; only for exact, finitely supported data.
    pub fn pow_exact(&self, n: u64) -> Self {
        assert!(self.is_exact(), "pow_exact requires an exact series");
        let mut acc = Self::constant(self.field, 1);
        let mut sq = self.clone();
        let mut e = n;
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = sq.mul(&sq);
        }
        acc
    }

    /// Constant term, requiring it to be determined.
    pub fn constant_term(&self) -> Result<Fp, SeriesError> {
        self.coeff(0)
    }
}

impl std::fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(p) = self.prec {
            write!(f, " + O(t^{p})")?;
        }
        Ok(())
    }
}
