//! Closed-form symbol layer: the 1-D tame symbol, the boundary map to the
//! residue field, the pairing `nu_K`, both sign formulas, and the explicit
//! two-dimensional triple symbol.

use thiserror::Error;

use crate::field::{Fp, PrimeField};
use crate::series::{LaurentSeries, Rank2Val, SeriesError, TwoLocalElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolsError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
}

/// A value of a symbol: a nonzero element of the prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolValue(Fp);

impl SymbolValue {
    pub fn new(field: PrimeField, v: Fp) -> Self {
        assert!(!field.is_zero(v), "symbol values live in k*");
        SymbolValue(v)
    }

    pub fn value(&self) -> Fp {
        self.0
    }
}

impl std::fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which closed form of the sign exponent to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignMode {
    /// Six products of valuation components.
    BFormula,
    /// Polynomial in the three `nu_K` pairings.
    AFormula,
}

/// One-dimensional tame symbol
/// `(-1)^{v(f)v(g)} * f^{v(g)}/g^{v(f)} mod (t)`.
pub fn tame1d(f: &LaurentSeries, g: &LaurentSeries) -> Result<SymbolValue, SymbolsError> {
    let field = f.field();
    let (vf, _) = f.leading()?;
    let (vg, _) = g.leading()?;
    // The quotient has valuation 0; one guaranteed term pins its residue.
    let q = f.pow(vg, 1)?.mul(&g.pow(-vf, 1)?);
    let residue = q.constant_term()?;
    let signed = field.mul(field.sign(vf * vg), residue);
    Ok(SymbolValue::new(field, signed))
}

/// Tame symbol with respect to the outer valuation, reduced into the residue
/// field `k((t1))` and reported to `t1`-precision `prec`.
pub fn boundary2(
    f: &TwoLocalElement,
    g: &TwoLocalElement,
    prec: i64,
) -> Result<LaurentSeries, SymbolsError> {
    let field = f.field();
    let vf = f.rank2_val()?;
    let vg = g.rank2_val()?;
    // Inner precision request covers `prec` past the result's valuation.
    let res_val = vg.nu2 * vf.nu1 - vf.nu2 * vg.nu1;
    let inner = (prec - res_val).max(1) + 1;
    let q = f
        .pow(vg.nu2, 1, inner)?
        .mul(&g.pow(-vf.nu2, 1, inner)?);
    let reduced = q.t2_coeff(0)?;
    let capped = reduced.truncate_abs(prec);
    match capped.prec() {
        Some(p) if p < prec => {
            return Err(SymbolsError::Series(SeriesError::Indeterminate {
                needed: prec,
                available: p,
            }))
        }
        _ => {}
    }
    Ok(capped.scale(field.sign(vf.nu2 * vg.nu2)))
}

/// `nu_K(f, g) = nu1(f) nu2(g) - nu2(f) nu1(g)`.
pub fn nu_k(f: &TwoLocalElement, g: &TwoLocalElement) -> Result<i64, SymbolsError> {
    let vf = f.rank2_val()?;
    let vg = g.rank2_val()?;
    Ok(nu_k_from_vals(vf, vg))
}

pub fn nu_k_from_vals(vf: Rank2Val, vg: Rank2Val) -> i64 {
    vf.nu1 * vg.nu2 - vf.nu2 * vg.nu1
}

/// `sign_K(f, g, h) = (-1)^B = (-1)^A`, selectable formula.
pub fn sign_k(
    f: &TwoLocalElement,
    g: &TwoLocalElement,
    h: &TwoLocalElement,
    mode: SignMode,
) -> Result<SymbolValue, SymbolsError> {
    let field = f.field();
    let vf = f.rank2_val()?;
    let vg = g.rank2_val()?;
    let vh = h.rank2_val()?;
    Ok(SymbolValue::new(field, field.sign(sign_exponent(vf, vg, vh, mode))))
}

pub fn sign_exponent(vf: Rank2Val, vg: Rank2Val, vh: Rank2Val, mode: SignMode) -> i64 {
    match mode {
        SignMode::BFormula => {
            vf.nu1 * vg.nu2 * vh.nu2
                + vg.nu1 * vf.nu2 * vh.nu2
                + vh.nu1 * vg.nu2 * vf.nu2
                + vf.nu2 * vg.nu1 * vh.nu1
                + vg.nu2 * vf.nu1 * vh.nu1
                + vh.nu2 * vf.nu1 * vg.nu1
        }
        SignMode::AFormula => {
            let fg = nu_k_from_vals(vf, vg);
            let fh = nu_k_from_vals(vf, vh);
            let gh = nu_k_from_vals(vg, vh);
            fg * fh + fg * gh + gh * fh + fg * fh * gh
        }
    }
}

/// The explicit two-dimensional triple symbol
/// `sign_K(f,g,h) * f^{nu_K(g,h)} g^{nu_K(h,f)} h^{nu_K(f,g)}` reduced mod
/// the outer then the inner valuation ideal.
pub fn triple_symbol(
    f: &TwoLocalElement,
    g: &TwoLocalElement,
    h: &TwoLocalElement,
) -> Result<SymbolValue, SymbolsError> {
    let field = f.field();
    let vf = f.rank2_val()?;
    let vg = g.rank2_val()?;
    let vh = h.rank2_val()?;
    let ef = nu_k_from_vals(vg, vh);
    let eg = nu_k_from_vals(vh, vf);
    let eh = nu_k_from_vals(vf, vg);
    // Two guaranteed terms in each direction pin the residue of the product.
    let rel = 2;
    let prod = f
        .truncate_rel(rel, rel)
        .pow(ef, rel, rel)?
        .mul(&g.truncate_rel(rel, rel).pow(eg, rel, rel)?)
        .mul(&h.truncate_rel(rel, rel).pow(eh, rel, rel)?);
    let vp = prod.rank2_val()?;
    assert!(
        vp.is_zero(),
        "exponent identity violated: product has valuation ({}, {})",
        vp.nu1,
        vp.nu2
    );
    let residue = prod.residue00()?;
    let sign = field.sign(sign_exponent(vf, vg, vh, SignMode::BFormula));
    Ok(SymbolValue::new(field, field.mul(sign, residue)))
}
