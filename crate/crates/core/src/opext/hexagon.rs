//! The determinant-line hexagon on the outer quotient block.
//!
//! For multipliers that fix the standard lattice, the six-arrow hexagon
//! collapses to the four-arrow square: starting from the canonical object
//! over the quotient block, compose a canonical morphism, its conjugate
//! under the first multiplier, the inverse canonical morphism conjugated
//! under the second, and the inverse of the first choice. The two remaining
//! arrows are strict associativity steps. Each conjugation twists canonical
//! determinant-line bases by a computable determinant, evaluated here by
//! honest row reduction through `commens::det_transition`.

use crate::commens::{self, Window, WindowSubspace};
use crate::field::{Fp, PrimeField};
use crate::series::{LaurentSeries, TwoLocalElement};

use super::OpextError;

/// One-variable normal form `s = c * t1^v * unit`, unit with constant term 1.
fn normal_form_1d(s: &LaurentSeries) -> Result<(Fp, i64, LaurentSeries), OpextError> {
    let field = s.field();
    let (v, c) = s.leading().map_err(OpextError::from)?;
    let unit = s.scale(field.inv(c)?).shift(-v);
    Ok((c, v, unit))
}

/// Lift a `t1`-series to the two-variable element constant in `t2`.
fn lift(s: &LaurentSeries) -> TwoLocalElement {
    TwoLocalElement::from_coeffs(s.field(), [(0i64, s.clone())], None)
}

/// Image of `s` under multiplication by the series `x`, including the
/// images of the tail monomials within reach of `x`'s lowest exponent.
fn image_with_margins(
    x: &LaurentSeries,
    s: &WindowSubspace,
    window: Window,
) -> Result<WindowSubspace, OpextError> {
    let field = x.field();
    let op = commens::mul_operator(&lift(x), window)?;
    let mut rows: Vec<Vec<u64>> = s.basis_rows().map(|r| op.apply(r)).collect();
    let v = x.val().ok_or(crate::series::SeriesError::ZeroLeading)?;
    let delta = (-v).max(0);
    for m in window.n1..window.n1 + delta {
        let img = x.shift(m);
        let mut row = vec![0u64; window.dim()];
        for (e, c) in img.terms() {
            if e >= window.n1 {
                continue; // absorbed by the implicit tail
            }
            if e < -window.n1 {
                return Err(OpextError::WindowUnstable(format!(
                    "margin image reaches t1^{e} below the window"
                )));
            }
            row[window.index(e, 0)] = c.0;
        }
        rows.push(row);
    }
    Ok(WindowSubspace::from_rows(window, field, rows))
}

/// Determinant twist of the action of `x` on the line between `a` and `b`:
/// the constant part contributes `c^{[a|b]}`, the `t1`-power transports
/// canonical bases to canonical bases, and the principal-unit part is
/// evaluated as a ratio of induced-map determinants.
fn action_twist(
    x: &LaurentSeries,
    a: &WindowSubspace,
    b: &WindowSubspace,
    window: Window,
) -> Result<Fp, OpextError> {
    let field = x.field();
    let (c, _v, unit) = normal_form_1d(x)?;
    let exponent = commens::rel_dim(a, b)?;
    let scalar_part = field.pow(c, exponent)?;
    let op = commens::mul_operator(&lift(&unit.truncate_abs(2 * window.n1)), window)?;
    let det_on = |s: &WindowSubspace| -> Result<Fp, OpextError> {
        let img = op.image_of(s);
        Ok(commens::det_transition(&op, s, &img, Some(&WindowSubspace::zero(window, field)))?
            .value())
    };
    let db = det_on(b)?;
    let da = det_on(a)?;
    Ok(field.mul(scalar_part, field.mul(db, field.inv(da)?)))
}

/// Hexagon scalar for the triple `(x, y, t2^{-1})` with `x`, `y` given by
/// their residue-field parts: the composite automorphism of the canonical
/// object over the block `t2^{-1} O / O`.
pub(crate) fn hexagon(
    field: PrimeField,
    x: &LaurentSeries,
    y: &LaurentSeries,
    m1: i64,
) -> Result<Fp, OpextError> {
    let (v_x, _) = x.leading().map_err(OpextError::from)?;
    let (v_y, _) = y.leading().map_err(OpextError::from)?;
    let window = Window::new(m1, 1);
    let rel = 2 * m1 + v_x.abs() + v_y.abs() + 2;

    // The block subspace chain: U, y^{-1} U, x^{-1} y^{-1} U.
    let u = WindowSubspace::staircase(window, field, 0, 0, 1);
    let y_inv = y.inv(rel)?;
    let b1 = image_with_margins(&y_inv, &u, window)?;
    let x_inv_full = x.inv(rel)?;
    let b2 = image_with_margins(&x_inv_full, &b1, window)?;

    // Arrow 1: alpha, the canonical element of (U | y^{-1}U); scalar 1.
    // Arrow 2: x^{-1}-conjugate of beta; twists by the action determinant.
    let d1 = action_twist(&x_inv_full, &u, &b1, window)?;
    // Strict associativity step: identity.
    // Arrow 3: y-conjugate of alpha^{-1}; the remaining action determinant.
    let d2 = action_twist(y, &b1, &b2, window)?;
    // Strict associativity step: identity.
    // Arrow 4: beta^{-1}, canonical; scalar 1.
    Ok(field.mul(d1, d2))
}

/// Hexagon with the +2 window stability re-run.
pub(crate) fn hexagon_stable(
    field: PrimeField,
    x: &LaurentSeries,
    y: &LaurentSeries,
    m1: i64,
) -> Result<Fp, OpextError> {
    let first = hexagon(field, x, y, m1)?;
    let second = hexagon(field, x, y, m1 + 2)?;
    if first != second {
        return Err(OpextError::WindowUnstable(format!(
            "hexagon changed from {first} to {second} at window {m1}+2"
        )));
    }
    Ok(first)
}
