//! Direct evaluation of the lattice commutator on the product window.
//!
//! Lifts against the central extension are normalized by the canonical
//! dimension-theory basepoints of the standard staircases. The group law's
//! 2-cocycle relative to that section is a sum of two relative dimensions:
//! the basepoint transport of the acting element and the conjugated
//! basepoint of its partner, each computed by row reduction over bands of
//! the window. The commutator is the antisymmetrized cocycle. Direct sums
//! are handled by concatenating per-component windows into one matrix.

use crate::commens::matrix::Mat;
use crate::commens::Window;
use crate::field::PrimeField;
use crate::series::TwoLocalElement;

use super::OpextError;

/// Per-component evaluation data for a pair of commuting elements acting
/// diagonally on a direct sum.
pub struct ComponentPair {
    pub f: TwoLocalElement,
    pub g: TwoLocalElement,
}

struct CompLayout {
    window: Window,
    n_deep: i64, // C = t2^N O inside every lattice in play
    v2f: i64,
    v2g: i64,
    offset: usize,
}

/// No `t1`-descent: every coefficient's valuation is at least the leading
/// coefficient's. This keeps windowed images of staircases tail-exact.
pub(crate) fn descent_free(x: &TwoLocalElement) -> bool {
    let Some((_, lead)) = x.t2_terms().next() else {
        return false;
    };
    let Some(lead_val) = lead.val() else { return false };
    x.t2_terms().all(|(_, s)| match s.lower_bound() {
        Some(v) => v >= lead_val,
        None => true,
    })
}

/// Rows of the monomial staircase `{t1^i, i >= 0} x [lo, hi)` of one
/// component, written into the concatenated coordinate space.
fn staircase_rows(layout: &CompLayout, total: usize, lo: i64, hi: i64) -> Vec<Vec<u64>> {
    let w = layout.window;
    let mut rows = Vec::new();
    for j in lo.max(-w.n2)..hi.min(w.n2) {
        for i in 0..w.n1 {
            let mut row = vec![0u64; total];
            row[layout.offset + w.index(i, j)] = 1;
            rows.push(row);
        }
    }
    rows
}

/// Rows spanning the image of the staircase over `[src_lo, src_hi)` under
/// multiplication by `x`, reduced into the band `[tgt_lo, tgt_hi)` (levels
/// at or above `tgt_hi` fall into the deep lattice and are dropped; levels
/// below `tgt_lo` would escape the ambient lattice and are an error).
fn image_rows(
    layout: &CompLayout,
    total: usize,
    x: &TwoLocalElement,
    src_lo: i64,
    src_hi: i64,
    tgt_lo: i64,
    tgt_hi: i64,
) -> Result<Vec<Vec<u64>>, OpextError> {
    let w = layout.window;
    let field = x.field();
    if let Some(p2) = x.outer_prec() {
        if src_lo + p2 < tgt_hi {
            return Err(OpextError::PrecisionShort(format!(
                "outer precision {p2} cannot cover the band up to {tgt_hi}"
            )));
        }
    }
    for (j, s) in x.t2_terms() {
        if let Some(p1) = s.prec() {
            if p1 < w.n1 {
                return Err(OpextError::PrecisionShort(format!(
                    "inner precision {p1} at level {j} below n1 = {}",
                    w.n1
                )));
            }
        }
    }
    let min1 = x.min_inner_exponent().unwrap_or(0);
    let delta = (-min1).max(0);
    let mut rows = Vec::new();
    for j in src_lo..src_hi {
        for i in 0..w.n1 + delta {
            let mut row = vec![0u64; total];
            let mut nonzero = false;
            for (d2, s) in x.t2_terms() {
                let oj = j + d2;
                if oj >= tgt_hi {
                    continue;
                }
                if oj < tgt_lo {
                    return Err(OpextError::WindowUnstable(format!(
                        "image level {oj} below the target band {tgt_lo}"
                    )));
                }
                for (d1, c) in s.terms() {
                    let oi = i + d1;
                    if oi >= w.n1 {
                        continue; // implicit t1-tail
                    }
                    if oi < -w.n1 {
                        return Err(OpextError::WindowUnstable(format!(
                            "image exponent t1^{oi} below the window"
                        )));
                    }
                    let slot = &mut row[layout.offset + w.index(oi, oj)];
                    *slot = (*slot + c.0) % field.modulus();
                    nonzero = true;
                }
            }
            if nonzero {
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

fn rank(field: PrimeField, total: usize, rows: Vec<Vec<u64>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    Mat::from_rows(field, total, rows).rank()
}

/// The cocycle of the product of canonical lifts against the canonical
/// section: `c(f, g) = [base(fL) | f base(L)] + [f base(gL) | base(fgL)]`,
/// summed over components into one concatenated computation.
fn cocycle(
    field: PrimeField,
    layouts: &[CompLayout],
    firsts: &[&TwoLocalElement],
    shifts_first: &[i64],
    shifts_second: &[i64],
) -> Result<i64, OpextError> {
    let total: usize = layouts.iter().map(|l| l.window.dim()).sum();
    let mut t1_img = Vec::new();
    let mut t1_stair = Vec::new();
    let mut t2_stair = Vec::new();
    let mut t2_img = Vec::new();
    for (ci, layout) in layouts.iter().enumerate() {
        let n = layout.n_deep;
        let a = shifts_first[ci];
        let b = shifts_second[ci];
        t1_img.extend(image_rows(layout, total, firsts[ci], 0, n, a, n + a)?);
        t1_stair.extend(staircase_rows(layout, total, a, n + a));
        t2_stair.extend(staircase_rows(layout, total, a + b, n + a));
        t2_img.extend(image_rows(layout, total, firsts[ci], b, n, a + b, n + a)?);
    }
    let term1 = rank(field, total, t1_img) as i64 - rank(field, total, t1_stair) as i64;
    let term2 = rank(field, total, t2_stair) as i64 - rank(field, total, t2_img) as i64;
    Ok(term1 + term2)
}

/// Commutator of canonical lifts on the (possibly multi-component) window:
/// `psi = c(f, g) - c(g, f)`. Returns the value and the windows used.
pub(crate) fn psi_direct(
    field: PrimeField,
    parts: &[ComponentPair],
    n1_override: Option<i64>,
    n2_override: Option<i64>,
) -> Result<(i64, i64, i64), OpextError> {
    let run = |extra: i64| -> Result<(i64, i64, i64), OpextError> {
        let mut layouts = Vec::new();
        let mut offset = 0usize;
        let mut used_n1 = 0i64;
        let mut used_n2 = 0i64;
        for part in parts {
            let vf = part.f.rank2_val()?;
            let vg = part.g.rank2_val()?;
            let n_deep = [0, vf.nu2, vg.nu2, vf.nu2 + vg.nu2]
                .into_iter()
                .max()
                .unwrap()
                + 1;
            let n1 = n1_override.unwrap_or(vf.nu1.abs() + vg.nu1.abs() + 4) + extra;
            let n2 =
                n2_override.unwrap_or(n_deep + vf.nu2.abs().max(vg.nu2.abs()) + 2) + extra;
            used_n1 = used_n1.max(n1);
            used_n2 = used_n2.max(n2);
            let window = Window::new(n1, n2);
            layouts.push(CompLayout {
                window,
                n_deep,
                v2f: vf.nu2,
                v2g: vg.nu2,
                offset,
            });
            offset += window.dim();
        }
        let fs: Vec<&TwoLocalElement> = parts.iter().map(|p| &p.f).collect();
        let gs: Vec<&TwoLocalElement> = parts.iter().map(|p| &p.g).collect();
        let a: Vec<i64> = layouts.iter().map(|l| l.v2f).collect();
        let b: Vec<i64> = layouts.iter().map(|l| l.v2g).collect();
        let c_fg = cocycle(field, &layouts, &fs, &a, &b)?;
        let c_gf = cocycle(field, &layouts, &gs, &b, &a)?;
        Ok((c_fg - c_gf, used_n1, used_n2))
    };
    let (first, n1, n2) = run(0)?;
    let (second, _, _) = run(2)?;
    if first != second {
        return Err(OpextError::WindowUnstable(format!(
            "direct commutator changed from {first} to {second} under the +2 re-run"
        )));
    }
    Ok((first, n1, n2))
}
