//! Finite-window linear algebra over the monomial basis of a truncated
//! two-variable Laurent field: commensurability data (relative dimensions),
//! determinant-line transitions in canonical echelon bases, dimension-theory
//! evaluation against basepoints, and the staircase support test for
//! operator matrices.

pub(crate) mod matrix;

use thiserror::Error;

use crate::field::{Fp, PrimeField};
use crate::series::TwoLocalElement;
use matrix::Mat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CommensError {
    #[error("operator precision too short for the window: {0}")]
    PrecisionShort(String),
    #[error("quotient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("induced map is singular")]
    NotInvertible,
    #[error("windows differ between operands")]
    WindowMismatch,
    #[error("required containment fails: {0}")]
    NotContained(String),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
}

/// Monomial window `t1^i t2^j` with `-n1 <= i < n1`, `-n2 <= j < n2`, in
/// canonical order: `j` ascending, then `i` ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub n1: i64,
    pub n2: i64,
}

impl Window {
    pub fn new(n1: i64, n2: i64) -> Self {
        assert!(n1 > 0 && n2 > 0);
        Window { n1, n2 }
    }

    pub fn dim(&self) -> usize {
        (4 * self.n1 * self.n2) as usize
    }

    pub fn contains(&self, i: i64, j: i64) -> bool {
        (-self.n1..self.n1).contains(&i) && (-self.n2..self.n2).contains(&j)
    }

    pub fn index(&self, i: i64, j: i64) -> usize {
        debug_assert!(self.contains(i, j));
        ((j + self.n2) * 2 * self.n1 + (i + self.n1)) as usize
    }

    pub fn monomial(&self, idx: usize) -> (i64, i64) {
        let idx = idx as i64;
        let w = 2 * self.n1;
        (idx % w - self.n1, idx / w - self.n2)
    }

    /// Monomials in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (0..self.dim()).map(|idx| self.monomial(idx))
    }
}

/// A subspace of the window space, stored as a reduced-echelon basis. The
/// representation is canonical, so subspace equality is matrix equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSubspace {
    window: Window,
    field: PrimeField,
    mat: Mat,
    pivots: Vec<usize>,
}

impl WindowSubspace {
    pub fn zero(window: Window, field: PrimeField) -> Self {
        WindowSubspace { window, field, mat: Mat::zero(field, 0, window.dim()), pivots: vec![] }
    }

    pub fn from_rows(window: Window, field: PrimeField, rows: Vec<Vec<u64>>) -> Self {
        let mut mat = Mat::from_rows(field, window.dim(), rows);
        let pivots = mat.rref();
        WindowSubspace { window, field, mat, pivots }
    }

    /// Span of the monomials `t1^i t2^j` with `i >= i0, j0 <= j < j1`,
    /// clipped to the window.
    pub fn staircase(window: Window, field: PrimeField, i0: i64, j0: i64, j1: i64) -> Self {
        let mut rows = Vec::new();
        for j in j0.max(-window.n2)..j1.min(window.n2) {
            for i in i0.max(-window.n1)..window.n1 {
                let mut row = vec![0u64; window.dim()];
                row[window.index(i, j)] = 1;
                rows.push(row);
            }
        }
        Self::from_rows(window, field, rows)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[u64]> + '_ {
        (0..self.mat.rows()).map(|r| self.mat.row(r))
    }

    /// Reduce `v` against the echelon basis; the residual is zero exactly
    /// when `v` lies in the subspace.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            let factor = v[pc];
            if factor == 0 {
                continue;
            }
            let p = self.field.modulus();
            let row = self.mat.row(r);
            for c in pc..v.len() {
                if row[c] != 0 {
                    v[c] = (v[c] + p - factor * row[c] % p) % p;
                }
            }
        }
        v
    }

    pub fn contains_vec(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis_rows().all(|r| other.contains_vec(r))
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.window, other.window);
        let rows = self.basis_rows().chain(other.basis_rows()).map(|r| r.to_vec()).collect();
        Self::from_rows(self.window, self.field, rows)
    }

    /// Intersection by the Zassenhaus stacked-block reduction.
    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.window, other.window);
        let d = self.window.dim();
        let mut rows = Vec::new();
        for r in self.basis_rows() {
            let mut row = vec![0u64; 2 * d];
            row[..d].copy_from_slice(r);
            row[d..].copy_from_slice(r);
            rows.push(row);
        }
        for r in other.basis_rows() {
            let mut row = vec![0u64; 2 * d];
            row[..d].copy_from_slice(r);
            rows.push(row);
        }
        let mut m = Mat::from_rows(self.field, 2 * d, rows);
        m.rref();
        let mut out = Vec::new();
        for r in 0..m.rows() {
            let row = m.row(r);
            if row[..d].iter().all(|&x| x == 0) {
                let tail = row[d..].to_vec();
                if tail.iter().any(|&x| x != 0) {
                    out.push(tail);
                }
            }
        }
        Self::from_rows(self.window, self.field, out)
    }
}

/// A `k`-linear operator on the window space with a declared staircase
/// support bound `j = j(i)` on its `t2`-blocks.
#[derive(Debug, Clone)]
pub struct WindowOperator {
    window: Window,
    field: PrimeField,
    /// Row = output monomial index, column = input monomial index.
    mat: Mat,
    /// Declared per-input-level lower bound on output levels; `None` for
    /// input levels with no support.
    support_bound: Vec<Option<i64>>,
    /// Inputs whose full image stays inside the window (no truncation).
    exact_box: Option<(i64, i64, i64, i64)>, // (i_lo, i_hi, j_lo, j_hi)
}

impl WindowOperator {
    pub fn identity(window: Window, field: PrimeField) -> Self {
        let d = window.dim();
        let mut mat = Mat::zero(field, d, d);
        for idx in 0..d {
            mat.set(idx, idx, field.one());
        }
        let support_bound = (-window.n2..window.n2).map(Some).collect();
        WindowOperator {
            window,
            field,
            mat,
            support_bound,
            exact_box: Some((-window.n1, window.n1, -window.n2, window.n2)),
        }
    }

    /// Build from an explicit matrix. If `declared_bound` is given, entries
    /// below the declared staircase must vanish.
    pub fn from_matrix(
        window: Window,
        field: PrimeField,
        mat: Mat,
        declared_bound: Option<Vec<Option<i64>>>,
    ) -> Result<Self, CommensError> {
        assert_eq!(mat.rows(), window.dim());
        assert_eq!(mat.cols(), window.dim());
        let actual = block_envelope(&window, &mat);
        let support_bound = match declared_bound {
            Some(b) => {
                assert_eq!(b.len(), (2 * window.n2) as usize);
                for (lvl, (act, dec)) in actual.iter().zip(b.iter()).enumerate() {
                    if let (Some(a), d) = (act, dec) {
                        let ok = match d {
                            Some(d) => a >= d,
                            None => false,
                        };
                        if !ok {
                            return Err(CommensError::NotContained(format!(
                                "support at input level {} below the declared bound",
                                lvl as i64 - window.n2
                            )));
                        }
                    }
                }
                b
            }
            None => actual,
        };
        Ok(WindowOperator { window, field, mat, support_bound, exact_box: None })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn support_bound(&self) -> &[Option<i64>] {
        &self.support_bound
    }

    pub fn exact_box(&self) -> Option<(i64, i64, i64, i64)> {
        self.exact_box
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let d = self.window.dim();
        assert_eq!(v.len(), d);
        let p = self.field.modulus();
        let mut out = vec![0u64; d];
        for (c, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let m = self.mat.at(r, c).0;
                if m != 0 {
                    *o = (*o + m * x) % p;
                }
            }
        }
        out
    }

    /// Span of the images of a subspace's basis.
    pub fn image_of(&self, s: &WindowSubspace) -> WindowSubspace {
        let rows = s.basis_rows().map(|r| self.apply(r)).collect();
        WindowSubspace::from_rows(self.window, self.field, rows)
    }
}

/// Per-input-level minimum output level with nonzero support.
fn block_envelope(window: &Window, mat: &Mat) -> Vec<Option<i64>> {
    let mut env: Vec<Option<i64>> = vec![None; (2 * window.n2) as usize];
    for out_idx in 0..window.dim() {
        for in_idx in 0..window.dim() {
            if mat.at(out_idx, in_idx).0 != 0 {
                let (_, j_out) = window.monomial(out_idx);
                let (_, j_in) = window.monomial(in_idx);
                let slot = &mut env[(j_in + window.n2) as usize];
                *slot = Some(match *slot {
                    Some(m) => m.min(j_out),
                    None => j_out,
                });
            }
        }
    }
    env
}

/// The matrix of multiplication by `f` compressed to the window.
/// Coefficients landing outside the window are truncated; the operator
/// records the largest input sub-window on which no truncation happens.
pub fn mul_operator(f: &TwoLocalElement, window: Window) -> Result<WindowOperator, CommensError> {
    let field = f.field();
    if !f.is_provably_nonzero() {
        return Err(CommensError::NotContained("multiplier must be provably nonzero".into()));
    }
    // Unknown coefficients of f must not be able to land inside the window.
    if let Some(p2) = f.outer_prec() {
        if p2 < 2 * window.n2 {
            return Err(CommensError::PrecisionShort(format!(
                "outer precision {} < {}",
                p2,
                2 * window.n2
            )));
        }
    }
    for (j, s) in f.t2_terms() {
        if let Some(p1) = s.prec() {
            if p1 < 2 * window.n1 {
                return Err(CommensError::PrecisionShort(format!(
                    "inner precision {} at level {} < {}",
                    p1,
                    j,
                    2 * window.n1
                )));
            }
        }
    }
    let d = window.dim();
    let mut mat = Mat::zero(field, d, d);
    let mut min1 = i64::MAX;
    let mut max1 = i64::MIN;
    let mut min2 = i64::MAX;
    let mut max2 = i64::MIN;
    for (d2, s) in f.t2_terms() {
        for (d1, c) in s.terms() {
            min1 = min1.min(d1);
            max1 = max1.max(d1);
            min2 = min2.min(d2);
            max2 = max2.max(d2);
            for in_idx in 0..d {
                let (i, j) = window.monomial(in_idx);
                let (oi, oj) = (i + d1, j + d2);
                if window.contains(oi, oj) {
                    let out_idx = window.index(oi, oj);
                    let prev = mat.at(out_idx, in_idx);
                    mat.set(out_idx, in_idx, field.add(prev, c));
                }
            }
        }
    }
    let v2 = f.rank2_val().map_err(|_| {
        CommensError::NotContained("multiplier must have a determined valuation".into())
    })?;
    let support_bound = (-window.n2..window.n2).map(|j| Some(j + v2.nu2)).collect();
    let exact_box = Some((
        -window.n1 - min1.min(0),
        window.n1 - max1.max(0),
        -window.n2 - min2.min(0),
        window.n2 - max2.max(0),
    ));
    Ok(WindowOperator { window, field, mat, support_bound, exact_box })
}

/// True iff the nonzero block support respects a monotone staircase bound
/// within the window: the per-level envelope of minimal output levels is
/// weakly increasing over input levels that carry support.
pub fn staircase_check(op: &WindowOperator) -> bool {
    let env = block_envelope(&op.window, &op.mat);
    let mut last: Option<i64> = None;
    for bound in env.into_iter().flatten() {
        if let Some(prev) = last {
            if bound < prev {
                return false;
            }
        }
        last = Some(bound);
    }
    true
}

/// Relative dimension `[a | b] = dim b/(a cap b) - dim a/(a cap b)`.
pub fn rel_dim(a: &WindowSubspace, b: &WindowSubspace) -> Result<i64, CommensError> {
    if a.window != b.window {
        return Err(CommensError::WindowMismatch);
    }
    let meet = a.intersect(b);
    Ok((b.dim() - meet.dim()) as i64 - (a.dim() - meet.dim()) as i64)
}

/// A dimension theory pinned to a basepoint: `d(u) = [basepoint | u]`.
pub fn dim_theory_eval(basepoint: &WindowSubspace, u: &WindowSubspace) -> Result<i64, CommensError> {
    rel_dim(basepoint, u)
}

/// An element of a `Z`-torsor of dimension theories, recorded as an offset
/// against a canonical basepoint subspace. Composition adds offsets.
#[derive(Debug, Clone)]
pub struct TorsorOffset {
    pub base: WindowSubspace,
    pub offset: i64,
}

impl TorsorOffset {
    pub fn compose(&self, other: &TorsorOffset) -> i64 {
        self.offset + other.offset
    }
}

/// A nonzero scalar: a determinant-line transition written in the canonical
/// monomial-echelon bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineScalar(Fp);

impl LineScalar {
    pub fn new(field: PrimeField, v: Fp) -> Self {
        assert!(!field.is_zero(v), "line transitions are invertible scalars");
        LineScalar(v)
    }

    pub fn value(&self) -> Fp {
        self.0
    }
}

/// Largest corner staircase `{i >= i0, j >= j0}` contained in both `a` and
/// `b`, chosen deterministically (minimal `i0 + j0`, then minimal `j0`).
pub fn deep_corner(a: &WindowSubspace, b: &WindowSubspace) -> WindowSubspace {
    let w = a.window;
    let field = a.field;
    let meet = a.intersect(b);
    let n1 = w.n1;
    let n2 = w.n2;
    let width = (2 * n1) as usize;
    let height = (2 * n2) as usize;
    // member[(j)(i)] = 1 iff the monomial lies in both subspaces.
    let mut member = vec![false; width * height];
    for j in -n2..n2 {
        for i in -n1..n1 {
            let mut v = vec![0u64; w.dim()];
            v[w.index(i, j)] = 1;
            member[((j + n2) as usize) * width + (i + n1) as usize] = meet.contains_vec(&v);
        }
    }
    // valid(i0, j0) = all monomials north-east of (i0, j0) are members;
    // the boundary rows (empty corners) are vacuously valid.
    let mut valid = vec![true; (width + 1) * (height + 1)];
    for jj in (0..height).rev() {
        for ii in (0..width).rev() {
            valid[jj * (width + 1) + ii] = member[jj * width + ii]
                && valid[jj * (width + 1) + ii + 1]
                && valid[(jj + 1) * (width + 1) + ii];
        }
    }
    let mut best: Option<(i64, i64)> = None;
    for jj in 0..=height {
        for ii in 0..=width {
            if valid[jj * (width + 1) + ii] {
                let cand = (ii as i64 - n1, jj as i64 - n2);
                best = Some(match best {
                    None => cand,
                    Some(cur) => {
                        let (ci, cj) = cur;
                        let (ni, nj) = cand;
                        if ni + nj < ci + cj || (ni + nj == ci + cj && nj < cj) {
                            cand
                        } else {
                            cur
                        }
                    }
                });
            }
        }
    }
    let (i0, j0) = best.unwrap_or((n1, n2));
    WindowSubspace::staircase(w, field, i0, j0, n2)
}

/// Determinant of the induced map `a/c -> b/c` in the canonical
/// monomial-echelon bases of the quotients.
///
/// Preconditions checked: `c <= a`, `c <= b`, `op(c) <= c`, `op(a) <= b`,
/// and `dim a/c = dim b/c`. Pass `None` for `c` to use the computed deep
/// corner staircase inside `a` and `b`.
pub fn det_transition(
    op: &WindowOperator,
    a: &WindowSubspace,
    b: &WindowSubspace,
    c: Option<&WindowSubspace>,
) -> Result<LineScalar, CommensError> {
    if a.window != b.window || a.window != op.window {
        return Err(CommensError::WindowMismatch);
    }
    let computed;
    let c = match c {
        Some(c) => {
            if c.window != a.window {
                return Err(CommensError::WindowMismatch);
            }
            c
        }
        None => {
            computed = deep_corner(a, b);
            &computed
        }
    };
    if !c.is_subspace_of(a) {
        return Err(CommensError::NotContained("c is not contained in a".into()));
    }
    if !c.is_subspace_of(b) {
        return Err(CommensError::NotContained("c is not contained in b".into()));
    }
    for r in c.basis_rows() {
        if !c.contains_vec(&op.apply(r)) {
            return Err(CommensError::NotContained("op does not preserve c".into()));
        }
    }
    let qa = quotient_pivots(a, c);
    let qb = quotient_pivots(b, c);
    if qa.len() != qb.len() {
        return Err(CommensError::DimensionMismatch(qa.len(), qb.len()));
    }
    let n = qa.len();
    if n == 0 {
        return Ok(LineScalar::new(a.field, a.field.one()));
    }
    // Coordinates of op(v) mod c in the echelon basis of b/c are its entries
    // at the quotient pivot columns of b, after reduction by c.
    let mut m = Mat::zero(a.field, n, n);
    for (row_idx, &ar) in qa.iter().enumerate() {
        let v = a.mat.row(ar);
        let w = op.apply(v);
        let reduced = c.reduce(&w);
        // Membership in b certifies that op maps a into b (mod nothing).
        if !b.contains_vec(&reduced) {
            return Err(CommensError::NotContained("op does not map a into b".into()));
        }
        for (col_idx, &bq) in qb.iter().enumerate() {
            m.set(row_idx, col_idx, Fp(reduced[b.pivots[bq]]));
        }
    }
    let det = m.det();
    if a.field.is_zero(det) {
        return Err(CommensError::NotInvertible);
    }
    Ok(LineScalar::new(a.field, det))
}

/// Indices of the rows of `a` whose pivots are not pivots of `c`; their
/// classes are the canonical echelon basis of `a/c`.
fn quotient_pivots(a: &WindowSubspace, c: &WindowSubspace) -> Vec<usize> {
    a.pivots
        .iter()
        .enumerate()
        .filter(|(_, p)| !c.pivots.contains(p))
        .map(|(r, _)| r)
        .collect()
}

#[cfg(test)]
mod tests;
