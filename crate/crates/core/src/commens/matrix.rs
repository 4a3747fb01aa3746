//! Dense exact matrices over a prime field: row reduction, rank, and
//! determinants. Rows are stored flat; all elimination is exact mod p.

use crate::field::{Fp, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Mat {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        Mat { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(field: PrimeField, cols: usize, rows: Vec<Vec<u64>>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(&r);
        }
        Mat { field, rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> Fp {
        Fp(self.data[r * self.cols + c])
    }

    pub fn set(&mut self, r: usize, c: usize, v: Fp) {
        self.data[r * self.cols + c] = v.0;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    /// In-place reduced row echelon form; returns the pivot columns in
    /// ascending order. Zero rows are dropped.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.field.modulus();
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            // Find a nonzero entry in this column at or below pivot_row.
            let mut sel = None;
            for r in pivot_row..self.rows {
                if self.data[r * self.cols + col] != 0 {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            if sel != pivot_row {
                for c in 0..self.cols {
                    self.data.swap(sel * self.cols + c, pivot_row * self.cols + c);
                }
            }
            // Normalize the pivot row.
            let inv = self
                .field
                .inv(Fp(self.data[pivot_row * self.cols + col]))
                .expect("nonzero pivot")
                .0;
            if inv != 1 {
                for c in col..self.cols {
                    let v = &mut self.data[pivot_row * self.cols + c];
                    *v = *v * inv % p;
                }
            }
            // Eliminate the column everywhere else.
            for r in 0..self.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = self.data[r * self.cols + col];
                if factor == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let sub = factor * self.data[pivot_row * self.cols + c] % p;
                    let v = &mut self.data[r * self.cols + c];
                    *v = (*v + p - sub) % p;
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        // Drop zero rows.
        self.data.truncate(pivot_row * self.cols);
        self.rows = pivot_row;
        pivots
    }

    pub fn rank(mut self) -> usize {
        self.rref();
        self.rows
    }

    /// Determinant of a square matrix by Gaussian elimination.
    pub fn det(mut self) -> Fp {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let p = self.field.modulus();
        let n = self.rows;
        let mut det = self.field.one();
        for col in 0..n {
            let mut sel = None;
            for r in col..n {
                if self.data[r * n + col] != 0 {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { return self.field.zero() };
            if sel != col {
                for c in 0..n {
                    self.data.swap(sel * n + c, col * n + c);
                }
                det = self.field.neg(det);
            }
            let pivot = Fp(self.data[col * n + col]);
            det = self.field.mul(det, pivot);
            let inv = self.field.inv(pivot).expect("nonzero pivot").0;
            for r in col + 1..n {
                let factor = self.data[r * n + col] * inv % p;
                if factor == 0 {
                    continue;
                }
                for c in col..n {
                    let sub = factor * self.data[col * n + c] % p;
                    let v = &mut self.data[r * n + c];
                    *v = (*v + p - sub) % p;
                }
            }
        }
        det
    }
}
