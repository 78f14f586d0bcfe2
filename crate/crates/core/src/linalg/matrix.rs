use std::fmt;

use crate::error::{Error, Result};
use crate::zmod::Ring;

/// Dense row-major matrix over `Z/p^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Matrix {
        Matrix { ring, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ring: Ring, size: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, size, size);
        for i in 0..size {
            m.set(i, i, 1 % ring.modulus());
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing each entry.
    pub fn from_rows(ring: Ring, rows: &[Vec<i64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Matrix::zeros(ring, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, ring.from_i64(x));
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(ring: Ring, rows: usize, columns: &[Vec<u64>]) -> Matrix {
        let mut m = Matrix::zeros(ring, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, ring.from_u64(x));
            }
        }
        m
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows || self.ring != other.ring {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ring = self.ring;
        let m = ring.modulus() as u128;
        let mut out = Matrix::zeros(ring, self.rows, other.cols);
        let mut acc = vec![0u128; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for (j, slot) in acc.iter_mut().enumerate() {
                    let b = other.get(k, j);
                    if b != 0 {
                        *slot = (*slot + a as u128 * b as u128) % m;
                    }
                }
            }
            for (j, &v) in acc.iter().enumerate() {
                out.set(i, j, v as u64);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[u64]) -> Result<Vec<u64>> {
        if x.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let ring = self.ring;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| ring.add(acc, ring.mul(a, b)))
            })
            .collect())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("hstack row counts differ".into()));
        }
        let mut out = Matrix::zeros(self.ring, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        Ok(out)
    }

    /// Appends zero rows until the matrix has `rows` rows.
    pub fn pad_rows(&self, rows: usize) -> Matrix {
        let mut out = self.clone();
        if rows > self.rows {
            out.data.resize(rows * self.cols, 0);
            out.rows = rows;
        }
        out
    }

    pub(crate) fn push_zero_row(&mut self) {
        self.data.extend(std::iter::repeat_n(0, self.cols));
        self.rows += 1;
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, c: u64) {
        let ring = self.ring;
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = ring.mul(*x, c);
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, c: u64) {
        for i in 0..self.rows {
            let x = self.get(i, j);
            self.set(i, j, self.ring.mul(x, c));
        }
    }

    /// `row[target] += c * row[source]`.
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, c: u64) {
        if c == 0 {
            return;
        }
        let ring = self.ring;
        for j in 0..self.cols {
            let s = self.data[source * self.cols + j];
            if s != 0 {
                let t = &mut self.data[target * self.cols + j];
                *t = ring.add(*t, ring.mul(c, s));
            }
        }
    }

    /// `col[target] += c * col[source]`.
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, c: u64) {
        if c == 0 {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, source);
            if s != 0 {
                let t = self.get(i, target);
                self.set(i, target, self.ring.add(t, self.ring.mul(c, s)));
            }
        }
    }

    /// Determinant of the reduction mod `p`; nonzero exactly when the matrix
    /// is invertible over `Z/p^n`.
    pub fn det_mod_p(&self) -> Result<u64> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch("determinant of a non-square matrix".into()));
        }
        let field = Ring::new(self.ring.p(), 1)?;
        let n = self.rows;
        let mut a: Vec<u64> = self.data.iter().map(|&x| x % field.p()).collect();
        let mut det = 1 % field.p();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| a[r * n + c] != 0) else {
                return Ok(0);
            };
            if piv != c {
                for j in 0..n {
                    a.swap(piv * n + j, c * n + j);
                }
                det = field.neg(det);
            }
            let pv = a[c * n + c];
            det = field.mul(det, pv);
            let inv = field.inv(pv).expect("nonzero in a field");
            for r in c + 1..n {
                let f = field.mul(a[r * n + c], inv);
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    a[r * n + j] = field.sub(a[r * n + j], field.mul(f, a[c * n + j]));
                }
            }
        }
        Ok(det)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|&x| self.ring.signed(x).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
