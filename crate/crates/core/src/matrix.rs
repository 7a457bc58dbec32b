//! Dense and default-valued sparse matrices over exact rationals.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::from_integer(1.into()));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::dims("ragged matrix rows"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Rational> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn add_assign(&mut self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dims(format!(
                "cannot add {}x{} to {}x{}",
                other.rows, other.cols, self.rows, self.cols
            )));
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(())
    }

    /// `M v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::dims(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(_, x)| !x.is_zero())
                    .fold(Rational::zero(), |acc, (a, x)| acc + a * x)
            })
            .collect())
    }

    /// `M v` accumulated into `out`.
    pub(crate) fn mul_vec_into(&self, v: &[Rational], out: &mut [Rational]) {
        debug_assert_eq!(v.len(), self.cols);
        for (r, slot) in out.iter_mut().enumerate().take(self.rows) {
            for (a, x) in self.row(r).iter().zip(v) {
                if !a.is_zero() && !x.is_zero() {
                    *slot += a * x;
                }
            }
        }
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

/// Matrix whose unspecified entries all equal `default`.
///
/// Used for the large bimatrix games, where nearly every entry is the same
/// constant (zero before normalization, `alpha/(alpha+2)` after).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    default: Rational,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize, default: Rational) -> Self {
        SparseMatrix {
            rows,
            cols,
            default,
            entries: BTreeMap::new(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix::new(rows, cols, Rational::zero())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::from_integer(1.into()));
        }
        m
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let mut s = SparseMatrix::zeros(m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                s.set(r, c, m.get(r, c).clone());
            }
        }
        s
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn default_value(&self) -> &Rational {
        &self.default
    }

    /// Entries that differ from the default, in row-major order.
    pub fn explicit_entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        self.entries.get(&(r, c)).unwrap_or(&self.default)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of range");
        if v == self.default {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
        }
        m
    }

    /// `M v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::dims(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let base = if self.default.is_zero() {
            Rational::zero()
        } else {
            v.iter().fold(Rational::zero(), |acc, x| acc + x) * &self.default
        };
        let mut out = vec![base; self.rows];
        for (&(r, c), a) in &self.entries {
            if !v[c].is_zero() {
                out[r] += (a - &self.default) * &v[c];
            }
        }
        Ok(out)
    }

    /// `M^T v`.
    pub fn mul_vec_transposed(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.rows {
            return Err(Error::dims(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let base = if self.default.is_zero() {
            Rational::zero()
        } else {
            v.iter().fold(Rational::zero(), |acc, x| acc + x) * &self.default
        };
        let mut out = vec![base; self.cols];
        for (&(r, c), a) in &self.entries {
            if !v[r].is_zero() {
                out[c] += (a - &self.default) * &v[r];
            }
        }
        Ok(out)
    }

    /// Entry-wise affine map `x -> (x + shift) * scale`.
    pub fn affine(&self, shift: &Rational, scale: &Rational) -> SparseMatrix {
        let f = |x: &Rational| (x + shift) * scale;
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            default: f(&self.default),
            entries: self.entries.iter().map(|(k, v)| (*k, f(v))).collect(),
        }
    }

    pub fn min_max(&self) -> Option<(Rational, Rational)> {
        if self.rows == 0 || self.cols == 0 {
            return None;
        }
        let dense_default = self.entries.len() < self.rows * self.cols;
        let mut iter = self
            .entries
            .values()
            .chain(dense_default.then_some(&self.default));
        let first = iter.next()?.clone();
        Some(iter.fold((first.clone(), first), |(lo, hi), v| {
            (
                if *v < lo { v.clone() } else { lo },
                if *v > hi { v.clone() } else { hi },
            )
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn dense_mul_vec() {
        let m = Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(0), ratio(1, 2)]]).unwrap();
        assert_eq!(m.mul_vec(&[int(1), int(2)]).unwrap(), vec![int(5), int(1)]);
        assert!(m.mul_vec(&[int(1)]).is_err());
    }

    #[test]
    fn sparse_default_products() {
        let mut m = SparseMatrix::new(2, 3, int(1));
        m.set(0, 1, int(4));
        let dense = m.to_dense();
        let v = vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)];
        assert_eq!(m.mul_vec(&v).unwrap(), dense.mul_vec(&v).unwrap());
        let w = vec![ratio(1, 3), ratio(2, 3)];
        let expect: Vec<Rational> = (0..3)
            .map(|c| (0..2).map(|r| dense.get(r, c) * &w[r]).sum())
            .collect();
        assert_eq!(m.mul_vec_transposed(&w).unwrap(), expect);
    }

    #[test]
    fn affine_and_range() {
        let mut m = SparseMatrix::zeros(2, 2);
        m.set(0, 0, int(-4));
        let n = m.affine(&int(4), &ratio(1, 6));
        assert_eq!(n.get(0, 0), &int(0));
        assert_eq!(n.get(1, 1), &ratio(2, 3));
        assert_eq!(m.min_max(), Some((int(-4), int(0))));
    }
}
