use std::fmt;

use super::Field;
use crate::error::{Error, Result};

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from nested rows; every row must have the same length and
    /// every entry must be a valid element encoding.
    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(field, rows, cols)
    }

    /// Like [`Matrix::from_rows`] but with an explicit column count, so that
    /// `0 × c` matrices can be built.
    pub fn from_rows_with_cols(field: &Field, rows: &[Vec<u32>], cols: usize) -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&v| !field.contains(v)) {
                return Err(Error::MalformedInput(format!(
                    "element {bad} out of range for GF({})",
                    field.order()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors, each of length `dim`.
    pub fn from_cols(field: &Field, cols: &[Vec<u32>], dim: usize) -> Result<Matrix> {
        Ok(Matrix::from_rows_with_cols(field, cols, dim)?.transpose())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        debug_assert!(self.field.contains(v));
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * out.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(&other.data) {
            *o = self.field.add(*o, b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        let mut neg = other.clone();
        for v in neg.data.iter_mut() {
            *v = other.field.neg(*v);
        }
        self.add(&neg)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let f = &self.field;
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, self.get(i, j)));
            }
        }
        Ok(out)
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut out = Matrix::zeros(&self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.data[i * out.cols..i * out.cols + self.cols].copy_from_slice(self.row(i));
            out.data[i * out.cols + self.cols..(i + 1) * out.cols].copy_from_slice(other.row(i));
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut out = self.clone();
        out.rows += other.rows;
        out.data.extend_from_slice(&other.data);
        Ok(out)
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out.set(i, k, self.get(i, j));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.field, rows.len(), self.cols);
        for (k, &i) in rows.iter().enumerate() {
            out.data[k * self.cols..(k + 1) * self.cols].copy_from_slice(self.row(i));
        }
        out
    }

    /// In-place reduced row echelon form; returns pivot columns.
    /// Only the first `limit` columns are eligible as pivots.
    fn rref_in_place(&mut self, limit: usize) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit.min(self.cols) {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = self.get(r, j);
                self.set(r, j, f.mul(v, inv));
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place(m.cols);
        (m, piv)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // eliminate along the shorter side
        let mut m = if self.rows > self.cols {
            self.transpose()
        } else {
            self.clone()
        };
        let cols = m.cols;
        m.rref_in_place(cols).len()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "inverse of non-square {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = self.hstack(&Matrix::identity(&self.field, n))?;
        let piv = aug.rref_in_place(n);
        if piv.len() < n {
            return Err(Error::Singular);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(aug.select_cols(&cols))
    }

    /// Solves `self · X = y`. Free variables are set to zero; `None` when the
    /// system is inconsistent.
    pub fn solve_right(&self, y: &Matrix) -> Result<Option<Matrix>> {
        if self.rows != y.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve with {} rows against right-hand side with {} rows",
                self.rows, y.rows
            )));
        }
        let k = self.cols;
        let mut aug = self.hstack(y)?;
        let piv = aug.rref_in_place(k);
        for i in piv.len()..aug.rows {
            if (k..aug.cols).any(|j| aug.get(i, j) != 0) {
                return Ok(None);
            }
        }
        let mut x = Matrix::zeros(&self.field, k, y.cols);
        for (r, &c) in piv.iter().enumerate() {
            for j in 0..y.cols {
                x.set(c, j, aug.get(r, k + j));
            }
        }
        Ok(Some(x))
    }

    /// Whether the column spans of `self` and `other` meet only in zero.
    pub fn intersects_trivially(&self, other: &Matrix) -> Result<bool> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "column vectors of length {} and {}",
                self.rows, other.rows
            )));
        }
        let joint = self.hstack(other)?.rank();
        Ok(joint == self.rank() + other.rank())
    }

    /// Replaces each entry of a GF(p^L) matrix with its L×L multiplication
    /// matrix over GF(p). Row `i` of a block holds the coordinates of
    /// `a · x^i`, so row vectors multiply on the left consistently.
    pub fn companion_expand(&self) -> Result<Matrix> {
        let f = &self.field;
        if f.is_prime_field() {
            return Err(Error::PrimeFieldInput);
        }
        let base = Field::new(f.characteristic(), 1)?;
        let l = f.degree() as usize;
        let basis: Vec<u32> = (0..l)
            .map(|i| {
                let mut c = vec![0; l];
                c[i] = 1;
                f.from_coeffs(&c)
            })
            .collect();
        let mut out = Matrix::zeros(&base, self.rows * l, self.cols * l);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for (bi, &b) in basis.iter().enumerate() {
                    for (bj, c) in f.coeffs(f.mul(a, b)).into_iter().enumerate() {
                        out.set(i * l + bi, j * l + bj, c);
                    }
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{:?}; {}x{}] {:?}", self.field, self.rows, self.cols, self.to_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, m: u32) -> Field {
        Field::new(p, m).unwrap()
    }

    #[test]
    fn rank_basics() {
        let f = gf(2, 1);
        assert_eq!(Matrix::zeros(&f, 0, 0).rank(), 0);
        assert_eq!(Matrix::identity(&f, 3).rank(), 3);
        let m = Matrix::from_rows(&f, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn inverse_of_butterfly_b() {
        let f = gf(2, 2);
        let b = Matrix::from_rows(&f, &[vec![1, 0], vec![2, 1]]).unwrap();
        assert_eq!(b.inverse().unwrap(), b);
        assert_eq!(Matrix::identity(&f, 3).inverse().unwrap(), Matrix::identity(&f, 3));
        assert_eq!(Matrix::zeros(&f, 2, 2).inverse().unwrap_err(), Error::Singular);
    }

    #[test]
    fn solve_right_cases() {
        let f = gf(3, 1);
        let y = Matrix::from_rows(&f, &[vec![1, 2], vec![0, 1]]).unwrap();
        let x = Matrix::identity(&f, 2).solve_right(&y).unwrap().unwrap();
        assert_eq!(x, y);
        let a = Matrix::from_rows(&f, &[vec![1], vec![1]]).unwrap();
        let y = Matrix::from_rows(&f, &[vec![1], vec![2]]).unwrap();
        assert_eq!(a.solve_right(&y).unwrap(), None);
        let bad = Matrix::zeros(&f, 3, 1);
        assert!(matches!(a.solve_right(&bad), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn free_variables_are_zero() {
        let f = gf(2, 1);
        let a = Matrix::from_rows(&f, &[vec![1, 1]]).unwrap();
        let y = Matrix::from_rows(&f, &[vec![1]]).unwrap();
        let x = a.solve_right(&y).unwrap().unwrap();
        assert_eq!(x.to_rows(), vec![vec![1], vec![0]]);
    }

    #[test]
    fn trivial_intersections() {
        let f = gf(2, 2);
        let u = Matrix::from_cols(&f, &[vec![1, 0]], 2).unwrap();
        let v = Matrix::from_cols(&f, &[vec![0, 1]], 2).unwrap();
        assert!(u.intersects_trivially(&v).unwrap());
        let w = Matrix::from_cols(&f, &[vec![1, 1]], 2).unwrap();
        assert!(!w.intersects_trivially(&w).unwrap());
        let b1 = Matrix::from_cols(&f, &[vec![1, 2]], 2).unwrap();
        assert!(b1.intersects_trivially(&w).unwrap());
    }

    #[test]
    fn companion_blocks() {
        let f = gf(2, 2);
        let m = Matrix::from_rows(&f, &[vec![0, 1, 2]]).unwrap();
        let e = m.companion_expand().unwrap();
        assert_eq!(e.shape(), (2, 6));
        assert_eq!(e.select_cols(&[0, 1]).to_rows(), vec![vec![0, 0], vec![0, 0]]);
        assert_eq!(e.select_cols(&[2, 3]).to_rows(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(e.select_cols(&[4, 5]).to_rows(), vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(
            Matrix::identity(&gf(2, 1), 1).companion_expand().unwrap_err(),
            Error::PrimeFieldInput
        );
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = Matrix::identity(&gf(2, 1), 2);
        let b = Matrix::identity(&gf(2, 2), 2);
        assert_eq!(a.mul(&b).unwrap_err(), Error::FieldMismatch);
    }
}
