use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Dense row-major matrix over a field.
///
/// Both dimensions are at least one. Transposition never conjugates; use
/// [`Matrix::adjoint`] for the conjugate transpose.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty(format!("{rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::ShapeMismatch(format!(
                "ragged rows: {} vs {ncols}",
                bad.len()
            )));
        }
        Self::new(rows.len(), ncols, rows.concat())
    }

    /// Builds a matrix from columns of equal length.
    pub fn from_columns(columns: &[Vec<S>]) -> Result<Self> {
        let nrows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != nrows) {
            return Err(Error::ShapeMismatch("ragged columns".into()));
        }
        if nrows == 0 {
            return Err(Error::Empty("no columns".into()));
        }
        Ok(Self::from_fn(nrows, columns.len(), |i, j| columns[j][i]))
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| S::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn diagonal(values: &[S]) -> Self {
        Self::from_fn(values.len(), values.len(), |i, j| {
            if i == j {
                values[i]
            } else {
                S::zero()
            }
        })
    }

    /// Matrix with i.i.d. standard Gaussian entries of the field.
    pub fn random_standard<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(rows, cols, |_, _| S::sample_standard(rng))
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

    pub fn field(&self) -> Field {
        S::FIELD
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<S> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Result<Self> {
        if let Some(&bad) = idx.iter().find(|&&j| j >= self.cols) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                size: self.cols,
            });
        }
        Self::new(
            self.rows,
            idx.len(),
            (0..self.rows)
                .flat_map(|i| idx.iter().map(move |&j| (i, j)))
                .map(|(i, j)| self[(i, j)])
                .collect(),
        )
    }

    pub fn select_rows(&self, idx: &[usize]) -> Result<Self> {
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.rows) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                size: self.rows,
            });
        }
        Self::new(
            idx.len(),
            self.cols,
            idx.iter()
                .flat_map(|&i| self.row(i).iter().copied())
                .collect(),
        )
    }

    /// Plain transpose, no conjugation.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conjugate())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == S::zero() {
                    continue;
                }
                let src = rhs.row(k);
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(S, S) -> S) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                rhs.shape()
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, s: S) -> Self {
        self.map(|x| x * s)
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Multiplies column `j` by `factors[j]`.
    pub fn scale_columns(&self, factors: &[S]) -> Result<Self> {
        if factors.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{} column factors for {} columns",
                factors.len(),
                self.cols
            )));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)] * factors[j]
        }))
    }

    /// Matrix with columns reordered so that column `j` of the result is
    /// column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self> {
        self.select_columns(perm)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|x| x.abs_f64().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn column_norms(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (j, x) in self.row(i).iter().enumerate() {
                acc[j] += x.abs_f64().powi(2);
            }
        }
        acc.into_iter().map(f64::sqrt).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite_scalar())
    }

    /// Converts entry-wise to another scalar type through `(re, im)` parts.
    pub fn convert<T: Scalar>(&self) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| {
                    let (re, im) = x.parts();
                    T::from_parts(re, im)
                })
                .collect(),
        }
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self
            .sub(other)?
            .data
            .iter()
            .map(|x| x.abs_f64())
            .fold(0.0, f64::max))
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<S> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<S>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn rejects_bad_shapes() {
        assert!(Matrix::<f64>::new(0, 3, vec![]).is_err());
        assert!(Matrix::<f64>::new(2, 2, vec![1.0; 3]).is_err());
        assert!(Matrix::<f64>::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn transpose_does_not_conjugate() {
        let m = Matrix::new(
            1,
            2,
            vec![Complex64::new(1.0, 2.0), Complex64::new(0.0, -1.0)],
        )
        .unwrap();
        assert_eq!(m.transpose()[(1, 0)], Complex64::new(0.0, -1.0));
        assert_eq!(m.adjoint()[(1, 0)], Complex64::new(0.0, 1.0));
    }

    #[test]
    fn matmul_small() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let c = a.matmul(&b).unwrap();
        assert_eq!(c.to_rows(), vec![vec![2.0, 1.0], vec![4.0, 3.0]]);
        assert!(a.matmul(&Matrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn select_and_permute() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        let p = a.permute_columns(&[2, 0, 1]).unwrap();
        assert_eq!(p.row(0), &[3.0, 1.0, 2.0]);
        assert!(a.select_columns(&[3]).is_err());
        assert_eq!(a.select_rows(&[1]).unwrap().row(0), &[4.0, 5.0, 6.0]);
    }
}
