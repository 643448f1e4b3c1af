//! Compound matrices.
//!
//! Row and column index sets of `C_m(M)` are the `m`-subsets of the row and
//! column indices of `M`, enumerated in lexicographic order. That order is
//! part of the public contract.

use itertools::Itertools;

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Binomial coefficient, saturating at `usize::MAX`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

/// Determinant by Gaussian elimination with partial pivoting on the modulus.
/// `buf` holds an `n×n` row-major matrix and is overwritten.
pub(crate) fn det_in_place<S: Scalar>(buf: &mut [S], n: usize) -> S {
    let mut det = S::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| {
                buf[a * n + col]
                    .abs_f64()
                    .total_cmp(&buf[b * n + col].abs_f64())
            })
            .unwrap_or(col);
        if buf[pivot * n + col] == S::zero() {
            return S::zero();
        }
        if pivot != col {
            for j in 0..n {
                buf.swap(col * n + j, pivot * n + j);
            }
            det = -det;
        }
        let p = buf[col * n + col];
        det *= p;
        for r in col + 1..n {
            let f = buf[r * n + col] / p;
            if f == S::zero() {
                continue;
            }
            for j in col..n {
                let v = buf[col * n + j];
                buf[r * n + j] -= f * v;
            }
        }
    }
    det
}

/// Determinant of a square matrix.
pub fn determinant<S: Scalar>(m: &Matrix<S>) -> Result<S> {
    if m.rows() != m.cols() {
        return Err(Error::ShapeMismatch(format!(
            "determinant of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let mut buf = m.as_slice().to_vec();
    Ok(det_in_place(&mut buf, m.rows()))
}

/// The `m`-th compound matrix: all `m×m` minors of `mat`, a
/// `binom(rows, m) × binom(cols, m)` matrix.
pub fn compound<S: Scalar>(mat: &Matrix<S>, m: usize) -> Result<Matrix<S>> {
    let (rows, cols) = mat.shape();
    if m == 0 || m > rows.min(cols) {
        return Err(Error::CompoundOrder { m, rows, cols });
    }
    let row_sets = subsets(rows, m);
    let col_sets = subsets(cols, m);
    let mut buf = vec![S::zero(); m * m];
    let mut data = Vec::with_capacity(row_sets.len() * col_sets.len());
    for rs in &row_sets {
        for cs in &col_sets {
            for (a, &i) in rs.iter().enumerate() {
                for (b, &j) in cs.iter().enumerate() {
                    buf[a * m + b] = mat[(i, j)];
                }
            }
            data.push(det_in_place(&mut buf, m));
        }
    }
    Matrix::new(row_sets.len(), col_sets.len(), data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(25, 12), 5_200_300);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(7, 0), 1);
    }

    #[test]
    fn lexicographic_subsets() {
        assert_eq!(
            subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn determinants() {
        let m = Matrix::from_rows(&[vec![0.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(determinant(&m).unwrap(), -6.0);
        let s = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(determinant(&s).unwrap(), 0.0);
    }

    #[test]
    fn compound_examples() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap();
        assert_eq!(compound(&a, 1).unwrap(), a);
        let c2 = compound(&a, 2).unwrap();
        assert_eq!(c2.shape(), (3, 1));
        let expected: [f64; 3] = [-2.0, -4.0, -2.0];
        for (got, want) in c2.column(0).iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(
            compound(&Matrix::<f64>::identity(3), 2).unwrap(),
            Matrix::identity(3)
        );
        assert!(matches!(compound(&a, 3), Err(Error::CompoundOrder { .. })));
        assert!(compound(&a, 0).is_err());
    }
}
