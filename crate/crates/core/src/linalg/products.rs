use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Kronecker product: entry `(i·p + k, j·q + l)` is `a[i,j]·b[k,l]` for a
/// `p×q` right factor.
pub fn kronecker<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let (p, q) = b.shape();
    Matrix::from_fn(a.rows() * p, a.cols() * q, |r, c| {
        a[(r / p, c / q)] * b[(r % p, c % q)]
    })
}

/// Column-wise Kronecker product. Row `i·J + j` of the result is the
/// entry-wise product of row `i` of `a` and row `j` of `b` (`J = b.rows()`).
pub fn khatri_rao<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
    if a.cols() != b.cols() {
        return Err(Error::ShapeMismatch(format!(
            "Khatri-Rao product needs equal column counts, got {} and {}",
            a.cols(),
            b.cols()
        )));
    }
    let jb = b.rows();
    Ok(Matrix::from_fn(a.rows() * jb, a.cols(), |r, c| {
        a[(r / jb, c)] * b[(r % jb, c)]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn khatri_rao_examples() {
        let kr = khatri_rao(&m(&[&[1.0], &[2.0]]), &m(&[&[3.0], &[4.0]])).unwrap();
        assert_eq!(kr.column(0), vec![3.0, 4.0, 6.0, 8.0]);

        let z = khatri_rao(&m(&[&[1.0, 2.0]]), &Matrix::zeros(3, 2)).unwrap();
        assert_eq!(z, Matrix::zeros(3, 2));

        let e = khatri_rao(&Matrix::<f64>::identity(2), &Matrix::identity(2)).unwrap();
        assert_eq!(e.column(0), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(e.column(1), vec![0.0, 0.0, 0.0, 1.0]);

        assert!(khatri_rao(&Matrix::<f64>::identity(2), &Matrix::identity(3)).is_err());
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(
            kronecker(&Matrix::<f64>::identity(2), &Matrix::identity(2)),
            Matrix::identity(4)
        );
        let b = m(&[&[1.0, -2.0], &[0.5, 3.0]]);
        assert_eq!(kronecker(&m(&[&[1.0]]), &b), b);
        let k = kronecker(&m(&[&[1.0, 2.0]]), &m(&[&[3.0], &[4.0]]));
        assert_eq!(k.to_rows(), vec![vec![3.0, 6.0], vec![4.0, 8.0]]);
    }
}
