use approx::AbsDiffEq;
use itertools::Itertools;
use num_traits::ToPrimitive;

use super::compound::det_in_place;
use super::svd::{count_above, singular_values, RankTolerance};
use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default limit on the number of columns [`k_rank`] accepts.
pub const DEFAULT_COLUMN_CAP: usize = 25;

/// Kruskal rank with the default column cap.
pub fn k_rank<S: Scalar>(m: &Matrix<S>, tol: RankTolerance) -> Result<usize> {
    k_rank_capped(m, tol, DEFAULT_COLUMN_CAP)
}

/// Largest `k` such that every `k` columns of `m` are linearly independent.
///
/// Columns are first scaled to unit norm, so the result does not depend on
/// column scaling. A column whose norm is at most `tol` times the largest
/// column norm counts as zero and makes the k-rank 0.
///
/// Candidate orders are tried from `min(rows, cols)` downwards; at each order
/// the column subsets are enumerated lexicographically and the scan stops at
/// the first dependent subset.
pub fn k_rank_capped<S: Scalar>(m: &Matrix<S>, tol: RankTolerance, cap: usize) -> Result<usize> {
    if m.cols() > cap {
        return Err(Error::ColumnCapExceeded {
            cols: m.cols(),
            cap,
        });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite("k-rank input".into()));
    }
    let norms = m.column_norms();
    let max_norm = norms.iter().copied().fold(0.0, f64::max);
    if max_norm == 0.0 || norms.iter().any(|&n| n <= tol.cutoff(max_norm)) {
        return Ok(0);
    }
    let inv: Vec<S> = norms.iter().map(|&n| S::from_parts(1.0 / n, 0.0)).collect();
    let unit = m.scale_columns(&inv)?;

    let top = m.rows().min(m.cols());
    for k in (2..=top).rev() {
        if all_subsets_independent(&unit, k, tol)? {
            return Ok(k);
        }
    }
    Ok(1)
}

fn all_subsets_independent<S: Scalar>(
    unit: &Matrix<S>,
    k: usize,
    tol: RankTolerance,
) -> Result<bool> {
    let gram = unit.adjoint().matmul(unit)?;
    // For unit columns σ_max² ≤ k, so det(G) = Π σ² > tol²·k^k implies
    // σ_min / σ_max > tol without an SVD. The second term covers rounding in
    // forming G and its determinant, which is of order (n + k)·ε·k^(k−1).
    let kk = (k as f64).powi(k as i32);
    let eps = S::Real::default_epsilon().to_f64().unwrap_or(f64::EPSILON);
    let rounding = 64.0 * (unit.rows() + k) as f64 * eps;
    let clear = (tol.rel_threshold().powi(2) + rounding) * kk;
    let mut buf = vec![S::zero(); k * k];
    for subset in (0..unit.cols()).combinations(k) {
        for (x, &i) in subset.iter().enumerate() {
            for (y, &j) in subset.iter().enumerate() {
                buf[x * k + y] = gram[(i, j)];
            }
        }
        if det_in_place(&mut buf, k).parts().0 > clear {
            continue;
        }
        let sub = unit.select_columns(&subset)?;
        if count_above(&singular_values(&sub)?, tol) < k {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> RankTolerance {
        RankTolerance::default()
    }

    /// Independent oracle: for every k, check every k-subset by exact rank.
    fn brute_k_rank(m: &Matrix<f64>) -> usize {
        let mut best = 0;
        for k in 1..=m.rows().min(m.cols()) {
            let ok = (0..m.cols())
                .combinations(k)
                .all(|s| rank(&m.select_columns(&s).unwrap(), tol()).unwrap() == k);
            if ok {
                best = k;
            } else {
                break;
            }
        }
        best
    }

    #[test]
    fn plane_with_sum_column() {
        // e1, e2, e1 + e2
        let m = Matrix::from_rows(&[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]]).unwrap();
        assert_eq!(brute_k_rank(&m), 2);
        assert_eq!(k_rank(&m, tol()).unwrap(), 2);
    }

    #[test]
    fn duplicated_column() {
        let m = Matrix::from_rows(&[
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
            vec![2.0, 5.0, 2.0],
        ])
        .unwrap();
        assert_eq!(k_rank(&m, tol()).unwrap(), 1);
    }

    #[test]
    fn zero_column_gives_zero() {
        let m = Matrix::from_rows(&[vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(k_rank(&m, tol()).unwrap(), 0);
    }

    #[test]
    fn random_gaussian_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let m = Matrix::<f64>::random_standard(4, 6, &mut rng);
        assert_eq!(brute_k_rank(&m), 4);
        assert_eq!(k_rank(&m, tol()).unwrap(), 4);
    }

    #[test]
    fn column_cap() {
        let m = Matrix::<f64>::zeros(2, 26);
        assert!(matches!(
            k_rank(&m, tol()),
            Err(Error::ColumnCapExceeded { cols: 26, cap: 25 })
        ));
        assert!(k_rank_capped(&Matrix::<f64>::identity(3), tol(), 2).is_err());
    }

    #[test]
    fn invariant_under_column_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = Matrix::<f64>::random_standard(3, 5, &mut rng);
        let s = m.scale_columns(&[1e-3, 3.0, -2.0, 1e3, 0.5]).unwrap();
        assert_eq!(k_rank(&m, tol()).unwrap(), k_rank(&s, tol()).unwrap());
    }
}
