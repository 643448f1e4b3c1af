//! Numerical rank, least squares and subspace bases, all via the SVD.
//!
//! The decomposition itself is delegated to `nalgebra`; everything that
//! interprets singular values (thresholds, pseudo-inverse, kernels) lives here.

use approx::AbsDiffEq;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative singular-value threshold used for every numerical rank decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankTolerance {
    rel_threshold: f64,
}

impl RankTolerance {
    pub const DEFAULT: f64 = 1e-9;

    pub fn new(rel_threshold: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&rel_threshold) {
            return Err(Error::InvalidParameter(format!(
                "rank tolerance {rel_threshold} not in [0, 1)"
            )));
        }
        Ok(Self { rel_threshold })
    }

    pub fn rel_threshold(&self) -> f64 {
        self.rel_threshold
    }

    /// Absolute cutoff for singular values given the largest one.
    pub fn cutoff(&self, sigma_max: f64) -> f64 {
        self.rel_threshold * sigma_max
    }
}

impl Default for RankTolerance {
    fn default() -> Self {
        Self {
            rel_threshold: Self::DEFAULT,
        }
    }
}

const MAX_SVD_ITERS: usize = 100_000;

fn check_finite<S: Scalar>(m: &Matrix<S>) -> Result<()> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(format!(
            "{}x{} matrix",
            m.rows(),
            m.cols()
        )))
    }
}

/// Singular values in non-increasing order (`min(rows, cols)` of them).
pub fn singular_values<S: Scalar>(m: &Matrix<S>) -> Result<Vec<f64>> {
    check_finite(m)?;
    let svd = m
        .to_nalgebra()
        .try_svd(false, false, S::Real::default_epsilon(), MAX_SVD_ITERS)
        .ok_or(Error::DecompositionFailed {
            rows: m.rows(),
            cols: m.cols(),
        })?;
    let mut s: Vec<f64> = svd
        .singular_values
        .iter()
        .map(|&x| S::real_to_f64(x))
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Number of singular values strictly above `tol · σ_max`; zero for the zero matrix.
pub fn rank<S: Scalar>(m: &Matrix<S>, tol: RankTolerance) -> Result<usize> {
    let s = singular_values(m)?;
    Ok(count_above(&s, tol))
}

pub(crate) fn count_above(sorted_desc: &[f64], tol: RankTolerance) -> usize {
    let smax = sorted_desc.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    let cut = tol.cutoff(smax);
    sorted_desc.iter().take_while(|&&s| s > cut).count()
}

/// Thin SVD `M = U Σ Vᴴ` with singular values sorted non-increasingly.
pub(crate) struct ThinSvd<S: Scalar> {
    pub u: DMatrix<S>,
    pub sigma: Vec<f64>,
    pub v_adjoint: DMatrix<S>,
}

pub(crate) fn thin_svd<S: Scalar>(m: &Matrix<S>) -> Result<ThinSvd<S>> {
    check_finite(m)?;
    let svd = m
        .to_nalgebra()
        .try_svd(true, true, S::Real::default_epsilon(), MAX_SVD_ITERS)
        .ok_or(Error::DecompositionFailed {
            rows: m.rows(),
            cols: m.cols(),
        })?;
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v)) => (u, v),
        _ => {
            return Err(Error::DecompositionFailed {
                rows: m.rows(),
                cols: m.cols(),
            })
        }
    };
    let sigma: Vec<f64> = svd
        .singular_values
        .iter()
        .map(|&x| S::real_to_f64(x))
        .collect();
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    let u = DMatrix::from_fn(u.nrows(), order.len(), |i, j| u[(i, order[j])]);
    let v_adjoint = DMatrix::from_fn(order.len(), v_t.ncols(), |i, j| v_t[(order[i], j)]);
    let sigma = order.iter().map(|&k| sigma[k]).collect();
    Ok(ThinSvd {
        u,
        sigma,
        v_adjoint,
    })
}

/// Minimum-norm least-squares solution of `A X ≈ Y`.
///
/// Singular values of `A` at or below `tol · σ_max` are treated as zero, so a
/// rank-deficient `A` yields the minimum-norm minimizer.
pub fn least_squares<S: Scalar>(
    a: &Matrix<S>,
    y: &Matrix<S>,
    tol: RankTolerance,
) -> Result<Matrix<S>> {
    if a.rows() != y.rows() {
        return Err(Error::ShapeMismatch(format!(
            "least squares with {} rows vs {} rows",
            a.rows(),
            y.rows()
        )));
    }
    check_finite(y)?;
    let svd = thin_svd(a)?;
    let r = count_above(&svd.sigma, tol);
    let y = y.to_nalgebra();
    let mut x = DMatrix::<S>::zeros(a.cols(), y.ncols());
    for k in 0..r {
        let inv = S::from_real(S::real_from_f64(1.0 / svd.sigma[k]));
        // coeffs = (u_kᴴ Y) / σ_k
        let uk = svd.u.column(k);
        for c in 0..y.ncols() {
            let mut acc = S::zero();
            for i in 0..y.nrows() {
                acc += uk[i].conjugate() * y[(i, c)];
            }
            let coeff = acc * inv;
            for j in 0..a.cols() {
                x[(j, c)] += svd.v_adjoint[(k, j)].conjugate() * coeff;
            }
        }
    }
    Ok(Matrix::from_nalgebra(&x))
}

/// Orthonormal basis (as columns) of the right kernel of `m`, or `None` when
/// the kernel is trivial.
pub fn null_space<S: Scalar>(m: &Matrix<S>, tol: RankTolerance) -> Result<Option<Matrix<S>>> {
    // Pad wide matrices with zero rows so the SVD returns a full V.
    let padded;
    let sq = if m.rows() < m.cols() {
        let mut data = m.as_slice().to_vec();
        data.resize(m.cols() * m.cols(), S::zero());
        padded = Matrix::new(m.cols(), m.cols(), data)?;
        &padded
    } else {
        m
    };
    let svd = thin_svd(sq)?;
    let r = count_above(&svd.sigma, tol);
    let n = m.cols();
    if r == n {
        return Ok(None);
    }
    let basis = Matrix::from_fn(n, n - r, |i, j| svd.v_adjoint[(r + j, i)].conjugate());
    Ok(Some(basis))
}

/// Orthonormal basis (as columns) of the column space of `m`, or `None` for
/// the zero matrix.
pub fn range_basis<S: Scalar>(m: &Matrix<S>, tol: RankTolerance) -> Result<Option<Matrix<S>>> {
    let svd = thin_svd(m)?;
    let r = count_above(&svd.sigma, tol);
    if r == 0 {
        return Ok(None);
    }
    Ok(Some(Matrix::from_fn(m.rows(), r, |i, j| svd.u[(i, j)])))
}
