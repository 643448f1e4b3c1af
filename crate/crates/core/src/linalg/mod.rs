//! Dense linear algebra over ℝ and ℂ.

mod compound;
mod dynamic;
mod krank;
mod matrix;
mod products;
mod svd;

pub use compound::{binomial, compound, determinant, subsets};
pub use dynamic::FieldMatrix;
pub use krank::{k_rank, k_rank_capped, DEFAULT_COLUMN_CAP};
pub use matrix::Matrix;
pub use products::{khatri_rao, kronecker};
pub use svd::{least_squares, null_space, range_basis, rank, singular_values, RankTolerance};

pub(crate) use svd::thin_svd;
