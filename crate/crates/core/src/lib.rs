//! Certification toolkit for uniqueness of canonical polyadic decompositions
//! (CPD) of third-order tensors, including decompositions with symmetric
//! frontal slices (SFS / INDSCAL).
//!
//! The crate has four layers:
//!
//! * [`linalg`] and [`tensor`]: dense matrices over ℝ and ℂ, ranks, k-ranks,
//!   compound matrices, Khatri–Rao products, tensor unfoldings.
//! * [`bounds`]: closed-form rank ranges for which a generic decomposition is
//!   unique.
//! * [`certify`]: checks of deterministic sufficient conditions on concrete
//!   factor matrices, with a randomized falsifier for the conditions that are
//!   not directly computable.
//! * [`lab`]: random factor generation, Monte Carlo cross-checks of the generic
//!   bounds, ALS fitting and empirical uniqueness probes.
//!
//! All numerical code is generic over [`Scalar`], implemented for `f32`,
//! `f64`, `Complex<f32>` and `Complex<f64>`.

pub mod bounds;
pub mod certify;
pub mod error;
pub mod lab;
pub mod linalg;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use linalg::{FieldMatrix, Matrix, RankTolerance};
pub use scalar::{Field, RealScalar, Scalar};
pub use tensor::{FactorSet, FieldFactorSet, Mode, Tensor3};

pub use num_complex::{Complex32, Complex64};

pub type RealMatrix = Matrix<f64>;
pub type ComplexMatrix = Matrix<Complex64>;
pub type RealMatrix32 = Matrix<f32>;
pub type ComplexMatrix32 = Matrix<Complex32>;
pub type RealTensor3 = Tensor3<f64>;
pub type ComplexTensor3 = Tensor3<Complex64>;
pub type RealFactorSet = FactorSet<f64>;
pub type ComplexFactorSet = FactorSet<Complex64>;
