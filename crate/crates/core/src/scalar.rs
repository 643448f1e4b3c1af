//! Scalar abstraction over the real and complex fields.
//!
//! Every numerical routine in the crate is generic over [`Scalar`], which is
//! implemented for `f32`, `f64`, `Complex<f32>` and `Complex<f64>`. The field
//! a scalar type belongs to is available at compile time through
//! [`Scalar::FIELD`].

use std::fmt;

use nalgebra::{ComplexField, RealField};
use num_complex::Complex;
use num_traits::{FromPrimitive, NumAssign, One, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// The ground field of a matrix or tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

/// Real scalars: the modulus type of every [`Scalar`].
pub trait RealScalar: Scalar<Real = Self> + RealField + Copy + PartialOrd + ToPrimitive {}

impl RealScalar for f32 {}
impl RealScalar for f64 {}

/// A field element usable by the linear-algebra kernels.
pub trait Scalar:
    ComplexField<RealField = <Self as Scalar>::Real>
    + Copy
    + Zero
    + One
    + NumAssign
    + FromPrimitive
    + Send
    + Sync
{
    type Real: RealScalar;

    const FIELD: Field;

    /// Builds a scalar from real and imaginary parts. Real scalars drop `im`.
    fn from_parts(re: f64, im: f64) -> Self;

    /// Real and imaginary parts widened to `f64`.
    fn parts(self) -> (f64, f64);

    /// One draw from the standard Gaussian of the field: `N(0,1)` for reals,
    /// independent `N(0,1)` real and imaginary parts for complex scalars.
    fn sample_standard<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Modulus widened to `f64`.
    fn abs_f64(self) -> f64 {
        let (re, im) = self.parts();
        re.hypot(im)
    }

    fn real_from_f64(x: f64) -> Self::Real {
        <Self::Real as FromPrimitive>::from_f64(x).expect("finite f64 converts to the real type")
    }

    fn real_to_f64(x: Self::Real) -> f64 {
        x.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_scalar(self) -> bool {
        let (re, im) = self.parts();
        re.is_finite() && im.is_finite()
    }
}

macro_rules! impl_real_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            type Real = $t;
            const FIELD: Field = Field::Real;

            fn from_parts(re: f64, _im: f64) -> Self {
                re as $t
            }

            fn parts(self) -> (f64, f64) {
                (self as f64, 0.0)
            }

            fn sample_standard<R: Rng + ?Sized>(rng: &mut R) -> Self {
                let x: f64 = rng.sample(StandardNormal);
                x as $t
            }
        }
    };
}

macro_rules! impl_complex_scalar {
    ($t:ty) => {
        impl Scalar for Complex<$t> {
            type Real = $t;
            const FIELD: Field = Field::Complex;

            fn from_parts(re: f64, im: f64) -> Self {
                Complex::new(re as $t, im as $t)
            }

            fn parts(self) -> (f64, f64) {
                (self.re as f64, self.im as f64)
            }

            fn sample_standard<R: Rng + ?Sized>(rng: &mut R) -> Self {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex::new(re as $t, im as $t)
            }
        }
    };
}

impl_real_scalar!(f32);
impl_real_scalar!(f64);
impl_complex_scalar!(f32);
impl_complex_scalar!(f64);
