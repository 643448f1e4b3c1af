use num_complex::Complex64;

use super::{compound, k_rank, khatri_rao, kronecker, rank, Matrix, RankTolerance};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// A matrix whose field is only known at run time, e.g. after reading a file.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldMatrix {
    Real(Matrix<f64>),
    Complex(Matrix<Complex64>),
}

macro_rules! dispatch {
    ($self:expr, $m:ident => $body:expr) => {
        match $self {
            FieldMatrix::Real($m) => $body,
            FieldMatrix::Complex($m) => $body,
        }
    };
}

macro_rules! binary {
    ($a:expr, $b:expr, |$x:ident, $y:ident| $body:expr) => {
        match ($a, $b) {
            (FieldMatrix::Real($x), FieldMatrix::Real($y)) => Ok(FieldMatrix::Real($body?)),
            (FieldMatrix::Complex($x), FieldMatrix::Complex($y)) => {
                Ok(FieldMatrix::Complex($body?))
            }
            (a, b) => Err(Error::FieldMismatch {
                expected: a.field().to_string(),
                found: b.field().to_string(),
            }),
        }
    };
}

impl FieldMatrix {
    pub fn field(&self) -> Field {
        match self {
            FieldMatrix::Real(_) => Field::Real,
            FieldMatrix::Complex(_) => Field::Complex,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        dispatch!(self, m => m.shape())
    }

    /// Re-tags the matrix as complex; complex input is returned unchanged.
    pub fn into_complex(self) -> Self {
        match self {
            FieldMatrix::Real(m) => FieldMatrix::Complex(m.convert()),
            c => c,
        }
    }

    pub fn rank(&self, tol: RankTolerance) -> Result<usize> {
        dispatch!(self, m => rank(m, tol))
    }

    pub fn k_rank(&self, tol: RankTolerance) -> Result<usize> {
        dispatch!(self, m => k_rank(m, tol))
    }

    pub fn compound(&self, order: usize) -> Result<Self> {
        match self {
            FieldMatrix::Real(m) => compound(m, order).map(FieldMatrix::Real),
            FieldMatrix::Complex(m) => compound(m, order).map(FieldMatrix::Complex),
        }
    }

    pub fn khatri_rao(&self, other: &Self) -> Result<Self> {
        binary!(self, other, |a, b| khatri_rao(a, b))
    }

    pub fn kronecker(&self, other: &Self) -> Result<Self> {
        binary!(self, other, |a, b| Ok::<_, Error>(kronecker(a, b)))
    }
}
