//! Dense third-order tensors and factor sets.
//!
//! Entries are stored with `i` varying fastest, then `j`, then `k`.
//! Unfoldings follow a cyclic convention:
//!
//! | mode | shape       | column index | identity              |
//! |------|-------------|--------------|-----------------------|
//! | 1    | `I × KJ`    | `k·J + j`    | `T₁ = A (C ⊙ B)ᵀ`     |
//! | 2    | `J × IK`    | `i·K + k`    | `T₂ = B (A ⊙ C)ᵀ`     |
//! | 3    | `K × JI`    | `j·I + i`    | `T₃ = C (B ⊙ A)ᵀ`     |

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, RankTolerance};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3<S> {
    dims: (usize, usize, usize),
    data: Vec<S>,
}

/// Unfolding mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    One,
    Two,
    Three,
}

impl<S: Scalar> Tensor3<S> {
    pub fn new(dims: (usize, usize, usize), data: Vec<S>) -> Result<Self> {
        let (i, j, k) = dims;
        if i == 0 || j == 0 || k == 0 {
            return Err(Error::Empty(format!("{i}x{j}x{k} tensor")));
        }
        if data.len() != i * j * k {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {i}x{j}x{k} tensor",
                data.len()
            )));
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: (usize, usize, usize)) -> Result<Self> {
        Self::new(dims, vec![S::zero(); dims.0 * dims.1 * dims.2])
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn field(&self) -> Field {
        S::FIELD
    }

    /// Entries, `i` fastest.
    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims.0 * (j + self.dims.1 * k)
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> S {
        self.data[self.offset(i, j, k)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|x| x.abs_f64().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(Self {
            dims: self.dims,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    /// `t_{ijk} = Σ_r A[i,r]·B[j,r]·C[k,r]`.
    pub fn from_factors(f: &FactorSet<S>) -> Self {
        let (ni, nj, nk) = f.dims();
        let mut data = vec![S::zero(); ni * nj * nk];
        for r in 0..f.rank() {
            for k in 0..nk {
                let c = f.c[(k, r)];
                if c == S::zero() {
                    continue;
                }
                for j in 0..nj {
                    let bc = f.b[(j, r)] * c;
                    let base = ni * (j + nj * k);
                    for i in 0..ni {
                        data[base + i] += f.a[(i, r)] * bc;
                    }
                }
            }
        }
        Self {
            dims: (ni, nj, nk),
            data,
        }
    }

    pub fn unfold(&self, mode: Mode) -> Matrix<S> {
        let (ni, nj, nk) = self.dims;
        match mode {
            Mode::One => Matrix::from_fn(ni, nk * nj, |i, c| self.get(i, c % nj, c / nj)),
            Mode::Two => Matrix::from_fn(nj, ni * nk, |j, c| self.get(c / nk, j, c % nk)),
            Mode::Three => Matrix::from_fn(nk, nj * ni, |k, c| self.get(c % ni, c / ni, k)),
        }
    }

    /// Inverse of [`Tensor3::unfold`].
    pub fn fold(m: &Matrix<S>, mode: Mode, dims: (usize, usize, usize)) -> Result<Self> {
        let (ni, nj, nk) = dims;
        let expected = match mode {
            Mode::One => (ni, nk * nj),
            Mode::Two => (nj, ni * nk),
            Mode::Three => (nk, nj * ni),
        };
        if m.shape() != expected {
            return Err(Error::ShapeMismatch(format!(
                "cannot fold {:?} into {dims:?}",
                m.shape()
            )));
        }
        let mut t = Self::zeros(dims)?;
        for k in 0..nk {
            for j in 0..nj {
                for i in 0..ni {
                    let v = match mode {
                        Mode::One => m[(i, k * nj + j)],
                        Mode::Two => m[(j, i * nk + k)],
                        Mode::Three => m[(k, j * ni + i)],
                    };
                    let o = t.offset(i, j, k);
                    t.data[o] = v;
                }
            }
        }
        Ok(t)
    }

    /// The `I×J` slice `(t_{ijk})` for a fixed zero-based `k`.
    pub fn frontal_slice(&self, k: usize) -> Result<Matrix<S>> {
        let (ni, nj, nk) = self.dims;
        if k >= nk {
            return Err(Error::IndexOutOfRange { index: k, size: nk });
        }
        Ok(Matrix::from_fn(ni, nj, |i, j| self.get(i, j, k)))
    }

    /// Whether every frontal slice `S` is square and satisfies
    /// `‖S − Sᵀ‖_F ≤ tol·‖S‖_F`.
    pub fn is_sfs(&self, tol: RankTolerance) -> bool {
        let (ni, nj, nk) = self.dims;
        if ni != nj {
            return false;
        }
        (0..nk).all(|k| {
            let (mut skew, mut total) = (0.0, 0.0);
            for i in 0..ni {
                for j in 0..nj {
                    let x = self.get(i, j, k);
                    skew += (x - self.get(j, i, k)).abs_f64().powi(2);
                    total += x.abs_f64().powi(2);
                }
            }
            skew.sqrt() <= tol.rel_threshold() * total.sqrt()
        })
    }
}

/// Factor matrices `(A, B, C)` of a polyadic decomposition `[A, B, C]_R`.
///
/// When `sfs` is set, `B` is identical to `A`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorSet<S> {
    a: Matrix<S>,
    b: Matrix<S>,
    c: Matrix<S>,
    sfs: bool,
}

impl<S: Scalar> FactorSet<S> {
    pub fn new(a: Matrix<S>, b: Matrix<S>, c: Matrix<S>) -> Result<Self> {
        if a.cols() != b.cols() || a.cols() != c.cols() {
            return Err(Error::ShapeMismatch(format!(
                "factor column counts {}, {}, {}",
                a.cols(),
                b.cols(),
                c.cols()
            )));
        }
        Ok(Self {
            a,
            b,
            c,
            sfs: false,
        })
    }

    /// Factor set of `[A, A, C]_R`.
    pub fn sfs(a: Matrix<S>, c: Matrix<S>) -> Result<Self> {
        let mut f = Self::new(a.clone(), a, c)?;
        f.sfs = true;
        Ok(f)
    }

    pub fn a(&self) -> &Matrix<S> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<S> {
        &self.b
    }

    pub fn c(&self) -> &Matrix<S> {
        &self.c
    }

    pub fn is_sfs(&self) -> bool {
        self.sfs
    }

    pub fn rank(&self) -> usize {
        self.a.cols()
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a.rows(), self.b.rows(), self.c.rows())
    }

    pub fn into_parts(self) -> (Matrix<S>, Matrix<S>, Matrix<S>) {
        (self.a, self.b, self.c)
    }

    pub fn to_tensor(&self) -> Tensor3<S> {
        Tensor3::from_factors(self)
    }

    /// Applies the same column permutation to all three factors.
    pub fn permute_terms(&self, perm: &[usize]) -> Result<Self> {
        Ok(Self {
            a: self.a.permute_columns(perm)?,
            b: self.b.permute_columns(perm)?,
            c: self.c.permute_columns(perm)?,
            sfs: self.sfs,
        })
    }

    /// Rescales the columns of each factor. For an SFS set the B scaling is
    /// ignored and B stays equal to A.
    pub fn scale_terms(&self, alpha: &[S], beta: &[S], gamma: &[S]) -> Result<Self> {
        let a = self.a.scale_columns(alpha)?;
        let b = if self.sfs {
            a.clone()
        } else {
            self.b.scale_columns(beta)?
        };
        Ok(Self {
            a,
            b,
            c: self.c.scale_columns(gamma)?,
            sfs: self.sfs,
        })
    }

    pub fn convert<T: Scalar>(&self) -> FactorSet<T> {
        FactorSet {
            a: self.a.convert(),
            b: self.b.convert(),
            c: self.c.convert(),
            sfs: self.sfs,
        }
    }
}

/// A factor set whose field is only known at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldFactorSet {
    Real(FactorSet<f64>),
    Complex(FactorSet<Complex64>),
}

impl FieldFactorSet {
    pub fn field(&self) -> Field {
        match self {
            FieldFactorSet::Real(_) => Field::Real,
            FieldFactorSet::Complex(_) => Field::Complex,
        }
    }

    pub fn is_sfs(&self) -> bool {
        match self {
            FieldFactorSet::Real(f) => f.is_sfs(),
            FieldFactorSet::Complex(f) => f.is_sfs(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            FieldFactorSet::Real(f) => f.rank(),
            FieldFactorSet::Complex(f) => f.rank(),
        }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        match self {
            FieldFactorSet::Real(f) => f.dims(),
            FieldFactorSet::Complex(f) => f.dims(),
        }
    }
}
