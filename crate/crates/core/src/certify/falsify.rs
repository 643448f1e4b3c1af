//! Randomized search for counterexamples to the `Um` / `Wm` conditions.
//!
//! A witness is a `λ` (restricted to `range(Cᵀ)` for `Wm`) with
//! `rank(A·diag(λ)·Bᵀ) ≤ m − 1` and `ω(λ) ≥ m`. Each trial is seeded from
//! `(seed, trial)` alone, so results do not depend on scheduling.
//!
//! Two kinds of trial are run:
//!
//! * split trials pick disjoint index sets `F₁`, `F₂` with
//!   `|F₁| + |F₂| = m − 1` and solve the linear system forcing the column space
//!   of `A·diag(λ)·Bᵀ` into `span(A_{F₁})` modulo the directions killed by
//!   `B_{F₂}`; any solution has rank at most `m − 1`.
//! * support trials fix a support `S` with `|S| ≥ m` and alternate between the
//!   best rank-`(m − 1)` column space `U` of the current product and the `λ`
//!   on `S` minimizing `‖(I − UUᴴ)·A·diag(λ)·Bᵀ‖`.
//!
//! Every candidate is re-verified from scratch before it is reported.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    binomial, least_squares, null_space, range_basis, thin_svd, Matrix, RankTolerance,
};
use crate::scalar::Scalar;

/// Subset counts up to this size are enumerated exhaustively; larger families
/// are sampled uniformly.
pub const ENUMERATION_CAP: usize = 5000;

const ALTERNATING_ITERS: usize = 100;

/// Largest residual `‖Cᵀx − λ‖ / ‖λ‖` accepted for a `Wm` witness.
pub const RANGE_RESIDUAL_TOL: f64 = 1e-8;

/// Scalar vector tagged by field, for reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Entries {
    Real(Vec<f64>),
    /// `[re, im]` pairs.
    Complex(Vec<[f64; 2]>),
}

impl Entries {
    pub fn from_scalars<S: Scalar>(v: &[S]) -> Self {
        match S::FIELD {
            crate::Field::Real => Entries::Real(v.iter().map(|s| s.parts().0).collect()),
            crate::Field::Complex => Entries::Complex(
                v.iter()
                    .map(|s| {
                        let (re, im) = s.parts();
                        [re, im]
                    })
                    .collect(),
            ),
        }
    }

    pub fn to_scalars<S: Scalar>(&self) -> Vec<S> {
        match self {
            Entries::Real(v) => v.iter().map(|&x| S::from_parts(x, 0.0)).collect(),
            Entries::Complex(v) => v.iter().map(|&[re, im]| S::from_parts(re, im)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Entries::Real(v) => v.len(),
            Entries::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A verified counterexample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FalsifierCandidate {
    /// Normalized so that `max |λ_r| = 1`.
    pub lambda: Entries,
    /// `λ = Cᵀx` for `Wm` witnesses.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Entries>,
    pub weight: usize,
    pub product_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range_residual: Option<f64>,
}

/// `A·diag(λ)·Bᵀ`.
pub fn weighted_product<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    lambda: &[S],
) -> Result<Matrix<S>> {
    a.scale_columns(lambda)?.matmul(&b.transpose())
}

/// Number of entries with `|λ_r| > tol · max |λ|`.
pub fn weight<S: Scalar>(lambda: &[S], tol: RankTolerance) -> usize {
    let max = lambda.iter().map(|s| s.abs_f64()).fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    lambda
        .iter()
        .filter(|s| s.abs_f64() > tol.cutoff(max))
        .count()
}

/// `Σ |λ_r|·‖a_r‖·‖b_r‖`, an upper bound on `‖A·diag(λ)·Bᵀ‖₂` used as the
/// reference scale for its rank.
fn product_scale<S: Scalar>(a_norms: &[f64], b_norms: &[f64], lambda: &[S]) -> f64 {
    lambda
        .iter()
        .zip(a_norms.iter().zip(b_norms))
        .map(|(l, (x, y))| l.abs_f64() * x * y)
        .sum()
}

/// Rank of `A·diag(λ)·Bᵀ`, counting singular values above
/// `tol · Σ |λ_r|·‖a_r‖·‖b_r‖`. The reference does not shrink when the
/// product cancels, so a product that vanishes by cancellation has rank 0.
pub fn product_rank<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    lambda: &[S],
    tol: RankTolerance,
) -> Result<usize> {
    let scale = product_scale(&a.column_norms(), &b.column_norms(), lambda);
    let sigma = crate::linalg::singular_values(&weighted_product(a, b, lambda)?)?;
    Ok(sigma.iter().filter(|&&s| s > tol.cutoff(scale)).count())
}

fn normalized<S: Scalar>(lambda: &[S]) -> Option<Vec<S>> {
    let max = lambda.iter().map(|s| s.abs_f64()).fold(0.0, f64::max);
    if max == 0.0 || !max.is_finite() {
        return None;
    }
    let inv = S::from_parts(1.0 / max, 0.0);
    Some(lambda.iter().map(|&l| l * inv).collect())
}

/// Checks `λ` against the definition. Returns the normalized candidate when
/// it is a witness: product rank at most `m − 1`, weight at least `m`, the
/// `m`-th largest `|λ_r|` at least `√tol` (so the weight is not an artifact of
/// round-off), and for `Wm` a solution of `Cᵀx = λ` with small residual.
pub fn verify_witness<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    c: Option<&Matrix<S>>,
    m: usize,
    lambda: &[S],
    tol: RankTolerance,
) -> Result<Option<FalsifierCandidate>> {
    let r = a.cols();
    if b.cols() != r || lambda.len() != r || c.is_some_and(|c| c.cols() != r) {
        return Err(Error::ShapeMismatch(format!(
            "witness of length {} for {} and {} columns",
            lambda.len(),
            r,
            b.cols()
        )));
    }
    if m == 0 {
        return Ok(None);
    }
    let Some(lambda) = normalized(lambda) else {
        return Ok(None);
    };
    let w = weight(&lambda, tol);
    let mut mags: Vec<f64> = lambda.iter().map(|s| s.abs_f64()).collect();
    mags.sort_by(|x, y| y.total_cmp(x));
    if w < m || mags[m - 1] < tol.rel_threshold().sqrt() {
        return Ok(None);
    }
    let pr = product_rank(a, b, &lambda, tol)?;
    if pr + 1 > m {
        return Ok(None);
    }
    let (x, range_residual) = match c {
        None => (None, None),
        Some(c) => {
            let ct = c.transpose();
            let lam = Matrix::new(r, 1, lambda.clone())?;
            let x = least_squares(&ct, &lam, RankTolerance::new(1e-12)?)?;
            let res = ct.matmul(&x)?.sub(&lam)?.frobenius_norm() / lam.frobenius_norm();
            if res.is_nan() || res > RANGE_RESIDUAL_TOL {
                return Ok(None);
            }
            (Some(Entries::from_scalars(x.as_slice())), Some(res))
        }
    };
    Ok(Some(FalsifierCandidate {
        lambda: Entries::from_scalars(&lambda),
        x,
        weight: w,
        product_rank: pr,
        range_residual,
    }))
}

/// Result of a falsifier run.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub witness: Option<FalsifierCandidate>,
    /// Trials performed (all of them when no witness was found).
    pub trials: usize,
    pub split_trials: usize,
    pub note: Option<String>,
}

/// The `k`-subset of `0..n` at position `idx` in lexicographic order.
pub(crate) fn unrank_subset(n: usize, k: usize, mut idx: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for left in (1..=k).rev() {
        loop {
            // Subsets whose next element is `next`.
            let c = binomial(n - next - 1, left - 1);
            if idx < c {
                out.push(next);
                next += 1;
                break;
            }
            idx -= c;
            next += 1;
        }
    }
    out
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut s = index::sample(rng, n, k).into_vec();
    s.sort_unstable();
    s
}

fn random_unit<S: Scalar>(rng: &mut ChaCha8Rng, d: usize) -> Vec<S> {
    let v: Vec<S> = (0..d).map(|_| S::sample_standard(rng)).collect();
    let n = v.iter().map(|s| s.abs_f64().powi(2)).sum::<f64>().sqrt();
    let inv = S::from_parts(1.0 / n.max(f64::MIN_POSITIVE), 0.0);
    v.into_iter().map(|s| s * inv).collect()
}

/// `basis · g` for a random unit `g`.
fn random_combination<S: Scalar>(rng: &mut ChaCha8Rng, basis: &Matrix<S>) -> Result<Vec<S>> {
    let g = random_unit::<S>(rng, basis.cols());
    Ok(basis.matmul(&Matrix::new(g.len(), 1, g)?)?.into_vec())
}

/// Projector onto the orthogonal complement of the span of `cols`.
fn complement_projector<S: Scalar>(
    mat: &Matrix<S>,
    cols: &[usize],
    tol: RankTolerance,
) -> Result<Matrix<S>> {
    let n = mat.rows();
    let id = Matrix::<S>::identity(n);
    if cols.is_empty() {
        return Ok(id);
    }
    match range_basis(&mat.select_columns(cols)?, tol)? {
        None => Ok(id),
        Some(u) => id.sub(&u.matmul(&u.adjoint())?),
    }
}

struct Problem<'a, S: Scalar> {
    a: &'a Matrix<S>,
    b: &'a Matrix<S>,
    c: Option<&'a Matrix<S>>,
    /// Orthonormal basis of the admissible `λ` (`R × d`).
    q: Matrix<S>,
    m: usize,
    tol: RankTolerance,
    a_norms: Vec<f64>,
    b_norms: Vec<f64>,
}

impl<S: Scalar> Problem<'_, S> {
    fn r(&self) -> usize {
        self.a.cols()
    }

    fn split_count(&self) -> usize {
        binomial(self.r(), self.m - 1).saturating_mul(
            1usize
                .checked_shl((self.m - 1) as u32)
                .unwrap_or(usize::MAX),
        )
    }

    fn verify(&self, lambda: &[S]) -> Result<Option<FalsifierCandidate>> {
        verify_witness(self.a, self.b, self.c, self.m, lambda, self.tol)
    }

    /// Linear trial for a given split of `m − 1` indices.
    fn split_trial(
        &self,
        rng: &mut ChaCha8Rng,
        f1: &[usize],
        f2: &[usize],
    ) -> Result<Option<FalsifierCandidate>> {
        let p = complement_projector(self.a, f1, self.tol)?;
        let pa = p.matmul(self.a)?;
        // Columns n with b_fᵀ n = 0 for f ∈ F₂.
        let nb = if f2.is_empty() {
            Matrix::<S>::identity(self.b.rows())
        } else {
            match null_space(&self.b.select_columns(f2)?.transpose(), self.tol)? {
                Some(n) => n,
                None => return self.full_space_trial(rng),
            }
        };
        let nbb = nb.transpose().matmul(self.b)?;
        let (i, d) = (pa.rows(), nbb.rows());
        let g = Matrix::from_fn(i * d, self.r(), |row, r| {
            pa[(row / d, r)] * nbb[(row % d, r)]
        });
        let gq = g.matmul(&self.q)?;
        let Some(y) = null_space(&gq, self.tol)? else {
            return Ok(None);
        };
        let lambda = self
            .q
            .matmul(&Matrix::new(y.rows(), 1, random_combination(rng, &y)?)?)?;
        self.verify(lambda.as_slice())
    }

    /// `B_{F₂}` spans everything: every `λ` gives a product of rank ≤ |F₂|.
    fn full_space_trial(&self, rng: &mut ChaCha8Rng) -> Result<Option<FalsifierCandidate>> {
        let lambda = random_combination(rng, &self.q)?;
        self.verify(&lambda)
    }

    /// Alternating trial restricted to a support.
    fn support_trial(
        &self,
        rng: &mut ChaCha8Rng,
        support: &[usize],
    ) -> Result<Option<FalsifierCandidate>> {
        let r = self.r();
        let outside: Vec<usize> = (0..r)
            .filter(|x| support.binary_search(x).is_err())
            .collect();
        let qs = if outside.is_empty() {
            self.q.clone()
        } else {
            match null_space(&self.q.select_rows(&outside)?, self.tol)? {
                Some(y) => self.q.matmul(&y)?,
                None => return Ok(None),
            }
        };
        let d = qs.cols();
        let k = self.m - 1;
        let bt = self.b.transpose();
        let mut y = random_unit::<S>(rng, d);
        for _ in 0..ALTERNATING_ITERS {
            let lambda = qs.matmul(&Matrix::new(d, 1, y.clone())?)?.into_vec();
            let prod = weighted_product(self.a, self.b, &lambda)?;
            let svd = thin_svd(&prod)?;
            let scale = product_scale(&self.a_norms, &self.b_norms, &lambda);
            if svd.sigma.get(k).copied().unwrap_or(0.0) <= 0.01 * self.tol.cutoff(scale) {
                break;
            }
            let kk = k.min(svd.sigma.len());
            let u = Matrix::from_fn(prod.rows(), kk.max(1), |i, j| {
                if j < kk {
                    svd.u[(i, j)]
                } else {
                    S::zero()
                }
            });
            let p = Matrix::<S>::identity(prod.rows()).sub(&u.matmul(&u.adjoint())?)?;
            let pa = p.matmul(self.a)?;
            // Column j of H is vec(P·A·diag(q_j)·Bᵀ).
            let cols: Vec<Vec<S>> = (0..d)
                .map(|j| {
                    let qj = qs.column(j);
                    Ok(pa.scale_columns(&qj)?.matmul(&bt)?.into_vec())
                })
                .collect::<Result<_>>()?;
            let h = Matrix::from_columns(&cols)?;
            y = match null_space(&h, self.tol)? {
                Some(nb) => random_combination(rng, &nb)?,
                None => {
                    let hs = thin_svd(&h)?;
                    let last = hs.sigma.len() - 1;
                    (0..d)
                        .map(|j| hs.v_adjoint[(last, j)].conjugate())
                        .collect()
                }
            };
        }
        let lambda = qs.matmul(&Matrix::new(d, 1, y)?)?.into_vec();
        self.verify(&lambda)
    }

    fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        rng
    }

    fn run(&self, trials: usize, seed: u64) -> Result<SearchResult> {
        let r = self.r();
        let m = self.m;
        let splits = self.split_count();
        let exhaustive_splits = splits <= ENUMERATION_CAP;
        let split_trials = if exhaustive_splits {
            splits.min(trials.div_ceil(2))
        } else {
            trials.div_ceil(2)
        };
        let per_mask = 1usize << (m - 1);

        // Support sizes m..=R, each contributing min(binom, cap) slots.
        let slots: Vec<(usize, usize, bool)> = (m..=r)
            .map(|s| {
                let count = binomial(r, s);
                (s, count.min(ENUMERATION_CAP), count <= ENUMERATION_CAP)
            })
            .collect();
        let cycle: usize = slots.iter().map(|x| x.1).sum();

        let found = (0..trials).into_par_iter().find_map_first(|t| {
            let mut rng = Self::trial_rng(seed, t);
            let res = if t < split_trials {
                let (union, mask) = if exhaustive_splits {
                    (unrank_subset(r, m - 1, t / per_mask), t % per_mask)
                } else {
                    (
                        random_subset(&mut rng, r, m - 1),
                        rng.random_range(0..per_mask),
                    )
                };
                let (f1, f2): (Vec<usize>, Vec<usize>) = {
                    let mut f1 = Vec::new();
                    let mut f2 = Vec::new();
                    for (bit, &idx) in union.iter().enumerate() {
                        if mask >> bit & 1 == 0 {
                            f1.push(idx);
                        } else {
                            f2.push(idx);
                        }
                    }
                    (f1, f2)
                };
                self.split_trial(&mut rng, &f1, &f2)
            } else {
                let mut j = (t - split_trials) % cycle;
                let mut support = Vec::new();
                for &(s, n, exhaustive) in &slots {
                    if j < n {
                        support = if exhaustive {
                            unrank_subset(r, s, j)
                        } else {
                            random_subset(&mut rng, r, s)
                        };
                        break;
                    }
                    j -= n;
                }
                self.support_trial(&mut rng, &support)
            };
            match res {
                Ok(Some(c)) => Some(Ok((t, c))),
                Ok(None) => None,
                Err(e) => Some(Err(e)),
            }
        });
        match found.transpose()? {
            Some((t, c)) => Ok(SearchResult {
                witness: Some(c),
                trials: t + 1,
                split_trials: split_trials.min(t + 1),
                note: None,
            }),
            None => Ok(SearchResult {
                witness: None,
                trials,
                split_trials,
                note: None,
            }),
        }
    }
}

fn check_pair<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>, m: usize) -> Result<()> {
    if a.cols() != b.cols() {
        return Err(Error::ShapeMismatch(format!(
            "{} vs {} columns",
            a.cols(),
            b.cols()
        )));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    Ok(())
}

fn empty_result(trials: usize, note: &str) -> SearchResult {
    SearchResult {
        witness: None,
        trials,
        split_trials: 0,
        note: Some(note.into()),
    }
}

/// Searches for `λ ∈ F^R` violating `Um` for the pair `(A, B)`.
pub fn search_um<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    m: usize,
    trials: usize,
    seed: u64,
    tol: RankTolerance,
) -> Result<SearchResult> {
    check_pair(a, b, m)?;
    if m > a.cols() {
        return Ok(empty_result(0, "m exceeds R: no λ has weight m"));
    }
    if trials == 0 {
        return Ok(empty_result(0, "no trials requested"));
    }
    let problem = Problem {
        a,
        b,
        c: None,
        q: Matrix::identity(a.cols()),
        m,
        tol,
        a_norms: a.column_norms(),
        b_norms: b.column_norms(),
    };
    problem.run(trials, seed)
}

/// Searches for `λ ∈ range(Cᵀ)` violating `Wm` for `(A, B, C)`. When `C` has
/// full column rank the search is identical to [`search_um`].
pub fn search_wm<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    c: &Matrix<S>,
    m: usize,
    trials: usize,
    seed: u64,
    tol: RankTolerance,
) -> Result<SearchResult> {
    check_pair(a, b, m)?;
    if c.cols() != a.cols() {
        return Err(Error::ShapeMismatch(format!(
            "C has {} columns, expected {}",
            c.cols(),
            a.cols()
        )));
    }
    if m > a.cols() {
        return Ok(empty_result(0, "m exceeds R: no λ has weight m"));
    }
    if trials == 0 {
        return Ok(empty_result(0, "no trials requested"));
    }
    let q = match range_basis(&c.transpose(), tol)? {
        None => return Ok(empty_result(0, "range(Cᵀ) is trivial")),
        Some(q) if q.cols() == a.cols() => Matrix::identity(a.cols()),
        Some(q) => q,
    };
    let problem = Problem {
        a,
        b,
        c: Some(c),
        q,
        m,
        tol,
        a_norms: a.column_norms(),
        b_norms: b.column_norms(),
    };
    problem.run(trials, seed)
}
