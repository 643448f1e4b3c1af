use rayon::prelude::*;
use serde::Serialize;

use super::sample::stream_rng;
use crate::error::{Error, Result};
use crate::linalg::{khatri_rao, least_squares, Matrix, RankTolerance};
use crate::scalar::Scalar;
use crate::tensor::{FactorSet, Mode, Tensor3};

pub const MAX_ALS_ITERS: usize = 100_000;

/// Relative residual treated as an exact fit.
const RESIDUAL_FLOOR: f64 = 1e-13;

/// Random starts draw from streams above this offset, away from the streams
/// used for sampling ground truth.
const INIT_STREAM_BASE: usize = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlsOptions {
    pub max_iters: usize,
    /// Stop once the relative residual `‖T − T̂‖/‖T‖` changes by less than
    /// this fraction between sweeps.
    pub fit_tol: f64,
    pub n_inits: usize,
    pub seed: u64,
}

impl AlsOptions {
    pub fn new(max_iters: usize, fit_tol: f64, n_inits: usize, seed: u64) -> Result<Self> {
        if max_iters == 0 || max_iters > MAX_ALS_ITERS {
            return Err(Error::InvalidParameter(format!(
                "max_iters {max_iters} not in 1..={MAX_ALS_ITERS}"
            )));
        }
        if !(fit_tol > 0.0 && fit_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "fit_tol {fit_tol} must be positive"
            )));
        }
        if n_inits == 0 {
            return Err(Error::InvalidParameter("n_inits must be positive".into()));
        }
        Ok(Self {
            max_iters,
            fit_tol,
            n_inits,
            seed,
        })
    }
}

impl Default for AlsOptions {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            fit_tol: 1e-9,
            n_inits: 20,
            seed: 0,
        }
    }
}

/// One ALS run from one random start.
#[derive(Debug, Clone, PartialEq)]
pub struct AlsRun<S> {
    pub factors: FactorSet<S>,
    pub fit: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Fit after each sweep.
    pub fit_history: Vec<f64>,
}

/// Solves for the factor `X` in `unfolding ≈ X·Zᵀ`.
fn ls_step<S: Scalar>(z: &Matrix<S>, unfolding: &Matrix<S>) -> Result<Matrix<S>> {
    Ok(least_squares(z, &unfolding.transpose(), RankTolerance::new(1e-13)?)?.transpose())
}

/// `1 − ‖T − T̂‖/‖T‖`, with the zero tensor fitting perfectly.
pub fn fit<S: Scalar>(t: &Tensor3<S>, f: &FactorSet<S>) -> Result<f64> {
    let norm = t.frobenius_norm();
    let res = t.sub(&f.to_tensor())?.frobenius_norm();
    if norm == 0.0 {
        return Ok(if res == 0.0 { 1.0 } else { 1.0 - res });
    }
    Ok(1.0 - res / norm)
}

struct Unfoldings<S> {
    t1: Matrix<S>,
    t2: Matrix<S>,
    t3: Matrix<S>,
}

impl<S: Scalar> Unfoldings<S> {
    fn of(t: &Tensor3<S>) -> Self {
        Self {
            t1: t.unfold(Mode::One),
            t2: t.unfold(Mode::Two),
            t3: t.unfold(Mode::Three),
        }
    }
}

fn check_rank(r: usize) -> Result<()> {
    if r == 0 {
        Err(Error::InvalidParameter("rank must be positive".into()))
    } else {
        Ok(())
    }
}

fn iterate<S: Scalar>(
    t: &Tensor3<S>,
    mut factors: FactorSet<S>,
    opts: &AlsOptions,
    sweep: impl Fn(&Unfoldings<S>, &FactorSet<S>) -> Result<FactorSet<S>>,
) -> Result<AlsRun<S>> {
    let u = Unfoldings::of(t);
    let mut history = Vec::new();
    let mut prev_res = f64::INFINITY;
    let mut converged = false;
    for it in 1..=opts.max_iters {
        factors = sweep(&u, &factors)?;
        let f = fit(t, &factors)?;
        if !f.is_finite() {
            return Err(Error::Diverged(it));
        }
        history.push(f);
        let res = 1.0 - f;
        if res <= RESIDUAL_FLOOR || (prev_res - res).abs() < opts.fit_tol * prev_res {
            converged = true;
            break;
        }
        prev_res = res;
    }
    Ok(AlsRun {
        fit: *history.last().unwrap_or(&f64::NAN),
        iterations: history.len(),
        converged,
        fit_history: history,
        factors,
    })
}

fn diverged_on_nonfinite<T>(r: Result<T>, it: usize) -> Result<T> {
    r.map_err(|e| match e {
        Error::NonFinite(_) => Error::Diverged(it),
        e => e,
    })
}

/// Unstructured ALS from the random start with index `init`.
pub fn als_cpd_single<S: Scalar>(
    t: &Tensor3<S>,
    r: usize,
    opts: &AlsOptions,
    init: usize,
) -> Result<AlsRun<S>> {
    check_rank(r)?;
    let (i, j, k) = t.dims();
    let mut rng = stream_rng(opts.seed, INIT_STREAM_BASE + init);
    let a = Matrix::random_standard(i, r, &mut rng);
    let b = Matrix::random_standard(j, r, &mut rng);
    let c = Matrix::random_standard(k, r, &mut rng);
    let start = FactorSet::new(a, b, c)?;
    let run = iterate(t, start, opts, |u, f| {
        let a = ls_step(&khatri_rao(f.c(), f.b())?, &u.t1)?;
        let b = ls_step(&khatri_rao(&a, f.c())?, &u.t2)?;
        let c = ls_step(&khatri_rao(&b, &a)?, &u.t3)?;
        FactorSet::new(a, b, c)
    });
    diverged_on_nonfinite(run, 0)
}

/// Replaces the separate `A` and `B` estimates by one symmetric estimate:
/// per column, align the phase of `b_r` to `a_r` and average the directions,
/// keeping the magnitude `√(‖a_r‖·‖b_r‖)`.
fn symmetrize<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let (rows, r) = a.shape();
    let mut out = Matrix::zeros(rows, r);
    for col in 0..r {
        let u = a.column(col);
        let v = b.column(col);
        let nu = u.iter().map(|x| x.abs_f64().powi(2)).sum::<f64>().sqrt();
        let nv = v.iter().map(|x| x.abs_f64().powi(2)).sum::<f64>().sqrt();
        if nu == 0.0 || nv == 0.0 {
            continue;
        }
        let mut ip = S::zero();
        for (x, y) in u.iter().zip(&v) {
            ip += x.conjugate() * *y;
        }
        // Phase p with v ≈ p·u up to scale.
        let p = if ip.abs_f64() == 0.0 {
            S::one()
        } else {
            ip * S::from_parts(1.0 / ip.abs_f64(), 0.0)
        };
        let mag = (nu * nv).sqrt();
        for row in 0..rows {
            let w = u[row] * S::from_parts(1.0 / nu, 0.0)
                + p.conjugate() * v[row] * S::from_parts(1.0 / nv, 0.0);
            out[(row, col)] = w * S::from_parts(0.5 * mag, 0.0);
        }
    }
    out
}

/// SFS ALS from the random start with index `init`; `B = A` throughout.
pub fn als_sfs_single<S: Scalar>(
    t: &Tensor3<S>,
    r: usize,
    opts: &AlsOptions,
    init: usize,
) -> Result<AlsRun<S>> {
    check_rank(r)?;
    if !t.is_sfs(RankTolerance::new(1e-8)?) {
        return Err(Error::NotSfs);
    }
    let (i, _, k) = t.dims();
    let mut rng = stream_rng(opts.seed, INIT_STREAM_BASE + init);
    let a = Matrix::random_standard(i, r, &mut rng);
    let c = Matrix::random_standard(k, r, &mut rng);
    let start = FactorSet::sfs(a, c)?;
    let run = iterate(t, start, opts, |u, f| {
        let a1 = ls_step(&khatri_rao(f.c(), f.a())?, &u.t1)?;
        let b1 = ls_step(&khatri_rao(&a1, f.c())?, &u.t2)?;
        let a = symmetrize(&a1, &b1);
        let c = ls_step(&khatri_rao(&a, &a)?, &u.t3)?;
        FactorSet::sfs(a, c)
    });
    diverged_on_nonfinite(run, 0)
}

fn best_of<S: Scalar>(runs: Vec<Result<AlsRun<S>>>) -> Result<AlsRun<S>> {
    let mut best: Option<AlsRun<S>> = None;
    let mut first_err = None;
    for run in runs {
        match run {
            Ok(run) => {
                if best.as_ref().is_none_or(|b| run.fit > b.fit) {
                    best = Some(run);
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    best.ok_or_else(|| first_err.unwrap_or(Error::Diverged(0)))
}

/// Best of `opts.n_inits` unstructured ALS runs.
pub fn als_cpd<S: Scalar>(
    t: &Tensor3<S>,
    r: usize,
    opts: &AlsOptions,
) -> Result<(FactorSet<S>, f64)> {
    check_rank(r)?;
    let runs = (0..opts.n_inits)
        .into_par_iter()
        .map(|n| als_cpd_single(t, r, opts, n))
        .collect();
    best_of(runs).map(|b| (b.factors, b.fit))
}

/// Best of `opts.n_inits` SFS ALS runs.
pub fn als_sfs<S: Scalar>(
    t: &Tensor3<S>,
    r: usize,
    opts: &AlsOptions,
) -> Result<(FactorSet<S>, f64)> {
    check_rank(r)?;
    if !t.is_sfs(RankTolerance::new(1e-8)?) {
        return Err(Error::NotSfs);
    }
    let runs = (0..opts.n_inits)
        .into_par_iter()
        .map(|n| als_sfs_single(t, r, opts, n))
        .collect();
    best_of(runs).map(|b| (b.factors, b.fit))
}
