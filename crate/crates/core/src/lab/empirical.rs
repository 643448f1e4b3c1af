use rayon::prelude::*;
use serde::Serialize;

use super::als::{als_cpd_single, als_sfs_single, AlsOptions, AlsRun};
use super::matching::match_decompositions;
use super::sample::{sample_factors, SampleSpec};
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use crate::tensor::FactorSet;
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalThresholds {
    /// Kept runs must reach `fit ≥ 1 − fit_gate_factor · fit_tol`.
    pub fit_gate_factor: f64,
    /// Congruence with the ground truth counted as a match.
    pub match_congruence: f64,
    /// Mutual congruence below which two kept runs are distinct.
    pub mismatch_congruence: f64,
}

impl Default for EmpiricalThresholds {
    fn default() -> Self {
        Self {
            fit_gate_factor: 10.0,
            match_congruence: 0.99,
            mismatch_congruence: 0.9,
        }
    }
}

impl EmpiricalThresholds {
    pub fn new(
        fit_gate_factor: f64,
        match_congruence: f64,
        mismatch_congruence: f64,
    ) -> Result<Self> {
        let in_unit = |x: f64| (0.0..=1.0).contains(&x);
        if fit_gate_factor.is_nan()
            || fit_gate_factor <= 0.0
            || !in_unit(match_congruence)
            || !in_unit(mismatch_congruence)
        {
            return Err(Error::InvalidParameter(
                "empirical thresholds out of range".into(),
            ));
        }
        Ok(Self {
            fit_gate_factor,
            match_congruence,
            mismatch_congruence,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EmpiricalVerdict {
    UniqueLike,
    NonUniqueLike,
    Inconclusive,
}

/// Log entry for one initialization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalRun {
    pub init: usize,
    pub fit: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub kept: bool,
    pub congruence_to_truth: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalReport {
    pub verdict: EmpiricalVerdict,
    pub spec: SampleSpec,
    pub options: AlsOptions,
    pub thresholds: EmpiricalThresholds,
    pub kept_runs: usize,
    /// Smallest congruence between two kept runs.
    pub min_pairwise_congruence: Option<f64>,
    pub runs: Vec<EmpiricalRun>,
}

fn run_field<S: Scalar>(
    spec: &SampleSpec,
    opts: &AlsOptions,
    th: &EmpiricalThresholds,
) -> Result<EmpiricalReport> {
    let truth: FactorSet<S> = sample_factors(spec, 0)?;
    let t = truth.to_tensor();
    let r = spec.rank;
    let results: Vec<Result<AlsRun<S>>> = (0..opts.n_inits)
        .into_par_iter()
        .map(|n| {
            if spec.dims.sfs {
                als_sfs_single(&t, r, opts, n)
            } else {
                als_cpd_single(&t, r, opts, n)
            }
        })
        .collect();

    let gate = 1.0 - th.fit_gate_factor * opts.fit_tol;
    let mut runs = Vec::with_capacity(results.len());
    let mut kept: Vec<FactorSet<S>> = Vec::new();
    for (init, res) in results.into_iter().enumerate() {
        match res {
            Ok(run) => {
                let keep = run.fit >= gate;
                log::debug!(
                    "init {init}: fit {:.3e} below 1 after {} sweeps",
                    1.0 - run.fit,
                    run.iterations
                );
                let cong = match_decompositions(&truth, &run.factors)?.congruence;
                runs.push(EmpiricalRun {
                    init,
                    fit: Some(run.fit),
                    iterations: run.iterations,
                    converged: run.converged,
                    kept: keep,
                    congruence_to_truth: Some(cong),
                    error: None,
                });
                if keep {
                    kept.push(run.factors);
                }
            }
            Err(e) if e.is_numerical() => runs.push({
                log::warn!("init {init}: {e}");
                EmpiricalRun {
                    init,
                    fit: None,
                    iterations: 0,
                    converged: false,
                    kept: false,
                    congruence_to_truth: None,
                    error: Some(e.to_string()),
                }
            }),
            Err(e) => return Err(e),
        }
    }

    let mut min_pair: Option<f64> = None;
    for x in 0..kept.len() {
        for y in x + 1..kept.len() {
            let c = match_decompositions(&kept[x], &kept[y])?.congruence;
            min_pair = Some(min_pair.map_or(c, |m| m.min(c)));
        }
    }
    let all_match = runs.iter().filter(|r| r.kept).all(|r| {
        r.congruence_to_truth
            .is_some_and(|c| c >= th.match_congruence)
    });
    let verdict = if kept.len() >= 2 && all_match {
        EmpiricalVerdict::UniqueLike
    } else if min_pair.is_some_and(|c| c < th.mismatch_congruence) {
        EmpiricalVerdict::NonUniqueLike
    } else {
        EmpiricalVerdict::Inconclusive
    };
    Ok(EmpiricalReport {
        verdict,
        spec: *spec,
        options: *opts,
        thresholds: *th,
        kept_runs: kept.len(),
        min_pairwise_congruence: min_pair,
        runs,
    })
}

/// Fits a random ground-truth tensor (trial 0 of `spec`) from `opts.n_inits`
/// random starts and compares the well-fitting solutions with each other and
/// with the truth.
pub fn empirical_uniqueness(spec: &SampleSpec, opts: &AlsOptions) -> Result<EmpiricalReport> {
    empirical_uniqueness_with(spec, opts, &EmpiricalThresholds::default())
}

pub fn empirical_uniqueness_with(
    spec: &SampleSpec,
    opts: &AlsOptions,
    th: &EmpiricalThresholds,
) -> Result<EmpiricalReport> {
    match spec.field {
        Field::Real => run_field::<f64>(spec, opts, th),
        Field::Complex => run_field::<Complex64>(spec, opts, th),
    }
}
