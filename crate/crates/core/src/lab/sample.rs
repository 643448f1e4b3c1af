use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::ProblemDims;
use crate::certify::{check_cm_condition, CertParams, Status};
use crate::error::{Error, Result};
use crate::linalg::{binomial, Matrix, RankTolerance};
use crate::scalar::{Field, Scalar};
use crate::tensor::{FactorSet, FieldFactorSet};
use crate::Complex64;

/// Random instances of a given shape and rank.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleSpec {
    pub dims: ProblemDims,
    pub rank: usize,
    pub field: Field,
    pub seed: u64,
    pub trials: usize,
}

impl SampleSpec {
    pub fn new(
        dims: ProblemDims,
        rank: usize,
        field: Field,
        seed: u64,
        trials: usize,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidParameter("rank must be positive".into()));
        }
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be positive".into()));
        }
        Ok(Self {
            dims,
            rank,
            field,
            seed,
            trials,
        })
    }
}

/// Deterministic generator for `(seed, stream)`.
pub(crate) fn stream_rng(seed: u64, stream: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Factors with i.i.d. standard Gaussian entries (independent real and
/// imaginary parts over ℂ), drawn as `A`, then `B` unless SFS, then `C`.
pub fn sample_factors<S: Scalar>(spec: &SampleSpec, trial: usize) -> Result<FactorSet<S>> {
    if S::FIELD != spec.field {
        return Err(Error::FieldMismatch {
            expected: spec.field.to_string(),
            found: S::FIELD.to_string(),
        });
    }
    let mut rng = stream_rng(spec.seed, trial);
    let d = spec.dims;
    let a = Matrix::random_standard(d.i, spec.rank, &mut rng);
    if d.sfs {
        let c = Matrix::random_standard(d.k, spec.rank, &mut rng);
        FactorSet::sfs(a, c)
    } else {
        let b = Matrix::random_standard(d.j, spec.rank, &mut rng);
        let c = Matrix::random_standard(d.k, spec.rank, &mut rng);
        FactorSet::new(a, b, c)
    }
}

pub fn sample_field_factors(spec: &SampleSpec, trial: usize) -> Result<FieldFactorSet> {
    Ok(match spec.field {
        Field::Real => FieldFactorSet::Real(sample_factors(spec, trial)?),
        Field::Complex => FieldFactorSet::Complex(sample_factors::<Complex64>(spec, trial)?),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GenericRoute {
    /// Three compound Khatri–Rao conditions for unstructured CPD.
    Prop17,
    /// Two compound Khatri–Rao conditions for SFS-CPD.
    Prop13,
}

/// One compound Khatri–Rao condition `C_m(X) ⊙ C_m(Y)` full column rank.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionTally {
    pub label: String,
    pub m: usize,
    pub passes: usize,
    /// Set when the condition cannot hold for these dimensions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub spec: SampleSpec,
    pub route: GenericRoute,
    pub conditions: Vec<ConditionTally>,
    /// Trials in which at least one condition holds.
    pub any_pass_trials: usize,
    /// Whether some trial exhibits the full-rank instance the route asks for.
    pub generic_uniqueness_evidence: bool,
}

struct CondSpec {
    label: &'static str,
    x: usize,
    y: usize,
    m: usize,
}

fn gate(rows_x: usize, rows_y: usize, r: usize, m: usize) -> Option<String> {
    if m > rows_x.min(rows_y).min(r) {
        return Some(format!("m = {m} exceeds min(rows, R)"));
    }
    let rows = binomial(rows_x, m).saturating_mul(binomial(rows_y, m));
    let cols = binomial(r, m);
    (cols > rows).then(|| format!("{cols} columns exceed {rows} rows"))
}

fn run_checks<S: Scalar>(
    spec: &SampleSpec,
    route: GenericRoute,
    tol: RankTolerance,
) -> Result<MonteCarloSummary> {
    let p = &CertParams {
        tol,
        ..CertParams::default()
    };
    let d = spec.dims;
    let r = spec.rank;
    let m_of = |n: usize| r - n.min(r) + 2;
    // Factor indices: 0 = A, 1 = B, 2 = C.
    let conds: Vec<CondSpec> = match route {
        GenericRoute::Prop17 => vec![
            CondSpec {
                label: "C_m(A) (.) C_m(B), m = R - min(K,R) + 2",
                x: 0,
                y: 1,
                m: m_of(d.k),
            },
            CondSpec {
                label: "C_m(B) (.) C_m(C), m = R - min(I,R) + 2",
                x: 1,
                y: 2,
                m: m_of(d.i),
            },
            CondSpec {
                label: "C_m(C) (.) C_m(A), m = R - min(J,R) + 2",
                x: 2,
                y: 0,
                m: m_of(d.j),
            },
        ],
        GenericRoute::Prop13 => vec![
            CondSpec {
                label: "C_m(A) (.) C_m(A), m = R - min(K,R) + 2",
                x: 0,
                y: 0,
                m: m_of(d.k),
            },
            CondSpec {
                label: "C_m(A) (.) C_m(C), m = R - min(I,R) + 2",
                x: 0,
                y: 2,
                m: m_of(d.i),
            },
        ],
    };
    let rows = [d.i, d.j, d.k];
    let gates: Vec<Option<String>> = conds
        .iter()
        .map(|c| gate(rows[c.x], rows[c.y], r, c.m))
        .collect();

    let per_trial: Vec<Vec<bool>> = (0..spec.trials)
        .into_par_iter()
        .map(|t| {
            let f = sample_factors::<S>(spec, t)?;
            let mats = [f.a(), f.b(), f.c()];
            conds
                .iter()
                .zip(&gates)
                .map(|(c, g)| {
                    if g.is_some() {
                        return Ok(false);
                    }
                    Ok(check_cm_condition(mats[c.x], mats[c.y], c.m, p)?.status == Status::Proven)
                })
                .collect::<Result<Vec<bool>>>()
        })
        .collect::<Result<_>>()?;

    let conditions = conds
        .iter()
        .zip(gates)
        .enumerate()
        .map(|(n, (c, gate))| ConditionTally {
            label: c.label.into(),
            m: c.m,
            passes: per_trial.iter().filter(|t| t[n]).count(),
            gate,
        })
        .collect();
    let any_pass_trials = per_trial.iter().filter(|t| t.iter().any(|&x| x)).count();
    Ok(MonteCarloSummary {
        spec: *spec,
        route,
        conditions,
        any_pass_trials,
        generic_uniqueness_evidence: any_pass_trials > 0,
    })
}

/// Evaluates the compound Khatri–Rao conditions of `route` on `spec.trials`
/// random instances. A single passing trial is the random example the
/// generic statement asks for.
pub fn monte_carlo_generic_check(
    spec: &SampleSpec,
    route: GenericRoute,
    tol: RankTolerance,
) -> Result<MonteCarloSummary> {
    match (route, spec.dims.sfs) {
        (GenericRoute::Prop13, false) => {
            return Err(Error::InvalidParameter(
                "SFS route requires SFS dimensions".into(),
            ))
        }
        (GenericRoute::Prop17, true) => {
            return Err(Error::InvalidParameter(
                "unstructured route requires unstructured dimensions".into(),
            ))
        }
        _ => {}
    }
    match spec.field {
        Field::Real => run_checks::<f64>(spec, route, tol),
        Field::Complex => run_checks::<Complex64>(spec, route, tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::k_rank;
    use crate::RankTolerance as Tol;

    fn spec(dims: ProblemDims, r: usize, trials: usize) -> SampleSpec {
        SampleSpec::new(dims, r, Field::Real, 7, trials).unwrap()
    }

    #[test]
    fn deterministic_sampling() {
        let s = spec(ProblemDims::cpd(3, 4, 5).unwrap(), 3, 1);
        assert_eq!(
            sample_factors::<f64>(&s, 2).unwrap(),
            sample_factors::<f64>(&s, 2).unwrap()
        );
        assert_ne!(
            sample_factors::<f64>(&s, 2).unwrap(),
            sample_factors::<f64>(&s, 3).unwrap()
        );
        assert!(sample_factors::<Complex64>(&s, 0).is_err());
    }

    #[test]
    fn sfs_sampling_gives_sfs_tensor() {
        let s = spec(ProblemDims::sfs(4, 3).unwrap(), 5, 1);
        let f = sample_factors::<f64>(&s, 0).unwrap();
        assert!(f.is_sfs());
        assert!(f.to_tensor().is_sfs(Tol::new(1e-12).unwrap()));
    }

    #[test]
    fn generic_k_rank() {
        let s = spec(ProblemDims::cpd(4, 4, 4).unwrap(), 6, 1);
        for t in 0..200 {
            let f = sample_factors::<f64>(&s, t).unwrap();
            assert_eq!(k_rank(f.a(), Tol::default()).unwrap(), 4);
        }
    }

    #[test]
    fn prop17_inside_kruskal_range() {
        let s = spec(ProblemDims::cpd(4, 5, 6).unwrap(), 6, 10);
        let sum = monte_carlo_generic_check(&s, GenericRoute::Prop17, Tol::default()).unwrap();
        assert_eq!(sum.any_pass_trials, 10);
    }

    #[test]
    fn prop17_far_outside() {
        let s = spec(ProblemDims::cpd(4, 5, 6).unwrap(), 10, 3);
        let sum = monte_carlo_generic_check(&s, GenericRoute::Prop17, Tol::default()).unwrap();
        assert_eq!(sum.any_pass_trials, 0);
        assert!(sum.conditions.iter().all(|c| c.gate.is_some()));
    }

    #[test]
    fn prop13_sfs() {
        let s = spec(ProblemDims::sfs(8, 20).unwrap(), 20, 2);
        let sum = monte_carlo_generic_check(&s, GenericRoute::Prop13, Tol::default()).unwrap();
        assert_eq!(sum.conditions[0].passes, 2);
        assert!(monte_carlo_generic_check(&s, GenericRoute::Prop17, Tol::default()).is_err());
    }
}
