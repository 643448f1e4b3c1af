//! Random instances, Monte Carlo checks of the generic conditions, ALS
//! fitting and empirical uniqueness probes.

mod als;
mod empirical;
mod matching;
mod sample;

pub use als::{
    als_cpd, als_cpd_single, als_sfs, als_sfs_single, fit, AlsOptions, AlsRun, MAX_ALS_ITERS,
};
pub use empirical::{
    empirical_uniqueness, empirical_uniqueness_with, EmpiricalReport, EmpiricalRun,
    EmpiricalThresholds, EmpiricalVerdict,
};
pub use matching::{match_decompositions, MatchResult};
pub use sample::{
    monte_carlo_generic_check, sample_factors, sample_field_factors, ConditionTally, GenericRoute,
    MonteCarloSummary, SampleSpec,
};
