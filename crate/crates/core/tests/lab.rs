use proptest::prelude::*;
use tenuniq::bounds::ProblemDims;
use tenuniq::lab::{
    als_cpd_single, als_sfs_single, empirical_uniqueness, fit, match_decompositions,
    monte_carlo_generic_check, sample_factors, AlsOptions, GenericRoute, SampleSpec,
};
use tenuniq::{Complex64, Field, RankTolerance, RealFactorSet};

fn spec(dims: ProblemDims, r: usize, field: Field, seed: u64, trials: usize) -> SampleSpec {
    SampleSpec::new(dims, r, field, seed, trials).unwrap()
}

fn real_set(i: usize, j: usize, k: usize, r: usize, seed: u64) -> RealFactorSet {
    sample_factors(
        &spec(ProblemDims::cpd(i, j, k).unwrap(), r, Field::Real, seed, 1),
        0,
    )
    .unwrap()
}

#[test]
fn prop17_passes_for_every_seed() {
    let dims = ProblemDims::cpd(4, 5, 6).unwrap();
    for seed in 0..100 {
        let sum = monte_carlo_generic_check(
            &spec(dims, 6, Field::Real, seed, 1),
            GenericRoute::Prop17,
            RankTolerance::default(),
        )
        .unwrap();
        assert_eq!(sum.any_pass_trials, 1, "seed {seed}");
    }
}

#[test]
fn prop13_sfs_example() {
    let s = spec(ProblemDims::sfs(8, 20).unwrap(), 20, Field::Real, 3, 10);
    let sum =
        monte_carlo_generic_check(&s, GenericRoute::Prop13, RankTolerance::default()).unwrap();
    assert_eq!(sum.conditions[0].passes, 10);
    assert!(sum.generic_uniqueness_evidence);
}

#[test]
fn sampling_is_deterministic_and_field_aware() {
    let s = spec(ProblemDims::cpd(3, 4, 5).unwrap(), 4, Field::Complex, 9, 1);
    let x = sample_factors::<Complex64>(&s, 3).unwrap();
    assert_eq!(x, sample_factors::<Complex64>(&s, 3).unwrap());
    assert!(x.a().as_slice().iter().any(|z| z.im != 0.0));
    assert!(sample_factors::<f64>(&s, 3).is_err());
}

#[test]
fn empirical_report_independent_of_thread_count() {
    let s = spec(ProblemDims::cpd(3, 4, 5).unwrap(), 4, Field::Real, 3, 1);
    let opts = AlsOptions {
        n_inits: 6,
        max_iters: 300,
        seed: 3,
        ..AlsOptions::default()
    };
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let a = single.install(|| empirical_uniqueness(&s, &opts).unwrap());
    let b = empirical_uniqueness(&s, &opts).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sfs_als_keeps_b_equal_to_a() {
    let s = spec(ProblemDims::sfs(4, 5).unwrap(), 3, Field::Real, 2, 1);
    let t = sample_factors::<f64>(&s, 0).unwrap().to_tensor();
    let run = als_sfs_single(
        &t,
        3,
        &AlsOptions {
            max_iters: 50,
            ..AlsOptions::default()
        },
        0,
    )
    .unwrap();
    assert!(run.factors.is_sfs());
    assert_eq!(run.factors.a(), run.factors.b());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn als_fit_never_decreases(seed in any::<u64>(), r in 1usize..5, init in 0usize..50) {
        let t = real_set(3, 4, 5, r, seed).to_tensor();
        let opts = AlsOptions { max_iters: 60, seed, ..AlsOptions::default() };
        let run = als_cpd_single(&t, r, &opts, init).unwrap();
        for w in run.fit_history.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-9, "{} -> {}", w[0], w[1]);
        }
        prop_assert!((run.fit - fit(&t, &run.factors).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn matching_is_symmetric(s1 in any::<u64>(), s2 in any::<u64>(), r in 1usize..6) {
        let f = real_set(3, 4, 5, r, s1);
        let g = real_set(3, 4, 5, r, s2);
        let m1 = match_decompositions(&f, &g).unwrap();
        let m2 = match_decompositions(&g, &f).unwrap();
        for (x, &y) in m1.permutation.iter().enumerate() {
            prop_assert_eq!(m2.permutation[y], x);
        }
        prop_assert!((m1.congruence - m2.congruence).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&m1.congruence));
    }

    #[test]
    fn matching_ignores_trivial_indeterminacies(
        seed in any::<u64>(),
        other in any::<u64>(),
        scales in prop::collection::vec(prop_oneof![-3.0..-0.3f64, 0.3..3.0f64], 12),
    ) {
        let f = real_set(3, 4, 5, 4, seed);
        let g = real_set(3, 4, 5, 4, other);
        let f2 = f
            .permute_terms(&[1, 3, 0, 2])
            .unwrap()
            .scale_terms(&scales[0..4], &scales[4..8], &scales[8..12])
            .unwrap();
        let self_match = match_decompositions(&f, &f2).unwrap();
        prop_assert!((self_match.congruence - 1.0).abs() < 1e-12);
        let before = match_decompositions(&f, &g).unwrap();
        let after = match_decompositions(&f2, &g).unwrap();
        prop_assert!((before.congruence - after.congruence).abs() < 1e-9);
    }
}
