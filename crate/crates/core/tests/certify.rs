use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tenuniq::bounds::ProblemDims;
use tenuniq::certify::{
    certify_cpd, certify_sfs, certify_sfs_prop61, check_cm_condition, falsify_um, falsify_wm,
    search_um, verify_witness, weighted_product, CertParams, ConditionOutcome, Status, Verdict,
};
use tenuniq::lab::{sample_factors, SampleSpec};
use tenuniq::linalg::compound;
use tenuniq::{Complex64, FactorSet, Field, Matrix, RankTolerance, RealFactorSet, RealMatrix};

fn p() -> CertParams {
    CertParams::default()
}

fn random_set(dims: ProblemDims, r: usize, seed: u64, trial: usize) -> RealFactorSet {
    let spec = SampleSpec::new(dims, r, Field::Real, seed, 1).unwrap();
    sample_factors(&spec, trial).unwrap()
}

fn rows(r: &[Vec<f64>]) -> RealMatrix {
    Matrix::from_rows(r).unwrap()
}

/// Independent witness check: all `m × m` minors of `A·diag(λ)·Bᵀ` vanish
/// relative to the scale of the terms, and at least `m` entries of `λ` are
/// clearly nonzero.
fn witness_oracle(a: &RealMatrix, b: &RealMatrix, m: usize, lambda: &[f64]) -> bool {
    let max = lambda.iter().fold(0.0f64, |x, l| x.max(l.abs()));
    let weight = lambda.iter().filter(|l| l.abs() > 1e-6 * max).count();
    let prod = weighted_product(a, b, lambda).unwrap();
    let scale: f64 = lambda
        .iter()
        .zip(a.column_norms().iter().zip(b.column_norms()))
        .map(|(l, (x, y))| l.abs() * x * y)
        .sum();
    if m > prod.rows().min(prod.cols()) {
        return weight >= m;
    }
    let minors = compound(&prod, m).unwrap();
    let biggest = minors.as_slice().iter().fold(0.0f64, |x, v| x.max(v.abs()));
    weight >= m && biggest <= 1e-7 * scale.powi(m as i32)
}

fn witness_lambda(o: &ConditionOutcome) -> Vec<f64> {
    o.detail
        .witness
        .as_ref()
        .expect("witness")
        .lambda
        .to_scalars::<f64>()
}

fn statuses(c: &tenuniq::certify::Certificate) -> Vec<Status> {
    c.outcomes.iter().map(|o| o.status).collect()
}

#[test]
fn generic_instances_are_proven() {
    for (dims, r) in [
        (ProblemDims::cpd(4, 5, 6).unwrap(), 6),
        (ProblemDims::cpd(3, 3, 3).unwrap(), 3),
    ] {
        for trial in 0..100 {
            let f = random_set(dims, r, 2024, trial);
            let cert = certify_cpd(&f, &p()).unwrap();
            assert_eq!(
                cert.verdict,
                Verdict::UniqueProven,
                "{dims:?} trial {trial}"
            );
        }
    }
}

#[test]
fn duplicated_column_counterexample() {
    let a = rows(&[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]]);
    let out = falsify_um(&a, &a, 2, &p()).unwrap();
    assert_eq!(out.status, Status::Refuted);
    let lambda = witness_lambda(&out);
    assert!(verify_witness(&a, &a, None, 2, &lambda, p().tol)
        .unwrap()
        .is_some());
    assert!(witness_oracle(&a, &a, 2, &lambda));
}

#[test]
fn sum_column_counterexample() {
    // λ = (1, 1, −1/2) gives a rank-one product for A = B = [e1, e2, e1 + e2].
    let a = rows(&[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]]);
    assert!(witness_oracle(&a, &a, 2, &[1.0, 1.0, -0.5]));
    let out = falsify_um(&a, &a, 2, &p()).unwrap();
    assert_eq!(out.status, Status::Refuted);
    assert!(witness_oracle(&a, &a, 2, &witness_lambda(&out)));
}

#[test]
fn sfs_examples() {
    let f = random_set(ProblemDims::sfs(8, 20).unwrap(), 20, 5, 0);
    let cert = certify_sfs(f.a(), f.c(), &p()).unwrap();
    assert_eq!(cert.prop43.verdict, Verdict::UniqueProven);

    let f = random_set(ProblemDims::sfs(6, 4).unwrap(), 6, 5, 0);
    let cert = certify_sfs_prop61(f.a(), f.c(), &p()).unwrap();
    assert!(cert.outcomes.iter().all(|o| o.status == Status::Proven));
}

#[test]
fn complex_tag_gives_same_certificate() {
    for trial in 0..10 {
        let f = random_set(ProblemDims::cpd(3, 4, 5).unwrap(), 5, 77, trial);
        let real = certify_cpd(&f, &p()).unwrap();
        let complex = certify_cpd(&f.convert::<Complex64>(), &p()).unwrap();
        assert_eq!(real.verdict, complex.verdict);
        assert_eq!(statuses(&real.kruskal), statuses(&complex.kruskal));
        assert_eq!(statuses(&real.prop32), statuses(&complex.prop32));
        for (x, y) in real.prop32.outcomes.iter().zip(&complex.prop32.outcomes) {
            assert_eq!(x.detail.values, y.detail.values);
        }
    }
}

#[test]
fn full_rank_c_makes_wm_and_um_agree() {
    let a = rows(&[
        vec![1.0, 0.0, 1.0, 2.0],
        vec![0.0, 1.0, 0.0, 1.0],
        vec![1.0, 1.0, 1.0, 0.0],
    ]);
    let c = Matrix::identity(4).scale(3.0);
    for m in 2..=3 {
        let u = falsify_um(&a, &a, m, &p()).unwrap();
        let w = falsify_wm(&a, &a, &c, m, &p()).unwrap();
        assert_eq!(u.status, w.status, "m={m}");
    }
}

/// Small factors with repeated or structured columns mixed in.
fn structured(rows: usize, r: usize) -> impl Strategy<Value = RealMatrix> {
    (
        prop::collection::vec(-2i8..=2, rows * r),
        any::<u64>(),
        any::<bool>(),
    )
        .prop_map(move |(v, seed, dense)| {
            if dense {
                Matrix::random_standard(rows, r, &mut ChaCha8Rng::seed_from_u64(seed))
            } else {
                Matrix::new(rows, r, v.into_iter().map(f64::from).collect()).unwrap()
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn never_both_proven_and_refuted(a in structured(3, 4), b in structured(3, 4), m in 1usize..=3) {
        let params = CertParams { falsify_trials: 60, ..p() };
        let cm = check_cm_condition(&a, &b, m, &params).unwrap();
        let res = search_um(&a, &b, m, params.falsify_trials, params.seed, params.tol).unwrap();
        if cm.status == Status::Proven {
            prop_assert!(res.witness.is_none(), "compound check proved a refuted condition");
        }
        if let Some(w) = res.witness {
            let lambda = w.lambda.to_scalars::<f64>();
            prop_assert!(witness_oracle(&a, &b, m, &lambda));
        }
    }

    #[test]
    fn certificates_ignore_scaling_and_permutation(
        seed in any::<u64>(),
        dup in any::<bool>(),
        scales in prop::collection::vec(prop_oneof![-4.0..-0.25f64, 0.25..4.0f64], 15),
    ) {
        let f = random_set(ProblemDims::cpd(3, 4, 5).unwrap(), 5, seed, 0);
        let f = if dup {
            let (a, b, c) = f.into_parts();
            let a = Matrix::from_fn(3, 5, |i, j| if j == 4 { a[(i, 0)] } else { a[(i, j)] });
            FactorSet::new(a, b, c).unwrap()
        } else {
            f
        };
        let g = f
            .permute_terms(&[4, 2, 0, 3, 1])
            .unwrap()
            .scale_terms(&scales[0..5], &scales[5..10], &scales[10..15])
            .unwrap();
        let x = certify_cpd(&f, &p()).unwrap();
        let y = certify_cpd(&g, &p()).unwrap();
        prop_assert_eq!(x.verdict, y.verdict);
        prop_assert_eq!(statuses(&x.kruskal), statuses(&y.kruskal));
        prop_assert_eq!(statuses(&x.prop32), statuses(&y.prop32));
    }

    #[test]
    fn witnesses_reverify(seed in any::<u64>(), m in 2usize..=3) {
        // Two equal columns make Um fail for every m ≥ 2 the rank allows.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Matrix::<f64>::random_standard(3, 4, &mut rng);
        let a = Matrix::from_fn(3, 4, |i, j| if j == 3 { a[(i, 1)] } else { a[(i, j)] });
        let b = Matrix::<f64>::random_standard(4, 4, &mut rng);
        let b = Matrix::from_fn(4, 4, |i, j| if j == 3 { -2.0 * b[(i, 1)] } else { b[(i, j)] });
        let out = falsify_um(&a, &b, m, &p()).unwrap();
        prop_assert_eq!(out.status, Status::Refuted);
        let lambda = witness_lambda(&out);
        prop_assert!(verify_witness(&a, &b, None, m, &lambda, RankTolerance::default()).unwrap().is_some());
        prop_assert!(witness_oracle(&a, &b, m, &lambda));
    }
}
