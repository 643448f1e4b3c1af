//! Deterministic uniqueness certificates for concrete factor matrices.
//!
//! Every condition reports one of three statuses. `PROVEN` comes only from a
//! computation that establishes the condition (a k-rank inequality, a
//! full-column-rank check). `REFUTED` comes only with a verified witness.
//! Anything else is `UNKNOWN`: a failed sufficient check says nothing about
//! the condition itself.

mod falsify;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{binomial, compound, k_rank, khatri_rao, rank, Matrix, RankTolerance};
use crate::scalar::Scalar;
use crate::tensor::FactorSet;

pub use falsify::{
    product_rank, search_um, search_wm, verify_witness, weight, weighted_product, Entries,
    FalsifierCandidate, SearchResult, ENUMERATION_CAP, RANGE_RESIDUAL_TOL,
};

pub const MAX_FALSIFY_TRIALS: usize = 1_000_000;
pub const DEFAULT_FALSIFY_TRIALS: usize = 200;

/// Largest compound Khatri–Rao matrix (rows × columns) the direct rank check
/// will factor.
pub const COMPOUND_ENTRY_CAP: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertParams {
    pub tol: RankTolerance,
    pub falsify_trials: usize,
    pub seed: u64,
}

impl CertParams {
    pub fn new(tol: RankTolerance, falsify_trials: usize, seed: u64) -> Result<Self> {
        if falsify_trials > MAX_FALSIFY_TRIALS {
            return Err(Error::InvalidParameter(format!(
                "falsify_trials {falsify_trials} exceeds {MAX_FALSIFY_TRIALS}"
            )));
        }
        Ok(Self {
            tol,
            falsify_trials,
            seed,
        })
    }
}

impl Default for CertParams {
    fn default() -> Self {
        Self {
            tol: RankTolerance::default(),
            falsify_trials: DEFAULT_FALSIFY_TRIALS,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Proven,
    Refuted,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConditionId {
    /// `2R ≤ k_A + k_B + k_C − 2`.
    Kruskal,
    /// `max(min(k_X, k_Y − 1), min(k_X − 1, k_Y)) + k_Z ≥ R + 1`.
    KRankInequality,
    /// `k_A + k_C ≥ R + 2`.
    KRankSum,
    CompoundKhatriRao,
    #[serde(rename = "W_M")]
    Wm,
    #[serde(rename = "U_M")]
    Um,
    KhatriRaoFullRank,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Detail {
    /// Named integers: k-ranks, ranks, `m`, matrix sizes.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<&'static str, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<FalsifierCandidate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub falsify_trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Detail {
    fn with(mut self, key: &'static str, v: usize) -> Self {
        self.values.insert(key, v);
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionOutcome {
    pub condition_id: ConditionId,
    pub status: Status,
    pub detail: Detail,
}

impl ConditionOutcome {
    fn new(condition_id: ConditionId, status: Status, detail: Detail) -> Self {
        Self {
            condition_id,
            status,
            detail,
        }
    }

    fn decided(condition_id: ConditionId, holds: bool, detail: Detail) -> Self {
        Self::new(
            condition_id,
            if holds {
                Status::Proven
            } else {
                Status::Unknown
            },
            detail,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Route {
    Kruskal,
    Prop32,
    Prop43,
    Prop61,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    UniqueProven,
    NotProven,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub route: Route,
    pub outcomes: Vec<ConditionOutcome>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Certificate {
    fn new(route: Route, outcomes: Vec<ConditionOutcome>) -> Self {
        let verdict = if outcomes.iter().all(|o| o.status == Status::Proven) {
            Verdict::UniqueProven
        } else {
            Verdict::NotProven
        };
        Self {
            route,
            outcomes,
            verdict,
            note: None,
        }
    }

    pub fn outcome(&self, id: ConditionId) -> Option<&ConditionOutcome> {
        self.outcomes.iter().find(|o| o.condition_id == id)
    }
}

fn combined(certs: &[&Certificate]) -> Verdict {
    if certs.iter().any(|c| c.verdict == Verdict::UniqueProven) {
        Verdict::UniqueProven
    } else {
        Verdict::NotProven
    }
}

/// Both routes for an unstructured decomposition; either proving suffices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CpdCertification {
    pub kruskal: Certificate,
    pub prop32: Certificate,
    pub verdict: Verdict,
}

/// All routes for an SFS decomposition `[A, A, C]`; any proving suffices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SfsCertification {
    pub kruskal: Certificate,
    pub prop43: Certificate,
    pub prop61: Certificate,
    pub verdict: Verdict,
}

fn require_same_cols<S: Scalar>(mats: &[&Matrix<S>]) -> Result<usize> {
    let r = mats[0].cols();
    if let Some(bad) = mats.iter().find(|m| m.cols() != r) {
        return Err(Error::ShapeMismatch(format!(
            "{} vs {} columns",
            r,
            bad.cols()
        )));
    }
    Ok(r)
}

fn kruskal_outcome(r: usize, ka: usize, kb: usize, kc: usize) -> ConditionOutcome {
    let detail = Detail::default()
        .with("R", r)
        .with("k_A", ka)
        .with("k_B", kb)
        .with("k_C", kc);
    ConditionOutcome::decided(ConditionId::Kruskal, 2 * r + 2 <= ka + kb + kc, detail)
}

/// Kruskal's condition `R ≤ (k_A + k_B + k_C − 2)/2`.
pub fn check_kruskal<S: Scalar>(f: &FactorSet<S>, p: &CertParams) -> Result<ConditionOutcome> {
    let ka = k_rank(f.a(), p.tol)?;
    let kb = if f.is_sfs() {
        ka
    } else {
        k_rank(f.b(), p.tol)?
    };
    let kc = k_rank(f.c(), p.tol)?;
    Ok(kruskal_outcome(f.rank(), ka, kb, kc))
}

/// Full column rank of `C_m(M₁) ⊙ C_m(M₂)`, sufficient for `Um(M₁, M₂)`.
pub fn check_cm_condition<S: Scalar>(
    m1: &Matrix<S>,
    m2: &Matrix<S>,
    m: usize,
    p: &CertParams,
) -> Result<ConditionOutcome> {
    let r = require_same_cols(&[m1, m2])?;
    let limit = m1.rows().min(m2.rows()).min(r);
    if m == 0 || m > limit {
        return Err(Error::CompoundOrder {
            m,
            rows: m1.rows().min(m2.rows()),
            cols: r,
        });
    }
    let cols = binomial(r, m);
    let rows = binomial(m1.rows(), m).saturating_mul(binomial(m2.rows(), m));
    let detail = Detail::default()
        .with("m", m)
        .with("R", r)
        .with("rows", rows)
        .with("cols", cols);
    if cols > rows {
        return Ok(ConditionOutcome::new(
            ConditionId::CompoundKhatriRao,
            Status::Unknown,
            detail.note("more columns than rows"),
        ));
    }
    if rows.saturating_mul(cols) > COMPOUND_ENTRY_CAP {
        log::warn!(
            "compound Khatri-Rao matrix {rows}x{cols} exceeds the size cap; reporting UNKNOWN"
        );
        return Ok(ConditionOutcome::new(
            ConditionId::CompoundKhatriRao,
            Status::Unknown,
            detail.note(format!(
                "matrix exceeds {COMPOUND_ENTRY_CAP} entries; not factored"
            )),
        ));
    }
    let kr = khatri_rao(&compound(m1, m)?, &compound(m2, m)?)?;
    let rk = rank(&kr, p.tol)?;
    Ok(ConditionOutcome::decided(
        ConditionId::CompoundKhatriRao,
        rk == cols,
        detail.with("rank", rk),
    ))
}

fn search_outcome(id: ConditionId, m: usize, r: usize, res: SearchResult) -> ConditionOutcome {
    let mut detail = Detail::default().with("m", m).with("R", r);
    detail.falsify_trials = Some(res.trials);
    detail.note = res.note;
    log::debug!(
        "{id:?} m={m}: {} trials, witness found: {}",
        res.trials,
        res.witness.is_some()
    );
    match res.witness {
        Some(w) => {
            detail.witness = Some(w);
            ConditionOutcome::new(id, Status::Refuted, detail)
        }
        None => ConditionOutcome::new(id, Status::Unknown, detail),
    }
}

/// Randomized search for a violation of `Um(A, B)`: `REFUTED` with a
/// verified witness, otherwise `UNKNOWN`.
pub fn falsify_um<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    m: usize,
    p: &CertParams,
) -> Result<ConditionOutcome> {
    let res = search_um(a, b, m, p.falsify_trials, p.seed, p.tol)?;
    Ok(search_outcome(ConditionId::Um, m, a.cols(), res))
}

/// As [`falsify_um`] with `λ` restricted to `range(Cᵀ)`.
pub fn falsify_wm<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    c: &Matrix<S>,
    m: usize,
    p: &CertParams,
) -> Result<ConditionOutcome> {
    let res = search_wm(a, b, c, m, p.falsify_trials, p.seed, p.tol)?;
    Ok(search_outcome(ConditionId::Wm, m, a.cols(), res))
}

/// `Um(A, B)` (or `Wm(A, B, C)` when `c` is given): proven by the compound
/// check, refuted by the falsifier, or unknown. The flag reports whether the
/// compound check succeeded, which also gives `A ⊙ B` full column rank.
fn u_or_w<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    c: Option<&Matrix<S>>,
    m: usize,
    p: &CertParams,
) -> Result<(ConditionOutcome, bool)> {
    let id = if c.is_some() {
        ConditionId::Wm
    } else {
        ConditionId::Um
    };
    let r = a.cols();
    if m > r {
        let detail = Detail::default()
            .with("m", m)
            .with("R", r)
            .note("m exceeds R: holds vacuously");
        return Ok((ConditionOutcome::new(id, Status::Proven, detail), false));
    }
    let cm_note = if m <= a.rows().min(b.rows()) {
        let cm = check_cm_condition(a, b, m, p)?;
        if cm.status == Status::Proven {
            let mut detail = cm.detail;
            detail.note = Some("compound Khatri-Rao matrix has full column rank".into());
            return Ok((ConditionOutcome::new(id, Status::Proven, detail), true));
        }
        match (cm.detail.values.get("rank"), cm.detail.note) {
            (Some(rk), _) => format!("compound check: rank {rk} < {}", binomial(r, m)),
            (None, Some(n)) => format!("compound check: {n}"),
            (None, None) => "compound check failed".into(),
        }
    } else {
        "compound check not applicable: m exceeds a row count".into()
    };
    let mut out = match c {
        Some(c) => falsify_wm(a, b, c, m, p)?,
        None => falsify_um(a, b, m, p)?,
    };
    if out.status == Status::Unknown {
        out.detail.note = Some(match out.detail.note.take() {
            Some(n) => format!("{cm_note}; {n}"),
            None => cm_note,
        });
    }
    Ok((out, false))
}

fn pair_inequality(kx: usize, ky: usize, kz: usize, r: usize) -> bool {
    let left = kx
        .min(ky.saturating_sub(1))
        .max(kx.saturating_sub(1).min(ky));
    left + kz > r
}

fn khatri_rao_outcome<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    implied: bool,
    p: &CertParams,
) -> Result<ConditionOutcome> {
    let r = a.cols();
    if implied {
        let detail = Detail::default()
            .with("R", r)
            .note("implied by the compound check");
        return Ok(ConditionOutcome::new(
            ConditionId::KhatriRaoFullRank,
            Status::Proven,
            detail,
        ));
    }
    let rk = rank(&khatri_rao(a, b)?, p.tol)?;
    let detail = Detail::default().with("R", r).with("rank", rk);
    Ok(ConditionOutcome::decided(
        ConditionId::KhatriRaoFullRank,
        rk == r,
        detail,
    ))
}

/// Kruskal and the three-condition route for an unstructured decomposition.
pub fn certify_cpd<S: Scalar>(f: &FactorSet<S>, p: &CertParams) -> Result<CpdCertification> {
    if f.is_sfs() {
        return Err(Error::InvalidParameter(
            "certify_cpd expects an unstructured factor set".into(),
        ));
    }
    let (a, b, c) = (f.a(), f.b(), f.c());
    let r = f.rank();
    let (ka, kb, kc) = (k_rank(a, p.tol)?, k_rank(b, p.tol)?, k_rank(c, p.tol)?);
    let kruskal = Certificate::new(Route::Kruskal, vec![kruskal_outcome(r, ka, kb, kc)]);

    let i = ConditionOutcome::decided(
        ConditionId::KRankInequality,
        pair_inequality(ka, kb, kc, r),
        Detail::default()
            .with("R", r)
            .with("k_A", ka)
            .with("k_B", kb)
            .with("k_C", kc),
    );
    let rc = rank(c, p.tol)?;
    let m_c = r + 2 - rc;
    let (mut ii, cm_proved) = u_or_w(a, b, Some(c), m_c, p)?;
    ii.detail.values.insert("rank_C", rc);
    let iii = khatri_rao_outcome(a, b, cm_proved, p)?;
    let prop32 = Certificate::new(Route::Prop32, vec![i, ii, iii]);

    let verdict = combined(&[&kruskal, &prop32]);
    Ok(CpdCertification {
        kruskal,
        prop32,
        verdict,
    })
}

/// `k_A + k_C ≥ R + 2` and `U_{m_C}(A, A)` with `m_C = R − r_C + 2`.
pub fn certify_sfs_prop43<S: Scalar>(
    a: &Matrix<S>,
    c: &Matrix<S>,
    p: &CertParams,
) -> Result<Certificate> {
    let r = require_same_cols(&[a, c])?;
    let (ka, kc) = (k_rank(a, p.tol)?, k_rank(c, p.tol)?);
    let i = ConditionOutcome::decided(
        ConditionId::KRankSum,
        ka + kc >= r + 2,
        Detail::default()
            .with("R", r)
            .with("k_A", ka)
            .with("k_C", kc),
    );
    let rc = rank(c, p.tol)?;
    let (mut ii, _) = u_or_w(a, a, None, r + 2 - rc, p)?;
    ii.detail.values.insert("rank_C", rc);
    Ok(Certificate::new(Route::Prop43, vec![i, ii]))
}

/// The unstructured three-condition route applied to the reshaped
/// `I × K × I` decomposition `[A, C, A]`: a k-rank inequality and
/// `U_{m_A}(A, C)` with `m_A = R − r_A + 2`.
pub fn certify_sfs_prop61<S: Scalar>(
    a: &Matrix<S>,
    c: &Matrix<S>,
    p: &CertParams,
) -> Result<Certificate> {
    let r = require_same_cols(&[a, c])?;
    let (ka, kc) = (k_rank(a, p.tol)?, k_rank(c, p.tol)?);
    let i = ConditionOutcome::decided(
        ConditionId::KRankInequality,
        pair_inequality(ka, kc, ka, r),
        Detail::default()
            .with("R", r)
            .with("k_A", ka)
            .with("k_C", kc),
    );
    let ra = rank(a, p.tol)?;
    let (mut ii, _) = u_or_w(a, c, None, r + 2 - ra, p)?;
    ii.detail.values.insert("rank_A", ra);
    let mut cert = Certificate::new(Route::Prop61, vec![i, ii]);
    cert.note = Some(
        "uniqueness of the CPD of the reshaped IxKxI tensor [A, C, A] implies uniqueness of the SFS-CPD [A, A, C]"
            .into(),
    );
    Ok(cert)
}

/// Kruskal (with `B = A`) and both SFS routes.
pub fn certify_sfs<S: Scalar>(
    a: &Matrix<S>,
    c: &Matrix<S>,
    p: &CertParams,
) -> Result<SfsCertification> {
    let r = require_same_cols(&[a, c])?;
    let (ka, kc) = (k_rank(a, p.tol)?, k_rank(c, p.tol)?);
    let kruskal = Certificate::new(Route::Kruskal, vec![kruskal_outcome(r, ka, ka, kc)]);
    let prop43 = certify_sfs_prop43(a, c, p)?;
    let prop61 = certify_sfs_prop61(a, c, p)?;
    let verdict = combined(&[&kruskal, &prop43, &prop61]);
    Ok(SfsCertification {
        kruskal,
        prop43,
        prop61,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p() -> CertParams {
        CertParams::default()
    }

    fn rows(r: &[Vec<f64>]) -> Matrix<f64> {
        Matrix::from_rows(r).unwrap()
    }

    fn random(seed: u64, dims: &[usize], r: usize) -> FactorSet<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m: Vec<_> = dims
            .iter()
            .map(|&d| Matrix::random_standard(d, r, &mut rng))
            .collect();
        FactorSet::new(m[0].clone(), m[1].clone(), m[2].clone()).unwrap()
    }

    #[test]
    fn params_bounded() {
        assert!(CertParams::new(RankTolerance::default(), MAX_FALSIFY_TRIALS + 1, 0).is_err());
    }

    #[test]
    fn kruskal_identity() {
        let i3 = Matrix::<f64>::identity(3);
        let f = FactorSet::new(i3.clone(), i3.clone(), i3).unwrap();
        assert_eq!(check_kruskal(&f, &p()).unwrap().status, Status::Proven);
    }

    #[test]
    fn kruskal_duplicated_column() {
        let a = rows(&[
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ]);
        let i3 = Matrix::<f64>::identity(3);
        let out = check_kruskal(&FactorSet::new(a, i3.clone(), i3).unwrap(), &p()).unwrap();
        assert_eq!(out.status, Status::Unknown);
        assert_eq!(out.detail.values["k_A"], 1);
    }

    #[test]
    fn kruskal_random_456() {
        let f = random(1, &[4, 5, 6], 6);
        assert_eq!(check_kruskal(&f, &p()).unwrap().status, Status::Proven);
    }

    #[test]
    fn cm_condition_examples() {
        let f = random(2, &[4, 5, 6], 6);
        assert_eq!(
            check_cm_condition(f.a(), f.b(), 1, &p()).unwrap().status,
            Status::Proven
        );

        let mut a = f.a().clone();
        for i in 0..4 {
            a[(i, 2)] = 0.0;
        }
        for m in 1..=4 {
            assert_eq!(
                check_cm_condition(&a, f.b(), m, &p()).unwrap().status,
                Status::Unknown
            );
        }
        assert!(check_cm_condition(&a, f.b(), 5, &p()).is_err());
    }

    #[test]
    fn cm_condition_rank_deficient_at_456_rank_7() {
        // 40 × 35 but generically of rank 34.
        let f = random(3, &[4, 5, 7], 7);
        let out = check_cm_condition(f.a(), f.b(), 3, &p()).unwrap();
        assert_eq!(out.detail.values["rows"], 40);
        assert_eq!(out.detail.values["cols"], 35);
        assert_eq!(out.detail.values["rank"], 34);
        assert_eq!(out.status, Status::Unknown);
    }

    #[test]
    fn um_refuted_for_duplicate() {
        let a = rows(&[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]]);
        let out = falsify_um(&a, &a, 2, &p()).unwrap();
        assert_eq!(out.status, Status::Refuted);
        let lam = out.detail.witness.unwrap().lambda.to_scalars::<f64>();
        assert!(verify_witness(&a, &a, None, 2, &lam, p().tol)
            .unwrap()
            .is_some());

        let out = falsify_um(
            &a,
            &a,
            2,
            &CertParams {
                falsify_trials: 0,
                ..p()
            },
        )
        .unwrap();
        assert_eq!(out.status, Status::Unknown);
    }

    #[test]
    fn certify_cpd_examples() {
        let f = random(4, &[4, 5, 6], 6);
        let c = certify_cpd(&f, &p()).unwrap();
        assert_eq!(c.kruskal.verdict, Verdict::UniqueProven);
        assert_eq!(c.verdict, Verdict::UniqueProven);

        let i3 = Matrix::<f64>::identity(3);
        let f = FactorSet::new(i3.clone(), i3.clone(), i3.clone()).unwrap();
        let c = certify_cpd(&f, &p()).unwrap();
        assert_eq!(c.kruskal.verdict, Verdict::UniqueProven);
        assert_eq!(c.prop32.verdict, Verdict::UniqueProven);

        let mut a = i3.clone();
        a[(0, 0)] = 0.0;
        let c = certify_cpd(&FactorSet::new(a, i3.clone(), i3).unwrap(), &p()).unwrap();
        assert_eq!(c.verdict, Verdict::NotProven);
        assert_eq!(c.kruskal.outcomes[0].detail.values["k_A"], 0);
    }

    #[test]
    fn certify_cpd_rejects_sfs() {
        let i3 = Matrix::<f64>::identity(3);
        assert!(certify_cpd(&FactorSet::sfs(i3.clone(), i3).unwrap(), &p()).is_err());
    }

    #[test]
    fn sfs_routes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = Matrix::<f64>::random_standard(8, 20, &mut rng);
        let c = Matrix::<f64>::random_standard(20, 20, &mut rng);
        assert_eq!(
            certify_sfs_prop43(&a, &c, &p()).unwrap().verdict,
            Verdict::UniqueProven
        );

        let a = Matrix::<f64>::random_standard(6, 6, &mut rng);
        let c = Matrix::<f64>::random_standard(4, 6, &mut rng);
        let cert = certify_sfs_prop61(&a, &c, &p()).unwrap();
        assert_eq!(cert.verdict, Verdict::UniqueProven);
        assert!(cert.note.is_some());

        let i4 = Matrix::<f64>::identity(4);
        assert_eq!(
            certify_sfs_prop43(&i4, &i4, &p()).unwrap().verdict,
            Verdict::UniqueProven
        );
        assert_eq!(
            certify_sfs_prop61(&i4, &i4, &p()).unwrap().verdict,
            Verdict::UniqueProven
        );

        let dup = rows(&[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]]);
        let c3 = Matrix::<f64>::identity(3);
        let cert = certify_sfs_prop43(&dup, &c3, &p()).unwrap();
        assert_eq!(cert.outcomes[0].status, Status::Unknown);
        assert_eq!(cert.verdict, Verdict::NotProven);
    }

    #[test]
    fn complex_tag_matches_real() {
        let f = random(6, &[3, 4, 5], 4);
        let fc: FactorSet<Complex64> = f.convert();
        let a = certify_cpd(&f, &p()).unwrap();
        let b = certify_cpd(&fc, &p()).unwrap();
        assert_eq!(a.verdict, b.verdict);
        assert_eq!(a.kruskal, b.kruskal);
    }
}
