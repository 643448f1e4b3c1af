//! Closed-form generic-uniqueness bounds.
//!
//! Every bound is evaluated by scanning `R = 1..=r_cap` with exact integer
//! arithmetic; the bounds that involve a square root are compared after
//! squaring with a sign guard, so no floating-point boundary effects arise.
//! Unstructured bounds sort `(I, J, K)` ascending first, since uniqueness of
//! an unstructured decomposition does not depend on the mode order. SFS
//! bounds never exchange `I` and `K`.

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_RANK_CAP: usize = 200;

/// Largest `I·J·K` for which the literature kernel-rank bound is recorded.
pub const NICK_FORMULA_MAX_VOLUME: usize = 15_000;

/// Tensor dimensions. For SFS problems `j == i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProblemDims {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub sfs: bool,
}

impl ProblemDims {
    pub fn cpd(i: usize, j: usize, k: usize) -> Result<Self> {
        if i == 0 || j == 0 || k == 0 {
            return Err(Error::InvalidParameter(format!(
                "dimensions {i}x{j}x{k} must be positive"
            )));
        }
        Ok(Self {
            i,
            j,
            k,
            sfs: false,
        })
    }

    /// `I × I × K` tensors with symmetric frontal slices.
    pub fn sfs(i: usize, k: usize) -> Result<Self> {
        if i == 0 || k == 0 {
            return Err(Error::InvalidParameter(format!(
                "dimensions {i}x{k} must be positive"
            )));
        }
        Ok(Self {
            i,
            j: i,
            k,
            sfs: true,
        })
    }

    pub fn sorted(&self) -> [usize; 3] {
        let mut d = [self.i, self.j, self.k];
        d.sort_unstable();
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PropositionId {
    KruskalGeneric,
    StrassenCo,
    #[serde(rename = "PROP14_I")]
    Prop14I,
    #[serde(rename = "PROP14_II")]
    Prop14Ii,
    #[serde(rename = "PROP14_III")]
    Prop14Iii,
    NickFormula,
    Prop15,
    Cor16,
    KruskalSfs,
    Prop18,
    Prop19,
    Prop110,
    SfsMonotoneClosure,
}

impl PropositionId {
    /// Stable tag used in reports.
    pub fn tag(&self) -> &'static str {
        match self {
            Self::KruskalGeneric => "KRUSKAL_GENERIC",
            Self::StrassenCo => "STRASSEN_CO",
            Self::Prop14I => "PROP14_I",
            Self::Prop14Ii => "PROP14_II",
            Self::Prop14Iii => "PROP14_III",
            Self::NickFormula => "NICK_FORMULA",
            Self::Prop15 => "PROP15",
            Self::Cor16 => "COR16",
            Self::KruskalSfs => "KRUSKAL_SFS",
            Self::Prop18 => "PROP18",
            Self::Prop19 => "PROP19",
            Self::Prop110 => "PROP110",
            Self::SfsMonotoneClosure => "SFS_MONOTONE_CLOSURE",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Self::KruskalGeneric => "generic k-ranks in Kruskal's inequality",
            Self::StrassenCo => "R <= (I-1)(J-1) <= K",
            Self::Prop14I => "R <= IJK/(I+J+K-2) - K, K <= R",
            Self::Prop14Ii => "R <= 2^(a+b-2), K <= R",
            Self::Prop14Iii => "R <= (I+J+K-2)/2, K <= R",
            Self::NickFormula => {
                "R <= ceil(IJK/(I+J+K-2)) - 1 (kernel computation, not certified here)"
            }
            Self::Prop15 => "R <= (I+J+2K-2-sqrt((I-J)^2+4K))/2, K <= R",
            Self::Cor16 => "J <= R <= K, R <= (I-1)(J-1)",
            Self::KruskalSfs => "generic k-ranks in Kruskal's inequality with B = A",
            Self::Prop18 => "I < R <= K, R <= (I^2-I)/2",
            Self::Prop19 => "I <= K <= R, R <= (2I+2K+1-sqrt(8K+8I+1))/2",
            Self::Prop110 => "K <= I <= R, R <= (K+3I-1-sqrt((K-I)^2+2K+6I-3))/2",
            Self::SfsMonotoneClosure => "monotone closure over smaller K and R",
        }
    }
}

/// Field over which a bound is established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldScope {
    Both,
    ComplexOnly,
}

/// Field a table is computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldSelection {
    Real,
    Complex,
    /// Bounds valid over both fields.
    Both,
}

impl FieldSelection {
    /// Whether a bound established over `scope` holds for this selection.
    pub fn admits(self, scope: FieldScope) -> bool {
        match scope {
            FieldScope::Both => true,
            FieldScope::ComplexOnly => self == FieldSelection::Complex,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub id: PropositionId,
    /// Ranks for which generic uniqueness is guaranteed, ascending.
    pub rank_set: Vec<usize>,
    pub max_rank: usize,
    pub literature_only: bool,
    pub field: FieldScope,
    /// Why the set is empty, or a note on how it was obtained.
    pub reason: Option<String>,
}

impl BoundEntry {
    fn scan(id: PropositionId, r_cap: usize, pred: impl Fn(i64) -> bool) -> Self {
        let rank_set: Vec<usize> = (1..=r_cap).filter(|&r| pred(r as i64)).collect();
        let reason = rank_set
            .is_empty()
            .then(|| format!("no rank in 1..={r_cap} satisfies the constraints"));
        Self {
            id,
            max_rank: rank_set.last().copied().unwrap_or(0),
            rank_set,
            literature_only: false,
            field: FieldScope::Both,
            reason,
        }
    }

    fn gated(id: PropositionId, reason: impl Into<String>) -> Self {
        Self {
            id,
            rank_set: Vec::new(),
            max_rank: 0,
            literature_only: false,
            field: FieldScope::Both,
            reason: Some(reason.into()),
        }
    }

    fn complex_only(mut self) -> Self {
        self.field = FieldScope::ComplexOnly;
        self
    }

    fn literature(mut self) -> Self {
        self.literature_only = true;
        self
    }

    pub fn contains(&self, r: usize) -> bool {
        self.rank_set.binary_search(&r).is_ok()
    }
}

/// Exact rank predicates, exposed so the equivalent forms can be checked
/// against each other independently of the scans.
pub mod forms {
    /// `√rhs ≤ lhs`, exactly.
    fn sqrt_le(rhs: i64, lhs: i64) -> bool {
        lhs >= 0 && lhs * lhs >= rhs
    }

    /// Radical form, dims sorted so that `i <= j <= k`.
    pub fn prop15_radical(i: i64, j: i64, k: i64, r: i64) -> bool {
        2 <= i
            && i <= j
            && j <= k
            && k <= r
            && sqrt_le((i - j).pow(2) + 4 * k, i + j + 2 * k - 2 - 2 * r)
    }

    /// Equivalent form in `m = R - K + 2`.
    pub fn prop15_m_form(i: i64, j: i64, k: i64, r: i64) -> bool {
        let m = r - k + 2;
        2 <= i && m - 1 <= i && i <= j && j <= k && k <= r && r <= (i + 1 - m) * (j + 1 - m) + m - 2
    }

    pub fn prop19_radical(i: i64, k: i64, r: i64) -> bool {
        2 <= i && i <= k && k <= r && sqrt_le(8 * k + 8 * i + 1, 2 * i + 2 * k + 1 - 2 * r)
    }

    /// Equivalent form in `m = R - K + 2`, multiplied through by two.
    pub fn prop19_m_form(i: i64, k: i64, r: i64) -> bool {
        let m = r - k + 2;
        2 <= i
            && m - 1 <= i
            && i <= k
            && k <= r
            && 2 * r <= i * i + (3 - 2 * m) * i + (m - 1) * (m - 2)
    }

    pub fn prop110_radical(i: i64, k: i64, r: i64) -> bool {
        2 <= k
            && k <= i
            && i <= r
            && sqrt_le((k - i).pow(2) + 2 * k + 6 * i - 3, k + 3 * i - 1 - 2 * r)
    }

    /// Equivalent form in `m = R - I + 2`.
    pub fn prop110_m_form(i: i64, k: i64, r: i64) -> bool {
        let m = r - i + 2;
        2 <= k && m - 1 <= k && k <= i && i <= r && r <= (i + 1 - m) * (k + 1 - m)
    }
}

fn require_cpd(id: PropositionId, dims: &ProblemDims) -> Option<BoundEntry> {
    dims.sfs
        .then(|| BoundEntry::gated(id, "unstructured bound requested for SFS dimensions"))
}

fn require_sfs(id: PropositionId, dims: &ProblemDims) -> Option<BoundEntry> {
    (!dims.sfs).then(|| BoundEntry::gated(id, "SFS bound requested for unstructured dimensions"))
}

fn sorted_i64(dims: &ProblemDims) -> (i64, i64, i64) {
    let [i, j, k] = dims.sorted();
    (i as i64, j as i64, k as i64)
}

pub fn kruskal_generic(dims: ProblemDims, r_cap: usize) -> BoundEntry {
    let id = PropositionId::KruskalGeneric;
    if let Some(e) = require_cpd(id, &dims) {
        return e;
    }
    let (i, j, k) = (dims.i as i64, dims.j as i64, dims.k as i64);
    BoundEntry::scan(id, r_cap, |r| 2 * r <= i.min(r) + j.min(r) + k.min(r) - 2)
}

/// Valid over ℂ only.
pub fn strassen_co(dims: ProblemDims, r_cap: usize) -> BoundEntry {
    let id = PropositionId::StrassenCo;
    if let Some(e) = require_cpd(id, &dims) {
        return e;
    }
    let (i, j, k) = sorted_i64(&dims);
    if i < 3 {
        return BoundEntry::gated(id, "needs 3 <= I").complex_only();
    }
    let p = (i - 1) * (j - 1);
    if p > k {
        return BoundEntry::gated(id, format!("(I-1)(J-1) = {p} exceeds K = {k}")).complex_only();
    }
    BoundEntry::scan(id, r_cap, |r| r <= p).complex_only()
}

/// The three items, in order; item (i) is valid over ℂ only. Its side
/// conditions follow the proposition as stated; one of the cited sources also
/// requires `K` odd, which is not enforced here.
pub fn prop14(dims: ProblemDims, r_cap: usize) -> [BoundEntry; 3] {
    let ids = [
        PropositionId::Prop14I,
        PropositionId::Prop14Ii,
        PropositionId::Prop14Iii,
    ];
    if dims.sfs {
        return ids
            .map(|id| BoundEntry::gated(id, "unstructured bound requested for SFS dimensions"));
    }
    let (i, j, k) = sorted_i64(&dims);
    if i < 2 {
        return ids.map(|id| BoundEntry::gated(id, "needs 2 <= I"));
    }
    let item_i = if i < 3 {
        BoundEntry::gated(ids[0], "needs 3 <= I")
    } else {
        BoundEntry::scan(ids[0], r_cap, |r| {
            k <= r && (r + k) * (i + j + k - 2) <= i * j * k
        })
    }
    .complex_only();
    let alpha = i.ilog2() as i64;
    let beta = j.ilog2() as i64;
    let pow = 1i64 << (alpha + beta - 2);
    let item_ii = BoundEntry::scan(ids[1], r_cap, |r| k <= r && r <= pow);
    let item_iii = BoundEntry::scan(ids[2], r_cap, |r| k <= r && 2 * r <= i + j + k - 2);
    [item_i, item_ii, item_iii]
}

/// Literature bound from a kernel-rank computation; recorded but never used
/// for the overall maximum. Its known exceptions are not enumerated.
pub fn nick_formula(dims: ProblemDims, r_cap: usize) -> BoundEntry {
    let id = PropositionId::NickFormula;
    if let Some(e) = require_cpd(id, &dims) {
        return e.literature();
    }
    let volume = dims.i * dims.j * dims.k;
    if volume > NICK_FORMULA_MAX_VOLUME {
        return BoundEntry::gated(id, format!("IJK = {volume} > {NICK_FORMULA_MAX_VOLUME}"))
            .literature();
    }
    let (i, j, k) = sorted_i64(&dims);
    if i < 2 {
        return BoundEntry::gated(id, "needs 2 <= I").literature();
    }
    let denom = i + j + k - 2;
    let ceil = (i * j * k + denom - 1) / denom;
    BoundEntry::scan(id, r_cap, |r| r < ceil).literature()
}

/// Evaluates both equivalent forms and fails if they ever disagree.
pub fn prop15(dims: ProblemDims, r_cap: usize) -> Result<BoundEntry> {
    let id = PropositionId::Prop15;
    if let Some(e) = require_cpd(id, &dims) {
        return Ok(e);
    }
    let (i, j, k) = sorted_i64(&dims);
    check_forms("PROP15", r_cap, |r| {
        (
            forms::prop15_radical(i, j, k, r),
            forms::prop15_m_form(i, j, k, r),
        )
    })?;
    Ok(BoundEntry::scan(id, r_cap, |r| {
        forms::prop15_radical(i, j, k, r)
    }))
}

pub fn cor16(dims: ProblemDims, r_cap: usize) -> BoundEntry {
    let id = PropositionId::Cor16;
    if let Some(e) = require_cpd(id, &dims) {
        return e;
    }
    let (i, j, k) = sorted_i64(&dims);
    if i < 3 {
        return BoundEntry::gated(id, "needs 3 <= I");
    }
    BoundEntry::scan(id, r_cap, |r| j <= r && r <= k && r <= (i - 1) * (j - 1))
}

pub fn kruskal_sfs(dims: ProblemDims, r_cap: usize) -> BoundEntry {
    let id = PropositionId::KruskalSfs;
    if let Some(e) = require_sfs(id, &dims) {
        return e;
    }
    let (i, k) = (dims.i as i64, dims.k as i64);
    BoundEntry::scan(id, r_cap, |r| 2 * r <= 2 * i.min(r) + k.min(r) - 2)
}

pub fn prop18(dims: ProblemDims, r_cap: usize) -> BoundEntry {
    let id = PropositionId::Prop18;
    if let Some(e) = require_sfs(id, &dims) {
        return e;
    }
    let (i, k) = (dims.i as i64, dims.k as i64);
    if i < 4 {
        return BoundEntry::gated(id, "needs 4 <= I");
    }
    BoundEntry::scan(id, r_cap, |r| i < r && r <= k && 2 * r <= i * i - i)
}

pub fn prop19(dims: ProblemDims, r_cap: usize) -> Result<BoundEntry> {
    let id = PropositionId::Prop19;
    if let Some(e) = require_sfs(id, &dims) {
        return Ok(e);
    }
    let (i, k) = (dims.i as i64, dims.k as i64);
    check_forms("PROP19", r_cap, |r| {
        (
            forms::prop19_radical(i, k, r),
            forms::prop19_m_form(i, k, r),
        )
    })?;
    Ok(BoundEntry::scan(id, r_cap, |r| {
        forms::prop19_radical(i, k, r)
    }))
}

pub fn prop110(dims: ProblemDims, r_cap: usize) -> Result<BoundEntry> {
    let id = PropositionId::Prop110;
    if let Some(e) = require_sfs(id, &dims) {
        return Ok(e);
    }
    let (i, k) = (dims.i as i64, dims.k as i64);
    check_forms("PROP110", r_cap, |r| {
        (
            forms::prop110_radical(i, k, r),
            forms::prop110_m_form(i, k, r),
        )
    })?;
    Ok(BoundEntry::scan(id, r_cap, |r| {
        forms::prop110_radical(i, k, r)
    }))
}

fn check_forms(what: &str, r_cap: usize, both: impl Fn(i64) -> (bool, bool)) -> Result<()> {
    for r in 1..=r_cap {
        let (a, b) = both(r as i64);
        if a != b {
            return Err(Error::InternalInconsistency {
                what: what.into(),
                rank: r,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundTable {
    pub dims: ProblemDims,
    /// Ascending dimensions the unstructured bounds were evaluated on.
    pub sorted_dims: Option<[usize; 3]>,
    pub field: FieldSelection,
    pub r_cap: usize,
    pub entries: Vec<BoundEntry>,
    /// Largest guaranteed rank over proven entries admitted by `field`.
    pub overall_max: usize,
}

impl BoundTable {
    pub fn entry(&self, id: PropositionId) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Ranks guaranteed by at least one proven entry admitted by the field.
    pub fn guaranteed_ranks(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self
            .entries
            .iter()
            .filter(|e| !e.literature_only && self.field.admits(e.field))
            .flat_map(|e| e.rank_set.iter().copied())
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    }
}

fn sfs_base_entries(dims: ProblemDims, r_cap: usize) -> Result<Vec<BoundEntry>> {
    Ok(vec![
        kruskal_sfs(dims, r_cap),
        prop18(dims, r_cap),
        prop19(dims, r_cap)?,
        prop110(dims, r_cap)?,
    ])
}

/// Runs every applicable bound. SFS tables also carry the monotone closure:
/// a rank guaranteed at `(I, K₁)` with `K₁ ≤ K` is guaranteed at `(I, K)`,
/// together with every smaller rank.
pub fn aggregate(dims: ProblemDims, r_cap: usize, field: FieldSelection) -> Result<BoundTable> {
    let (sorted_dims, entries) = if dims.sfs {
        let mut entries = sfs_base_entries(dims, r_cap)?;
        let mut best = (0, dims.k);
        for k1 in 1..=dims.k {
            let here = sfs_base_entries(ProblemDims { k: k1, ..dims }, r_cap)?
                .iter()
                .map(|e| e.max_rank)
                .max()
                .unwrap_or(0);
            if here > best.0 {
                best = (here, k1);
            }
        }
        let closure = if best.0 == 0 {
            BoundEntry::gated(
                PropositionId::SfsMonotoneClosure,
                "no SFS bound applies for any K' <= K",
            )
        } else {
            let mut e = BoundEntry::scan(PropositionId::SfsMonotoneClosure, r_cap, |r| {
                r as usize <= best.0
            });
            e.reason = Some(format!("rank {} guaranteed at K' = {}", best.0, best.1));
            e
        };
        entries.push(closure);
        (None, entries)
    } else {
        let mut entries = vec![kruskal_generic(dims, r_cap), strassen_co(dims, r_cap)];
        entries.extend(prop14(dims, r_cap));
        entries.push(nick_formula(dims, r_cap));
        entries.push(prop15(dims, r_cap)?);
        entries.push(cor16(dims, r_cap));
        (Some(dims.sorted()), entries)
    };
    let overall_max = entries
        .iter()
        .filter(|e| !e.literature_only && field.admits(e.field))
        .map(|e| e.max_rank)
        .max()
        .unwrap_or(0);
    Ok(BoundTable {
        dims,
        sorted_dims,
        field,
        r_cap,
        entries,
        overall_max,
    })
}
