use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix as Weights;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::FactorSet;

/// Integer scale for the assignment weights.
const WEIGHT_SCALE: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchResult {
    /// Term `r` of the first set is matched with term `permutation[r]` of the
    /// second.
    pub permutation: Vec<usize>,
    /// Smallest congruence over matched terms, in `[0, 1]`.
    pub congruence: f64,
    /// Congruence of each matched term.
    pub term_congruences: Vec<f64>,
    /// `‖Σ_r (t_r − t'_{π(r)})‖`-style relative error between matched rank-1
    /// terms: `sqrt(Σ_r ‖t_r − t'_{π(r)}‖²) / sqrt(Σ_r ‖t_r‖²)`.
    pub residual: f64,
}

fn inner<S: Scalar>(x: &[S], y: &[S]) -> S {
    let mut acc = S::zero();
    for (a, b) in x.iter().zip(y) {
        acc += a.conjugate() * *b;
    }
    acc
}

fn norm<S: Scalar>(x: &[S]) -> f64 {
    x.iter().map(|v| v.abs_f64().powi(2)).sum::<f64>().sqrt()
}

struct Terms<S> {
    cols: [Vec<Vec<S>>; 3],
    norms: [Vec<f64>; 3],
}

impl<S: Scalar> Terms<S> {
    fn of(f: &FactorSet<S>) -> Self {
        let cols =
            [f.a(), f.b(), f.c()].map(|m| (0..m.cols()).map(|j| m.column(j)).collect::<Vec<_>>());
        let norms = [0, 1, 2].map(|x| cols[x].iter().map(|c| norm(c)).collect());
        Self { cols, norms }
    }

    fn term_norm(&self, r: usize) -> f64 {
        self.norms[0][r] * self.norms[1][r] * self.norms[2][r]
    }

    /// `⟨t_r, t'_s⟩` of the rank-1 tensors.
    fn term_inner(&self, other: &Self, r: usize, s: usize) -> S {
        (0..3)
            .map(|x| inner(&self.cols[x][r], &other.cols[x][s]))
            .fold(S::one(), |acc, v| acc * v)
    }

    /// `‖t_r − t'_s‖²`, summed entrywise to avoid cancellation.
    fn term_distance_sq(&self, other: &Self, r: usize, s: usize) -> f64 {
        let [a, b, c] = [0, 1, 2].map(|x| (&self.cols[x][r], &other.cols[x][s]));
        let mut acc = 0.0;
        for k in 0..c.0.len() {
            for j in 0..b.0.len() {
                for i in 0..a.0.len() {
                    let d = a.0[i] * b.0[j] * c.0[k] - a.1[i] * b.1[j] * c.1[k];
                    acc += d.abs_f64().powi(2);
                }
            }
        }
        acc
    }

    /// Product of absolute cosines of the three column pairs; 0 when any
    /// column vanishes.
    fn congruence(&self, other: &Self, r: usize, s: usize) -> f64 {
        let denom = self.term_norm(r) * other.term_norm(s);
        if denom == 0.0 {
            return 0.0;
        }
        (self.term_inner(other, r, s).abs_f64() / denom).clamp(0.0, 1.0)
    }
}

/// Optimal matching of the rank-1 terms of two decompositions, modulo
/// permutation and per-term scaling.
pub fn match_decompositions<S: Scalar>(
    f1: &FactorSet<S>,
    f2: &FactorSet<S>,
) -> Result<MatchResult> {
    if f1.rank() != f2.rank() || f1.dims() != f2.dims() {
        return Err(Error::ShapeMismatch(format!(
            "{:?} rank {} vs {:?} rank {}",
            f1.dims(),
            f1.rank(),
            f2.dims(),
            f2.rank()
        )));
    }
    let r = f1.rank();
    let (t1, t2) = (Terms::of(f1), Terms::of(f2));
    let phi: Vec<Vec<f64>> = (0..r)
        .map(|x| (0..r).map(|y| t1.congruence(&t2, x, y)).collect())
        .collect();
    let weights = Weights::from_rows(phi.iter().map(|row| {
        row.iter()
            .map(|&v| (v * WEIGHT_SCALE).round() as i64)
            .collect::<Vec<_>>()
    }))
    .map_err(|e| Error::ShapeMismatch(e.to_string()))?;
    let (_, permutation) = kuhn_munkres(&weights);

    let term_congruences: Vec<f64> = (0..r).map(|x| phi[x][permutation[x]]).collect();
    let congruence = term_congruences.iter().copied().fold(1.0, f64::min);
    let (mut diff, mut total) = (0.0, 0.0);
    for (x, &y) in permutation.iter().enumerate() {
        diff += t1.term_distance_sq(&t2, x, y);
        total += t1.term_norm(x).powi(2);
    }
    let residual = if total == 0.0 {
        diff.sqrt()
    } else {
        (diff / total).sqrt()
    };
    Ok(MatchResult {
        permutation,
        congruence,
        term_congruences,
        residual,
    })
}
