//! Coarse `O(log² n)`-factor bootstrap for the edge count.
//!
//! One random bipartition `(A, B)`. For rate index `i` both sides are
//! subsampled at `2^-⌈i/2⌉`, so a crossing edge survives with probability about
//! `2^-i`, and `⌈8 ln n⌉` repetitions estimate how often some crossing edge
//! survives. The largest `i` at which that happens at least half the time sets
//! the scale.

use std::sync::Arc;

use serde::Serialize;

use crate::error::Result;
use crate::oracle::plan::Sweep;
use crate::oracle::{BatchAnswers, BisOracle, EntryId, QueryPlan};
use crate::params::log2n;
use crate::rng;
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug)]
pub struct CoarsePlan {
    entry: EntryId,
    reps: u64,
    n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoarseEstimate {
    /// `2^i†`, or 0 when no rate saw an edge half the time.
    pub raw: f64,
    /// `max(2, 16 log₂ n · raw)`.
    pub m0: f64,
}

/// Rate indices `0..=2⌈log₂ n⌉` and `⌈8 ln n⌉` repetitions each.
pub fn coarse_shape(n: usize) -> (usize, u64) {
    let levels = 2 * log2n(n).ceil() as usize + 1;
    let reps = (8.0 * (n.max(2) as f64).ln()).ceil() as u64;
    (levels, reps)
}

impl CoarsePlan {
    pub fn plan(n: usize, seed: u64, tag: &str, plan: &mut QueryPlan) -> Result<Self> {
        let (levels, reps) = coarse_shape(n);
        let side_key = rng::derive(seed, "bipartition", 0);
        let a = VertexSet::from_vertices(n, (0..n).filter(|&v| rng::keep(side_key, v as u64, 0.5)))?;
        let b = a.complement();
        let sweep = Sweep {
            left: Arc::new(a),
            right: Arc::new(b),
            rates: (0..levels).map(|i| 0.5f64.powi(i.div_ceil(2) as i32)).collect(),
            reps,
            key: rng::derive(seed, "coarse", 0),
            sample_left: true,
        };
        let entry = plan.push_sweep(tag, sweep)?;
        Ok(Self { entry, reps, n })
    }

    pub fn decode(&self, answers: &BatchAnswers<'_>) -> CoarseEstimate {
        let counts = answers.counts(self.entry);
        let hit = |i: usize| 2 * (self.reps - counts[i]) >= self.reps;
        let raw = (0..counts.len()).rev().find(|&i| hit(i)).map_or(0.0, |i| 2f64.powi(i as i32));
        CoarseEstimate { raw, m0: (16.0 * log2n(self.n) * raw).max(2.0) }
    }
}

pub fn coarse_estimate(oracle: &BisOracle, seed: u64) -> Result<CoarseEstimate> {
    let mut plan = QueryPlan::new();
    let coarse = CoarsePlan::plan(oracle.n(), seed, "coarse", &mut plan)?;
    let answers = oracle.submit(&plan)?;
    Ok(coarse.decode(&answers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;
    use crate::Graph;

    #[test]
    fn empty_graph_gives_two() {
        let o = BisOracle::new(Arc::new(Graph::empty(64)));
        let c = coarse_estimate(&o, 1).unwrap();
        assert_eq!((c.raw, c.m0), (0.0, 2.0));
        let (levels, reps) = coarse_shape(64);
        assert_eq!(o.ledger().bis_count, levels as u128 * reps as u128);
    }

    #[test]
    fn clique_sandwich() {
        let o = BisOracle::new(Arc::new(generate::clique(64)));
        let m = 2016.0;
        for seed in 0..50 {
            let c = coarse_estimate(&o, seed).unwrap();
            assert!(c.m0 >= m && c.m0 <= 64.0 * 36.0 * m, "seed {seed}: {c:?}");
        }
    }
}
