//! Near-uniform edge sampling from one non-adaptive round.
//!
//! Runs the edge estimator's pipeline with neighbor-mode degree sketches. After
//! the last refinement pass a recovered vertex `v` is drawn with probability
//! proportional to `γ^μ(ℓ̂(v)) d̂_ℓ̂(v)(v)` and paired with the neighbor recovered
//! for the part that gave `v` its minimum.
//!
//! For `k` samples the neighbor recovery is instantiated `k` times in the same
//! plan, so sample `i` uses instantiation `i` and repeated vertex draws get
//! fresh neighbors. The degree tables and recovered set are shared.

use serde::Serialize;

use crate::degree::DegreeMode;
use crate::error::{Error, Result};
use crate::estimator::Pipeline;
use crate::oracle::BisOracle;
use crate::params::{Constants, Profile};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleStatus {
    Ok,
    /// Nothing was recovered, e.g. the graph has no edges.
    NoEdges,
    /// The drawn vertex had no recovered neighbor.
    SampleFailure,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplerOutput {
    pub seed: u64,
    pub sample_index: u64,
    pub v: Option<u32>,
    pub u: Option<u32>,
    pub weight: f64,
    pub status: SampleStatus,
}

impl SamplerOutput {
    /// The sampled pair with the smaller endpoint first.
    pub fn edge(&self) -> Option<(usize, usize)> {
        match (self.status, self.v, self.u) {
            (SampleStatus::Ok, Some(v), Some(u)) => Some((v.min(u) as usize, v.max(u) as usize)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleBatch {
    pub samples: Vec<SamplerOutput>,
    pub m_hat: f64,
    pub recovered: usize,
    pub bis_count: u128,
    pub rounds: u64,
    pub profile: Profile,
}

impl SampleBatch {
    pub fn successes(&self) -> usize {
        self.samples.iter().filter(|s| s.status == SampleStatus::Ok).count()
    }

    /// At least `(1 - 2ε) k` samples succeeded.
    pub fn succeeded(&self, epsilon: f64) -> bool {
        self.successes() as f64 >= (1.0 - 2.0 * epsilon) * self.samples.len() as f64
    }
}

pub fn sample_edges_batch(oracle: &BisOracle, k: u64, epsilon: f64, seed: u64, consts: &Constants) -> Result<SampleBatch> {
    if k == 0 {
        return Err(Error::InvalidParam("sample count must be at least 1".into()));
    }
    let before = oracle.ledger();
    let mode = DegreeMode::Neighbors { replicas: k };
    let pipeline = Pipeline::build(oracle.n(), epsilon, seed, consts, mode, "sampler")?;
    let scope = oracle.begin_round();
    let answers = oracle.submit(&pipeline.plan)?;
    scope.end();
    let outcome = pipeline.finish(oracle, &answers)?;

    let mut vertices = Vec::new();
    let mut cumulative = Vec::new();
    let mut total = 0.0;
    for (v, j, d) in outcome.state.recovered_vertices(&outcome.tables) {
        let w = pipeline.schedule.weight(j) * d;
        if w > 0.0 {
            total += w;
            vertices.push((v, j, w));
            cumulative.push(total);
        }
    }

    let draw_key = rng::derive(seed, "vertex-draw", 0);
    let samples = (0..k)
        .map(|i| {
            if vertices.is_empty() {
                return SamplerOutput { seed, sample_index: i, v: None, u: None, weight: 0.0, status: SampleStatus::NoEdges };
            }
            let x = rng::unit(draw_key, i) * total;
            let pick = cumulative.partition_point(|&c| c <= x).min(vertices.len() - 1);
            let (v, j, w) = vertices[pick];
            let u = pipeline.sketches[j].neighbor(&outcome.tables[j], v, i, &answers);
            SamplerOutput {
                seed,
                sample_index: i,
                v: Some(v as u32),
                u,
                weight: w,
                status: if u.is_some() { SampleStatus::Ok } else { SampleStatus::SampleFailure },
            }
        })
        .collect();
    let spent = oracle.ledger().since(&before);
    Ok(SampleBatch {
        samples,
        m_hat: *outcome.trace.last().unwrap(),
        recovered: outcome.state.recovered,
        bis_count: spent.bis_count,
        rounds: spent.round_count,
        profile: consts.profile,
    })
}

pub fn sample_edge(oracle: &BisOracle, epsilon: f64, seed: u64, consts: &Constants) -> Result<SamplerOutput> {
    Ok(sample_edges_batch(oracle, 1, epsilon, seed, consts)?.samples.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;
    use crate::Graph;
    use std::sync::Arc;

    #[test]
    fn empty_graph_has_no_edges() {
        let o = BisOracle::new(Arc::new(Graph::empty(16)));
        let s = sample_edge(&o, 0.25, 1, &Constants::fast()).unwrap();
        assert_eq!(s.status, SampleStatus::NoEdges);
        assert_eq!(o.ledger().round_count, 1);
    }

    #[test]
    fn single_edge() {
        let o = BisOracle::new(Arc::new(Graph::from_edges(2, [(0, 1)]).unwrap()));
        for seed in 0..10 {
            let s = sample_edge(&o, 0.25, seed, &Constants::fast()).unwrap();
            if s.status == SampleStatus::Ok {
                assert_eq!(s.edge(), Some((0, 1)));
            }
        }
    }

    #[test]
    fn triangle_batch_is_uniform_and_one_round() {
        let g = Arc::new(generate::clique(3));
        let o = BisOracle::new(g.clone());
        let batch = sample_edges_batch(&o, 3000, 0.25, 4, &Constants::fast()).unwrap();
        assert_eq!(batch.rounds, 1);
        let mut counts = std::collections::BTreeMap::new();
        for s in &batch.samples {
            let e = s.edge().unwrap();
            assert!(g.has_edge(e.0, e.1));
            *counts.entry(e).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 3);
        let sd = (3000.0f64 / 3.0 * 2.0 / 3.0).sqrt();
        for &c in counts.values() {
            assert!((c as f64 - 1000.0).abs() < 3.0 * sd, "{counts:?}");
        }
    }

    #[test]
    fn zero_samples_rejected() {
        let o = BisOracle::new(Arc::new(generate::clique(3)));
        assert!(sample_edges_batch(&o, 0, 0.25, 1, &Constants::fast()).is_err());
    }
}
