//! Ground-truth level structure for tests: true recovery levels, boundary
//! membership and the exact contribution `X(v)`. Built from true degrees and
//! never consulted by the estimator.

use super::schedule::{LevelSamples, LevelSchedule};
use crate::graph::Graph;
use crate::params::log2n;

#[derive(Clone, Debug)]
pub struct AnalysisOracle {
    /// `ℓ(v)`: first level whose threshold the true degree clears.
    pub level: Vec<Option<usize>>,
    pub boundary: Vec<bool>,
    sigma: f64,
}

impl AnalysisOracle {
    pub fn new(graph: &Graph, schedule: &LevelSchedule, m_bar: f64, c2: f64) -> Self {
        let sigma = m_bar * c2 * schedule.eps_scaled * schedule.eps_scaled / log2n(schedule.n);
        let mut level = Vec::with_capacity(graph.n());
        let mut boundary = Vec::with_capacity(graph.n());
        for v in 0..graph.n() {
            let d = graph.degree(v) as f64;
            let l = (0..=schedule.top).find(|&j| d >= sigma / schedule.weight(j));
            level.push(l);
            boundary.push(l.is_some_and(|l| Self::in_boundary(schedule, sigma, d, l)));
        }
        Self { level, boundary, sigma }
    }

    fn in_boundary(schedule: &LevelSchedule, sigma: f64, d: f64, l: usize) -> bool {
        let g = schedule.gamma;
        let w = schedule.weight(l);
        // Just above this level's threshold.
        if d >= sigma / w && d < sigma * g / w {
            return true;
        }
        // Just below the previous level's threshold.
        if l >= 1 {
            let wp = schedule.weight(l - 1);
            if d > sigma / (wp * g) && d < sigma / wp {
                return true;
            }
        }
        false
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `X(v) = γ^μ(ℓ(v)) d(v)` if `v ∈ S_ℓ(v)`, else 0.
    pub fn x(&self, graph: &Graph, schedule: &LevelSchedule, samples: &LevelSamples, v: usize) -> f64 {
        match self.level[v] {
            Some(l) if samples.sets[l].contains(v) => schedule.weight(l) * graph.degree(v) as f64,
            _ => 0.0,
        }
    }
}
