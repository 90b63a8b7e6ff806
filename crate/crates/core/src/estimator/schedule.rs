//! Sampling levels with a randomly shifted boundary.
//!
//! Level `j ≥ 1` keeps each vertex with probability `γ^-μ(j)` where
//! `μ(j) = jB - s` and `s` is uniform in `[0, B)`. Level 0 is all of `V` and
//! carries weight 1.

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::params::{check_epsilon, log2n, Constants};
use crate::rng;
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelSchedule {
    pub n: usize,
    pub epsilon: f64,
    pub eps_scaled: f64,
    pub scaled: bool,
    pub gamma: f64,
    pub b: u64,
    pub s: u64,
    /// Top level index `L`.
    pub top: usize,
}

/// `ε / (600 log_{1/ε} log₂ n)`, with `n` clamped to at least 4.
pub fn working_epsilon(n: usize, epsilon: f64, scale: bool) -> f64 {
    if !scale {
        return epsilon;
    }
    let loglog = log2n(n.max(4)).ln() / (1.0 / epsilon).ln();
    epsilon / (600.0 * loglog)
}

fn bucket_count(eps_scaled: f64) -> u64 {
    let b = 2.0 / eps_scaled;
    if (b - b.round()).abs() < 1e-6 {
        b.round() as u64
    } else {
        b.ceil() as u64
    }
}

impl LevelSchedule {
    /// Schedule with a fixed shift `s < B`.
    pub fn with_shift(n: usize, epsilon: f64, scale: bool, s: u64) -> Result<Self> {
        check_epsilon(epsilon)?;
        let eps_scaled = working_epsilon(n, epsilon, scale);
        let gamma = 1.0 / (1.0 - eps_scaled);
        let b = bucket_count(eps_scaled);
        let log_gamma_n = (n.max(4) as f64).ln() / (-eps_scaled).ln_1p().abs();
        let top = (log_gamma_n / b as f64).ceil() as usize + 1;
        Ok(Self { n, epsilon, eps_scaled, scaled: scale, gamma, b, s: s.min(b - 1), top })
    }

    pub fn mu(&self, j: usize) -> i64 {
        j as i64 * self.b as i64 - self.s as i64
    }

    /// `γ^μ(j)` for `j ≥ 1`, and 1 at level 0.
    pub fn weight(&self, j: usize) -> f64 {
        if j == 0 {
            1.0
        } else {
            self.gamma.powf(self.mu(j) as f64)
        }
    }

    pub fn rate(&self, j: usize) -> f64 {
        1.0 / self.weight(j)
    }

    /// `max(2, log₂ log₂ n)`.
    pub fn loglog(&self) -> f64 {
        log2n(self.n.max(4)).log2().max(2.0)
    }

    /// `max(1, ⌈2 log_{1/ε} log₂ n⌉)` at the working ε.
    pub fn refine_passes(&self) -> usize {
        let v = 2.0 * log2n(self.n.max(4)).ln() / (1.0 / self.eps_scaled).ln();
        (v.ceil() as usize).max(1)
    }

    /// Recovery threshold at level `j` for current estimate `m_bar`.
    pub fn threshold(&self, j: usize, m_bar: f64, c2: f64) -> f64 {
        m_bar / self.weight(j) * c2 * self.eps_scaled * self.eps_scaled / log2n(self.n)
    }
}

pub fn build_schedule(n: usize, epsilon: f64, seed: u64, consts: &Constants) -> Result<LevelSchedule> {
    let probe = LevelSchedule::with_shift(n, epsilon, consts.scale_epsilon, 0)?;
    let s = rng::rng(rng::derive(seed, "shift", 0)).random_range(0..probe.b);
    LevelSchedule::with_shift(n, epsilon, consts.scale_epsilon, s)
}

/// Nested samples `V = S_0 ⊇ S_1 ⊇ … ⊇ S_L`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSamples {
    pub sets: Vec<VertexSet>,
}

impl LevelSamples {
    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(VertexSet::len).collect()
    }
}

/// `S_1` from `V` at rate `γ^-μ(1)`, then `S_j` from `S_{j-1}` at rate `γ^-B`.
pub fn draw_levels(n: usize, schedule: &LevelSchedule, seed: u64) -> LevelSamples {
    let mut sets = vec![VertexSet::full(n)];
    let step = schedule.gamma.powf(-(schedule.b as f64));
    for j in 1..=schedule.top {
        let rate = if j == 1 { schedule.rate(1) } else { step };
        let key = rng::derive(seed, "level", j as u64);
        let prev = &sets[j - 1];
        let next = VertexSet::from_vertices(n, prev.iter().filter(|&v| rng::keep(key, v as u64, rate))).unwrap();
        sets.push(next);
    }
    LevelSamples { sets }
}
