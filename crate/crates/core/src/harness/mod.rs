//! Seeded trial campaigns, summaries and dry-run audits.
//!
//! Trial `i` of a campaign with master seed `s` runs with seed
//! `derive(s, "trial", i)`, so adding trials leaves earlier ones unchanged.
//! Trials run on the rayon pool; results come back in trial order.

pub mod audit;
pub mod csv;

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::connectivity::{is_connected, ConnectivityVerdict};
use crate::error::{Error, Result};
use crate::estimator::{estimate_edges, EdgeEstimate};
use crate::graph::Graph;
use crate::oracle::{BisOracle, EvalMode};
use crate::params::Constants;
use crate::rng;
use crate::sampler::{sample_edges_batch, SampleStatus};

pub fn trial_seed(master: u64, index: u64) -> u64 {
    rng::derive(master, "trial", index)
}

/// Runs `f(index, seed)` for every trial in parallel. The first error wins.
pub fn run_trials<T, F>(trials: u64, master: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, u64) -> Result<T> + Sync,
{
    (0..trials).into_par_iter().map(|i| f(i, trial_seed(master, i))).collect()
}

fn histogram(rounds: impl Iterator<Item = u64>) -> BTreeMap<u64, u64> {
    let mut h = BTreeMap::new();
    for r in rounds {
        *h.entry(r).or_insert(0) += 1;
    }
    h
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, k) = xs.fold((0.0, 0usize), |(s, k), x| (s + x, k + 1));
    if k == 0 {
        0.0
    } else {
        s / k as f64
    }
}

/// Shared campaign settings.
#[derive(Clone, Debug)]
pub struct Campaign {
    pub epsilon: f64,
    pub seed: u64,
    pub trials: u64,
    pub consts: Constants,
    pub mode: EvalMode,
    /// Compare against the exact answer when set.
    pub with_truth: bool,
}

impl Campaign {
    pub fn new(epsilon: f64, seed: u64, trials: u64, consts: Constants) -> Self {
        Self { epsilon, seed, trials, consts, mode: EvalMode::default(), with_truth: false }
    }

    fn oracle(&self, graph: &Arc<Graph>) -> BisOracle {
        BisOracle::new(graph.clone()).with_mode(self.mode)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateSummary {
    pub kind: &'static str,
    pub trials: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_true: Option<usize>,
    /// Share of trials with `|m̂ - m| ≤ ε m`; needs the truth.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_rel_error: Option<f64>,
    pub mean_m_hat: f64,
    pub mean_bis_count: f64,
    pub rounds_histogram: BTreeMap<u64, u64>,
}

/// Relative error, with `m = 0` counted exact only when `m̂ = 0`.
pub fn relative_error(m_hat: f64, m: usize) -> f64 {
    if m == 0 {
        if m_hat == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (m_hat - m as f64).abs() / m as f64
    }
}

pub fn estimate_campaign(graph: &Arc<Graph>, c: &Campaign) -> Result<(Vec<EdgeEstimate>, EstimateSummary)> {
    let reports = run_trials(c.trials, c.seed, |_, seed| {
        let oracle = c.oracle(graph);
        let mut r = estimate_edges(&oracle, c.epsilon, seed, &c.consts)?;
        if r.rounds != 1 {
            return Err(Error::Contract(format!("estimator used {} rounds", r.rounds)));
        }
        if c.with_truth {
            r.m_true = Some(graph.m());
        }
        Ok(r)
    })?;
    let m = graph.m();
    let errors: Vec<f64> = reports.iter().map(|r| relative_error(r.m_hat, m)).collect();
    let summary = EstimateSummary {
        kind: "estimate_summary",
        trials: c.trials,
        m_true: c.with_truth.then_some(m),
        success_rate: c
            .with_truth
            .then(|| errors.iter().filter(|&&e| e <= c.epsilon).count() as f64 / c.trials.max(1) as f64),
        mean_rel_error: c.with_truth.then(|| mean(errors.iter().copied())),
        mean_m_hat: mean(reports.iter().map(|r| r.m_hat)),
        mean_bis_count: mean(reports.iter().map(|r| r.bis_count as f64)),
        rounds_histogram: histogram(reports.iter().map(|r| r.rounds)),
    };
    Ok((reports, summary))
}

/// One sampler batch.
#[derive(Clone, Debug, Serialize)]
pub struct SampleTrial {
    pub kind: &'static str,
    pub seed: u64,
    pub requested: u64,
    pub successes: u64,
    pub failures: u64,
    pub no_edges: u64,
    pub m_hat: f64,
    pub recovered: usize,
    pub bis_count: u128,
    pub rounds: u64,
    /// Sampled edges with counts, smaller endpoint first.
    pub counts: Vec<((u32, u32), u64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleSummary {
    pub kind: &'static str,
    pub trials: u64,
    pub draws: u64,
    pub successes: u64,
    pub success_rate: f64,
    /// Share of batches with at least `(1 - 2ε) k` successes.
    pub batch_success_rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_true: Option<usize>,
    /// Total variation distance from uniform over edges; needs the truth.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tv: Option<f64>,
    /// Largest `|f_e m - 1|` over edges; needs the truth.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_rel_deviation: Option<f64>,
    pub distinct_edges: usize,
    pub mean_bis_count: f64,
    pub rounds_histogram: BTreeMap<u64, u64>,
}

/// Empirical edge counts with the total variation distance from uniform over
/// `graph`'s edges. Pairs that are not edges count as pure error.
pub fn tv_from_uniform(graph: &Graph, counts: &BTreeMap<(u32, u32), u64>) -> (f64, f64) {
    let total: u64 = counts.values().sum();
    let m = graph.m();
    if total == 0 || m == 0 {
        return (if total == 0 && m == 0 { 0.0 } else { 1.0 }, 0.0);
    }
    let uniform = 1.0 / m as f64;
    let mut tv = 0.0;
    let mut worst: f64 = 0.0;
    for (u, v) in graph.edges() {
        let f = counts.get(&(u as u32, v as u32)).copied().unwrap_or(0) as f64 / total as f64;
        tv += (f - uniform).abs();
        worst = worst.max((f * m as f64 - 1.0).abs());
    }
    for (&(u, v), &k) in counts {
        if !graph.has_edge(u as usize, v as usize) {
            tv += k as f64 / total as f64;
        }
    }
    (tv / 2.0, worst)
}

pub fn sample_campaign(graph: &Arc<Graph>, count: u64, c: &Campaign) -> Result<(Vec<SampleTrial>, SampleSummary)> {
    let trials = run_trials(c.trials, c.seed, |_, seed| {
        let oracle = c.oracle(graph);
        let batch = sample_edges_batch(&oracle, count, c.epsilon, seed, &c.consts)?;
        if batch.rounds != 1 {
            return Err(Error::Contract(format!("sampler used {} rounds", batch.rounds)));
        }
        let mut counts = BTreeMap::new();
        let (mut failures, mut no_edges) = (0, 0);
        for s in &batch.samples {
            match s.status {
                SampleStatus::Ok => {
                    let (u, v) = s.edge().expect("ok sample has an edge");
                    if !graph.has_edge(u, v) {
                        return Err(Error::Contract(format!("sampler returned non-edge ({u}, {v})")));
                    }
                    *counts.entry((u as u32, v as u32)).or_insert(0u64) += 1;
                }
                SampleStatus::SampleFailure => failures += 1,
                SampleStatus::NoEdges => no_edges += 1,
            }
        }
        Ok(SampleTrial {
            kind: "sample_trial",
            seed,
            requested: count,
            successes: counts.values().sum(),
            failures,
            no_edges,
            m_hat: batch.m_hat,
            recovered: batch.recovered,
            bis_count: batch.bis_count,
            rounds: batch.rounds,
            counts: counts.into_iter().collect(),
        })
    })?;
    let mut pooled = BTreeMap::new();
    for t in &trials {
        for &(e, k) in &t.counts {
            *pooled.entry(e).or_insert(0u64) += k;
        }
    }
    let successes: u64 = pooled.values().sum();
    let draws = count * c.trials;
    let (tv, worst) = tv_from_uniform(graph, &pooled);
    let need = (1.0 - 2.0 * c.epsilon) * count as f64;
    let summary = SampleSummary {
        kind: "sample_summary",
        trials: c.trials,
        draws,
        successes,
        success_rate: successes as f64 / draws.max(1) as f64,
        batch_success_rate: trials.iter().filter(|t| t.successes as f64 >= need).count() as f64
            / c.trials.max(1) as f64,
        m_true: c.with_truth.then_some(graph.m()),
        tv: c.with_truth.then_some(tv),
        max_rel_deviation: c.with_truth.then_some(worst),
        distinct_edges: pooled.len(),
        mean_bis_count: mean(trials.iter().map(|t| t.bis_count as f64)),
        rounds_histogram: histogram(trials.iter().map(|t| t.rounds)),
    };
    Ok((trials, summary))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectivitySummary {
    pub kind: &'static str,
    pub trials: u64,
    pub connected_verdicts: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truth: Option<bool>,
    /// Share of correct verdicts; needs the truth.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub false_connected: Option<u64>,
    pub mean_bis_count: f64,
    pub rounds_histogram: BTreeMap<u64, u64>,
}

pub fn connectivity_campaign(graph: &Arc<Graph>, c: &Campaign) -> Result<(Vec<ConnectivityVerdict>, ConnectivitySummary)> {
    let truth = graph.exact_connected();
    let reports = run_trials(c.trials, c.seed, |_, seed| {
        let oracle = c.oracle(graph);
        let mut v = is_connected(&oracle, seed, c.epsilon, &c.consts)?;
        if v.rounds > 2 {
            return Err(Error::Contract(format!("connectivity used {} rounds", v.rounds)));
        }
        if v.verdict && !truth {
            return Err(Error::Contract("connected verdict on a disconnected graph".into()));
        }
        if c.with_truth {
            v.truth = Some(truth);
        }
        Ok(v)
    })?;
    let yes = reports.iter().filter(|r| r.verdict).count() as u64;
    let correct = reports.iter().filter(|r| r.verdict == truth).count() as f64;
    let summary = ConnectivitySummary {
        kind: "connectivity_summary",
        trials: c.trials,
        connected_verdicts: yes,
        truth: c.with_truth.then_some(truth),
        success_rate: c.with_truth.then(|| correct / c.trials.max(1) as f64),
        false_connected: c.with_truth.then_some(if truth { 0 } else { yes }),
        mean_bis_count: mean(reports.iter().map(|r| r.bis_count as f64)),
        rounds_histogram: histogram(reports.iter().map(|r| r.rounds)),
    };
    Ok((reports, summary))
}
