//! Browser demo: three small views onto the laboratory.
//!
//! Each exported function returns a JSON string for `www/index.html` to draw.
//! The same computations are plain Rust functions so they can be tested
//! without a browser.

use std::collections::BTreeMap;
use std::sync::Arc;

use bisq::graph::generate::GenSpec;
use bisq::harness::tv_from_uniform;
use bisq::nbr_size::{decode_ns, plan_ns, NsParams};
use bisq::oracle::EntryId;
use bisq::params::Constants;
use bisq::sampler::sample_edges_batch;
use bisq::{BisOracle, Graph, Result, VertexSet};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
pub struct NsLevel {
    pub level: usize,
    pub rate: f64,
    /// Share of repetitions whose subsample missed every neighbor.
    pub miss_rate: f64,
    /// `(1 - rate)^k` for the true `k`.
    pub expected: f64,
}

#[derive(Serialize)]
pub struct NsCurve {
    pub n: usize,
    pub k: usize,
    pub reps: u64,
    pub threshold: f64,
    pub levels: Vec<NsLevel>,
    pub chosen_level: usize,
    pub estimate: f64,
    pub queries: u128,
}

/// Star with `k` leaves inside `n` vertices; estimates the center's neighborhood.
pub fn ns_curve(n: usize, k: usize, epsilon: f64, delta: f64, seed: u64) -> Result<NsCurve> {
    if k >= n {
        return Err(bisq::Error::InvalidParam(format!("need k < n, got k = {k}, n = {n}")));
    }
    let graph = Graph::from_edges(n, (1..=k).map(|u| (0, u)))?;
    let oracle = BisOracle::new(Arc::new(graph));
    let params = NsParams::for_constants(n, epsilon, delta, &Constants::fast())?;
    let left = VertexSet::singleton(n, 0);
    let plan = plan_ns(&left, &left.complement(), &params, seed)?;
    let answers = oracle.submit(&plan)?;
    let counts = answers.counts(EntryId(0));
    let decoded = decode_ns(counts, &params)?;
    let levels = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let rate = 0.5f64.powi(i as i32);
            NsLevel { level: i, rate, miss_rate: c as f64 / params.reps as f64, expected: (1.0 - rate).powi(k as i32) }
        })
        .collect();
    Ok(NsCurve {
        n,
        k,
        reps: params.reps,
        threshold: params.threshold(),
        levels,
        chosen_level: decoded.level,
        estimate: decoded.estimate,
        queries: oracle.ledger().bis_count,
    })
}

#[derive(Serialize)]
pub struct EdgeBar {
    pub u: u32,
    pub v: u32,
    pub count: u64,
}

#[derive(Serialize)]
pub struct Histogram {
    pub n: usize,
    pub m: usize,
    pub draws: u64,
    pub successes: u64,
    pub expected_per_edge: f64,
    pub tv: f64,
    pub bars: Vec<EdgeBar>,
    pub queries: u128,
}

/// Draws `draws` edges in one batch and counts them per edge, zeros included.
pub fn sample_histogram(spec: &str, draws: u64, epsilon: f64, seed: u64) -> Result<Histogram> {
    let graph = Arc::new(spec.parse::<GenSpec>()?.build()?);
    let oracle = BisOracle::new(graph.clone());
    let batch = sample_edges_batch(&oracle, draws, epsilon, seed, &Constants::fast())?;
    let mut counts: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for s in &batch.samples {
        if let Some((u, v)) = s.edge() {
            *counts.entry((u as u32, v as u32)).or_insert(0) += 1;
        }
    }
    let successes = counts.values().sum();
    let (tv, _) = tv_from_uniform(&graph, &counts);
    let bars = graph
        .edges()
        .map(|(u, v)| {
            let key = (u as u32, v as u32);
            EdgeBar { u: key.0, v: key.1, count: counts.get(&key).copied().unwrap_or(0) }
        })
        .collect();
    Ok(Histogram {
        n: graph.n(),
        m: graph.m(),
        draws,
        successes,
        expected_per_edge: successes as f64 / graph.m().max(1) as f64,
        tv,
        bars,
        queries: batch.bis_count,
    })
}

#[derive(Serialize)]
pub struct RefineTrace {
    pub n: usize,
    pub m: usize,
    pub trace: Vec<f64>,
    pub level_sizes: Vec<usize>,
    pub recovered: usize,
    pub eps_scaled: f64,
    pub queries: u128,
    pub rounds: u64,
}

/// One edge estimate with every refinement pass exposed.
pub fn estimate_trace(spec: &str, epsilon: f64, seed: u64) -> Result<RefineTrace> {
    let graph = Arc::new(spec.parse::<GenSpec>()?.build()?);
    let oracle = BisOracle::new(graph.clone());
    let r = bisq::estimator::estimate_edges(&oracle, epsilon, seed, &Constants::fast())?;
    Ok(RefineTrace {
        n: graph.n(),
        m: graph.m(),
        trace: r.refine_trace,
        level_sizes: r.level_sizes,
        recovered: r.recovered,
        eps_scaled: r.eps_scaled,
        queries: r.bis_count,
        rounds: r.rounds,
    })
}

fn to_js<T: Serialize>(r: Result<T>) -> std::result::Result<String, JsError> {
    let value = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = nsCurve)]
pub fn ns_curve_js(n: usize, k: usize, epsilon: f64, delta: f64, seed: u64) -> std::result::Result<String, JsError> {
    to_js(ns_curve(n, k, epsilon, delta, seed))
}

#[wasm_bindgen(js_name = sampleHistogram)]
pub fn sample_histogram_js(spec: &str, draws: u64, epsilon: f64, seed: u64) -> std::result::Result<String, JsError> {
    to_js(sample_histogram(spec, draws, epsilon, seed))
}

#[wasm_bindgen(js_name = estimateTrace)]
pub fn estimate_trace_js(spec: &str, epsilon: f64, seed: u64) -> std::result::Result<String, JsError> {
    to_js(estimate_trace(spec, epsilon, seed))
}
