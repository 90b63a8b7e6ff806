//! Non-adaptive edge-count estimation.
//!
//! Everything is planned up front: the level schedule and nested samples,
//! a degree sketch per level and the coarse bootstrap. The plan goes out as one
//! batch in one round. The estimate is then sharpened by query-free
//! refinement passes, each re-thresholding the degree tables with the previous
//! estimate.

pub mod analysis;
pub mod coarse;
pub mod refine;
pub mod schedule;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::degree::{DegreeMode, DegreeSketch, DegreeTable};
use crate::error::{Error, Result};
use crate::oracle::{BatchAnswers, BisOracle, QueryPlan};
use crate::params::{Constants, Profile};
use crate::rng;
pub use analysis::AnalysisOracle;
pub use coarse::{coarse_estimate, CoarseEstimate, CoarsePlan};
pub use refine::{refine, RefineState};
pub use schedule::{build_schedule, draw_levels, LevelSamples, LevelSchedule};

/// The planned estimator: schedule, samples, per-level sketches and the plan.
pub struct Pipeline {
    pub schedule: LevelSchedule,
    pub samples: LevelSamples,
    pub sketches: Vec<DegreeSketch>,
    pub coarse: CoarsePlan,
    pub plan: QueryPlan,
    c2: f64,
}

pub struct PipelineOutcome {
    pub tables: Vec<DegreeTable>,
    pub coarse: CoarseEstimate,
    /// `m̄₀, m̄₁, …, m̄_T`.
    pub trace: Vec<f64>,
    /// State after the last refinement pass.
    pub state: RefineState,
}

impl Pipeline {
    pub fn build(n: usize, epsilon: f64, seed: u64, consts: &Constants, mode: DegreeMode, prefix: &str) -> Result<Self> {
        consts.validate()?;
        let schedule = build_schedule(n, epsilon, rng::derive(seed, "schedule", 0), consts)?;
        let samples = draw_levels(n, &schedule, rng::derive(seed, "levels", 0));
        let mut plan = QueryPlan::new();
        let mut sketches = Vec::with_capacity(samples.sets.len());
        for (j, set) in samples.sets.iter().enumerate() {
            sketches.push(DegreeSketch::plan(
                n,
                set,
                schedule.eps_scaled,
                rng::derive(seed, "degree", j as u64),
                consts,
                mode,
                &format!("{prefix}/degree/level{j}"),
                &mut plan,
            )?);
        }
        let coarse = CoarsePlan::plan(n, rng::derive(seed, "coarse", 0), &format!("{prefix}/coarse"), &mut plan)?;
        Ok(Self { schedule, samples, sketches, coarse, plan, c2: consts.c2 })
    }

    /// Decodes the tables and runs every refinement pass. Fails if the oracle's
    /// ledger moves while refining.
    pub fn finish(&self, oracle: &BisOracle, answers: &BatchAnswers<'_>) -> Result<PipelineOutcome> {
        let tables: Vec<DegreeTable> = self.sketches.iter().map(|s| s.decode(answers)).collect();
        let coarse = self.coarse.decode(answers);
        let before = oracle.ledger();
        let passes = self.schedule.refine_passes();
        let mut trace = vec![coarse.m0];
        let mut state = None;
        for t in 1..=passes {
            let m_prev = *trace.last().unwrap();
            let s = refine(&tables, &self.schedule, self.c2, m_prev, coarse.m0, t, passes);
            trace.push(s.estimate);
            state = Some(s);
        }
        let after = oracle.ledger();
        if after != before {
            return Err(Error::Contract(format!(
                "refinement issued {} queries",
                after.bis_count - before.bis_count
            )));
        }
        Ok(PipelineOutcome { tables, coarse, trace, state: state.expect("at least one pass") })
    }
}

/// Per-run report.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeEstimate {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_true: Option<usize>,
    pub m_hat: f64,
    pub epsilon: f64,
    pub eps_scaled: f64,
    pub profile: Profile,
    pub seed: u64,
    pub bis_count: u128,
    pub rounds: u64,
    pub per_phase_counts: BTreeMap<String, u128>,
    pub refine_trace: Vec<f64>,
    pub coarse_raw: f64,
    pub level_sizes: Vec<usize>,
    pub shift: u64,
    pub buckets: u64,
    pub recovered: usize,
}

pub fn estimate_edges(oracle: &BisOracle, epsilon: f64, seed: u64, consts: &Constants) -> Result<EdgeEstimate> {
    let before = oracle.ledger();
    let pipeline = Pipeline::build(oracle.n(), epsilon, seed, consts, DegreeMode::Counts, "estimator")?;
    let scope = oracle.begin_round();
    let answers = oracle.submit(&pipeline.plan)?;
    scope.end();
    let outcome = pipeline.finish(oracle, &answers)?;
    let spent = oracle.ledger().since(&before);
    Ok(EdgeEstimate {
        n: oracle.n(),
        m_true: None,
        m_hat: *outcome.trace.last().unwrap(),
        epsilon,
        eps_scaled: pipeline.schedule.eps_scaled,
        profile: consts.profile,
        seed,
        bis_count: spent.bis_count,
        rounds: spent.round_count,
        per_phase_counts: spent.phases,
        refine_trace: outcome.trace,
        coarse_raw: outcome.coarse.raw,
        level_sizes: pipeline.samples.sizes(),
        shift: pipeline.schedule.s,
        buckets: pipeline.schedule.b,
        recovered: outcome.state.recovered,
    })
}
