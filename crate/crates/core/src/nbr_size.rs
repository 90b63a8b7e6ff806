//! Neighborhood size estimation: a `(1 ± ε)` estimate of `|Γ(L) ∩ R|`.
//!
//! Level `i` keeps each vertex of `R` with probability `2^-i`, and `T` repeated
//! queries per level count how often the subsample misses `Γ(L)` entirely. That
//! frequency estimates `(1 - 2^-i)^k` for `k = |Γ(L) ∩ R|`, which is inverted at
//! the first level where it is bounded away from zero.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::plan::Sweep;
use crate::oracle::{BisOracle, QueryPlan};
use crate::params::{check_delta, check_epsilon, log2n, Constants};
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NsParams {
    pub epsilon: f64,
    pub delta: f64,
    /// Repetitions per level.
    pub reps: u64,
    pub level_count: usize,
}

/// `⌊log₂ n⌋ + 1`.
pub fn level_count(n: usize) -> usize {
    n.max(1).ilog2() as usize + 1
}

/// `⌈c_T ln(log₂ n / δ) ε⁻²⌉` as a float, for audits that exceed `u64`.
pub fn reps_f64(n: usize, epsilon: f64, delta: f64, c_t: f64) -> f64 {
    (c_t * (log2n(n) / delta).ln() / (epsilon * epsilon)).ceil().max(1.0)
}

impl NsParams {
    pub fn new(n: usize, epsilon: f64, delta: f64, c_t: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        check_delta(delta)?;
        let reps = reps_f64(n, epsilon, delta, c_t);
        if reps >= u64::MAX as f64 {
            return Err(Error::InvalidParam(format!("repetition count {reps:e} overflows u64")));
        }
        Ok(Self { epsilon, delta, reps: reps as u64, level_count: level_count(n) })
    }

    pub fn for_constants(n: usize, epsilon: f64, delta: f64, consts: &Constants) -> Result<Self> {
        Self::new(n, epsilon, delta, consts.c_t)
    }

    /// Queries issued by one estimation.
    pub fn size(&self) -> u128 {
        self.level_count as u128 * self.reps as u128
    }

    /// Decoding threshold `(1 - ε) / (2e²)`.
    pub fn threshold(&self) -> f64 {
        (1.0 - self.epsilon) / (2.0 * std::f64::consts::E.powi(2))
    }
}

/// The sweep behind one estimation; rates `2^-i` for `i < level_count`.
pub fn ns_sweep(left: Arc<VertexSet>, right: Arc<VertexSet>, params: &NsParams, seed: u64) -> Sweep {
    Sweep {
        left,
        right,
        rates: (0..params.level_count).map(|i| 0.5f64.powi(i as i32)).collect(),
        reps: params.reps,
        key: seed,
        sample_left: false,
    }
}

pub fn plan_ns(left: &VertexSet, right: &VertexSet, params: &NsParams, seed: u64) -> Result<QueryPlan> {
    let mut plan = QueryPlan::new();
    plan.push_sweep("ns", ns_sweep(Arc::new(left.clone()), Arc::new(right.clone()), params, seed))?;
    Ok(plan)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NsDecode {
    pub estimate: f64,
    /// Level the estimate was read from.
    pub level: usize,
    /// Set when no level fell below the threshold and the top level was used.
    pub fell_through: bool,
}

/// Inverts the per-level miss frequencies.
///
/// Returns 0 when level 0 never hit. Otherwise reads level `î`, one above the
/// last level whose frequency is below the threshold, and returns
/// `ln p̂(î) / ln(1 - 2^-î)`. At `î = 1` the estimate is within `2ε < 1/2` of
/// an integer `k ≤ 4`, so it is rounded.
pub fn decode_ns(counts: &[u64], params: &NsParams) -> Result<NsDecode> {
    if counts.len() != params.level_count {
        return Err(Error::Decode(format!("expected {} levels, got {}", params.level_count, counts.len())));
    }
    let t = params.reps as f64;
    if counts[0] == params.reps {
        return Ok(NsDecode { estimate: 0.0, level: 0, fell_through: false });
    }
    let top = params.level_count - 1;
    let thr = params.threshold();
    let below = (0..params.level_count).rev().find(|&i| (counts[i] as f64 / t) < thr);
    let (level, fell_through) = match below {
        Some(i) => ((i + 1).min(top), false),
        None => (top, true),
    };
    if level == 0 {
        // Only reachable with a single level: one vertex, so k is 0 or 1.
        return Ok(NsDecode { estimate: 1.0, level, fell_through });
    }
    let c = counts[level];
    if c == 0 {
        return Err(Error::Decode(format!("no misses at level {level}")));
    }
    let p = c as f64 / t;
    let mut estimate = (p.ln() / (-(0.5f64.powi(level as i32))).ln_1p()).max(0.0);
    if level == 1 {
        estimate = estimate.round().max(1.0);
    }
    Ok(NsDecode { estimate, level, fell_through })
}

/// One plan, one batch, one decode.
pub fn estimate_ns(
    oracle: &BisOracle,
    left: &VertexSet,
    right: &VertexSet,
    epsilon: f64,
    delta: f64,
    seed: u64,
    consts: &Constants,
) -> Result<f64> {
    let params = NsParams::for_constants(oracle.n(), epsilon, delta, consts)?;
    let plan = plan_ns(left, right, &params, seed)?;
    let answers = oracle.submit(&plan)?;
    Ok(decode_ns(answers.counts(crate::oracle::EntryId(0)), &params)?.estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;
    use crate::oracle::EvalMode;
    use crate::rng;
    use proptest::prelude::*;

    fn params(level_count: usize, reps: u64, epsilon: f64) -> NsParams {
        NsParams { epsilon, delta: 0.1, reps, level_count }
    }

    #[test]
    fn paper_profile_reps_closed_form() {
        let p = NsParams::for_constants(4096, 0.2, 0.1, &Constants::paper()).unwrap();
        let expect = (2.0 * 8f64.exp() * (12.0f64 / 0.1).ln() * 25.0).ceil() as u64;
        assert_eq!((p.level_count, p.reps), (13, expect));
        assert_eq!(p.size(), 13 * expect as u128);
    }

    #[test]
    fn plan_shape() {
        let p = params(level_count(16), 3, 0.2);
        let plan = plan_ns(&VertexSet::singleton(16, 0), &VertexSet::new(16), &p, 1).unwrap();
        assert_eq!(plan.size(), 15);
        assert!(plan_ns(&VertexSet::singleton(16, 0), &VertexSet::full(16), &p, 1).is_err());
    }

    #[test]
    fn decode_examples() {
        let p = params(5, 100, 0.2);
        assert_eq!(decode_ns(&[100; 5], &p).unwrap().estimate, 0.0);
        // î = 3 with frequency 0.2.
        let d = decode_ns(&[0, 0, 1, 20, 60], &p).unwrap();
        assert_eq!(d.level, 3);
        assert!((d.estimate - 12.053).abs() < 1e-3, "{}", d.estimate);
        assert!(decode_ns(&[0, 0, 0, 0, 0], &p).is_err());
        assert!(decode_ns(&[0, 0], &p).is_err());
        assert_eq!(decode_ns(&[0], &params(1, 10, 0.2)).unwrap().estimate, 1.0);
    }

    #[test]
    fn decode_rounds_small_counts() {
        // k = 1: level-1 frequency near 1/2.
        let p = params(8, 1000, 0.2);
        assert_eq!(decode_ns(&[0, 480, 760, 880, 940, 970, 985, 992], &p).unwrap().estimate, 1.0);
        // k = 3: level-1 frequency near 1/8.
        assert_eq!(decode_ns(&[0, 130, 420, 670, 820, 910, 955, 980], &p).unwrap().estimate, 3.0);
    }

    #[test]
    fn synthetic_counts_invert() {
        let n = 4096;
        let reps = 1_000_000u64;
        let p = params(level_count(n), reps, 0.2);
        for k in (4..=n / 2).step_by(37) {
            let counts: Vec<u64> = (0..p.level_count)
                .map(|i| (reps as f64 * (1.0 - 0.5f64.powi(i as i32)).powi(k as i32)).round() as u64)
                .collect();
            let est = decode_ns(&counts, &p).unwrap().estimate;
            assert!((est - k as f64).abs() <= 0.2 * k as f64, "k={k} est={est}");
        }
    }

    #[test]
    fn exact_cases_through_oracle() {
        let g = Arc::new(generate::star(50));
        let consts = Constants::fast();
        for mode in [EvalMode::Exact, EvalMode::Aggregate] {
            let o = BisOracle::new(g.clone()).with_mode(mode);
            for seed in 0..20 {
                let leaf = VertexSet::singleton(50, 7);
                let others = VertexSet::from_vertices(50, (8..50).chain([0])).unwrap();
                let est = estimate_ns(&o, &leaf, &others, 0.25, 0.1, seed, &consts).unwrap();
                assert_eq!(est, 1.0);
                let far = VertexSet::from_vertices(50, 8..50).unwrap();
                assert_eq!(estimate_ns(&o, &leaf, &far, 0.25, 0.1, seed, &consts).unwrap(), 0.0);
            }
            assert_eq!(o.ledger().round_count, 40);
        }
    }

    #[test]
    fn star_center_estimate() {
        let g = Arc::new(generate::star(300));
        let o = BisOracle::new(g).with_mode(EvalMode::Exact);
        let center = VertexSet::singleton(300, 0);
        let est = estimate_ns(&o, &center, &center.complement(), 0.25, 0.1, 3, &Constants::fast()).unwrap();
        assert!((est - 299.0).abs() <= 0.25 * 299.0, "{est}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn zero_and_one_are_exact(seed in any::<u64>(), p in 0.02f64..0.3) {
            let n = 64;
            let g = Arc::new(generate::gnp(n, p, seed));
            let o = BisOracle::new(g.clone()).with_mode(EvalMode::Exact);
            let v = (seed % n as u64) as usize;
            let left = VertexSet::singleton(n, v);
            // R = one neighbour plus every non-neighbour, or only non-neighbours.
            let mut right = left.complement();
            for &u in g.neighbors(v).iter().skip(1) {
                right.remove(u as usize);
            }
            let truth = g.exact_neighborhood_size(&left, &right).unwrap();
            prop_assert!(truth <= 1);
            let est = estimate_ns(&o, &left, &right, 0.5, 0.5, rng::derive(seed, "ns", 0), &Constants::fast()).unwrap();
            prop_assert_eq!(est, truth as f64);
        }
    }
}
