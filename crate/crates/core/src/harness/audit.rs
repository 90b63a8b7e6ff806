//! Dry-run complexity audits. Plans are sized from their shape alone and
//! nothing is executed, so paper-profile constants are fine here.

use serde::Serialize;

use crate::connectivity::{round1_delta, round1_draws, round2_draws};
use crate::degree::{DegreeMode, DegreeShape};
use crate::error::Result;
use crate::estimator::coarse::coarse_shape;
use crate::estimator::LevelSchedule;
use crate::nbr_size::{plan_ns, NsParams};
use crate::params::{log2n, Constants, PAPER_C_T};
use crate::recovery::SerPlan;
use crate::vertex_set::VertexSet;

/// Default `n` grid: `2^8 ..= 2^12`.
pub fn default_grid() -> Vec<usize> {
    (8..=12).map(|k| 1usize << k).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct NsAudit {
    pub n: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub levels: usize,
    pub reps: u64,
    pub planned: u128,
    /// `(⌊log₂ n⌋ + 1) ⌈c_T ln(log₂ n / δ) / ε²⌉`, computed independently of the planner.
    pub closed_form: u128,
    /// `planned / (ε⁻² log₂ n ln(log₂ n / δ))`.
    pub ratio: f64,
}

pub fn audit_ns(n: usize, epsilon: f64, delta: f64, consts: &Constants) -> Result<NsAudit> {
    let params = NsParams::for_constants(n, epsilon, delta, consts)?;
    let left = VertexSet::singleton(n, 0);
    let plan = plan_ns(&left, &left.complement(), &params, 0)?;
    let planned = plan.size();
    let lg = (n as f64).log2();
    let t = (consts.c_t * (lg / delta).ln() / (epsilon * epsilon)).ceil() as u128;
    let closed_form = (lg.floor() as u128 + 1) * t;
    let ratio = planned as f64 / (lg * (lg / delta).ln() / (epsilon * epsilon));
    Ok(NsAudit { n, epsilon, delta, levels: params.level_count, reps: params.reps, planned, closed_form, ratio })
}

#[derive(Clone, Debug, Serialize)]
pub struct SerAudit {
    pub domain: usize,
    pub delta: f64,
    pub planned: u128,
    /// `planned / (log₂² N ln(1/δ))`.
    pub ratio: f64,
    pub bound_constant: f64,
    pub within_bound: bool,
}

/// Constant `c` in the recovery bound `c log₂² N ln(1/δ)`. The plan has
/// `2(b + 1)²` slots per repetition with `b = ⌈log₂ N⌉`, which is largest
/// relative to `log₂² N` at `N = 2`.
pub fn ser_bound_constant(consts: &Constants) -> f64 {
    10.0 * consts.c_r
}

pub fn audit_ser(domain: usize, delta: f64, consts: &Constants) -> Result<SerAudit> {
    let plan = SerPlan::new(domain, delta, consts.c_r)?;
    let planned = plan.size();
    let lg = (domain.max(2) as f64).log2();
    let ratio = planned as f64 / (lg * lg * (1.0 / delta).ln());
    let c = ser_bound_constant(consts);
    Ok(SerAudit { domain, delta, planned, ratio, bound_constant: c, within_bound: ratio <= c })
}

/// Default recovery grid: domains from 2 to a million, three failure budgets.
pub fn default_ser_grid() -> Vec<(usize, f64)> {
    let domains = [2usize, 5, 16, 17, 100, 1000, 4096, 65_537, 1_000_000];
    let deltas = [0.1, 1e-3, 1e-6];
    domains.iter().flat_map(|&d| deltas.iter().map(move |&e| (d, e))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimatorAudit {
    pub n: usize,
    pub epsilon: f64,
    pub eps_scaled: f64,
    pub levels: usize,
    pub reps: usize,
    pub lambda: u128,
    pub ns_size: u128,
    pub degree_queries: u128,
    pub coarse_queries: u128,
    pub planned: u128,
    /// `planned / (ε⁻⁵ log₂⁵ n)`.
    pub ratio: f64,
}

/// Every level runs the counts-mode degree sketch over all `λ` parts of every
/// repetition, empty parts included, plus the coarse sweep. Execution skips
/// empty parts, so this is the planner's worst case.
pub fn audit_estimator(n: usize, epsilon: f64, consts: &Constants) -> Result<EstimatorAudit> {
    let schedule = LevelSchedule::with_shift(n, epsilon, consts.scale_epsilon, 0)?;
    let shape = DegreeShape::new(n, schedule.eps_scaled, consts, DegreeMode::Counts)?;
    let levels = schedule.top + 1;
    let ns_size = shape.ns.size();
    let degree_queries = (levels as u128)
        .saturating_mul(shape.reps as u128)
        .saturating_mul(shape.lambda)
        .saturating_mul(ns_size);
    let (coarse_levels, coarse_reps) = coarse_shape(n);
    let coarse_queries = coarse_levels as u128 * coarse_reps as u128;
    let planned = degree_queries.saturating_add(coarse_queries);
    let lg = log2n(n);
    let ratio = planned as f64 / (epsilon.powi(-5) * lg.powi(5));
    Ok(EstimatorAudit {
        n,
        epsilon,
        eps_scaled: schedule.eps_scaled,
        levels,
        reps: shape.reps,
        lambda: shape.lambda,
        ns_size,
        degree_queries,
        coarse_queries,
        planned,
        ratio,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectivityAudit {
    pub n: usize,
    pub round1_draws: u64,
    pub round1: u128,
    /// `round1 / log₂⁵ n`, expected to grow linearly in `n`.
    pub round1_normalized: f64,
    /// Round two with every vertex its own supernode, all parts counted.
    pub round2_worst: u128,
}

pub fn audit_connectivity(n: usize, epsilon: f64, consts: &Constants) -> Result<ConnectivityAudit> {
    let draws = round1_draws(n, consts.c_nb);
    let ser = SerPlan::new(n - 1, round1_delta(n), consts.c_r)?;
    let round1 = n as u128 * draws as u128 * ser.size();
    let k = round2_draws(n, consts.c_se);
    let schedule = LevelSchedule::with_shift(n, epsilon, consts.scale_epsilon, 0)?;
    let shape = DegreeShape::new(n, schedule.eps_scaled, consts, DegreeMode::Neighbors { replicas: k })?;
    let parts = ((schedule.top + 1) as u128).saturating_mul(shape.reps as u128).saturating_mul(shape.lambda);
    let per_part_ser = match shape.ser_delta {
        Some(d) => SerPlan::new(n, d, consts.c_r)?.size().saturating_mul(k as u128),
        None => 0,
    };
    let round2_worst = parts.saturating_mul(shape.ns.size().saturating_add(per_part_ser));
    let lg = log2n(n);
    Ok(ConnectivityAudit { n, round1_draws: draws, round1, round1_normalized: round1 as f64 / lg.powi(5), round2_worst })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn growth_exponent(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Full audit table over an `n` grid.
#[derive(Clone, Debug, Serialize)]
pub struct AuditTable {
    pub constants: Constants,
    pub epsilon: f64,
    pub delta: f64,
    pub ns: Vec<NsAudit>,
    pub ser: Vec<SerAudit>,
    pub estimator: Vec<EstimatorAudit>,
    /// `max ratio / min ratio` over the estimator rows.
    pub estimator_band: f64,
    pub connectivity: Vec<ConnectivityAudit>,
    pub connectivity_exponent: f64,
}

pub fn audit_table(grid: &[usize], epsilon: f64, delta: f64, consts: &Constants) -> Result<AuditTable> {
    consts.validate()?;
    let ns = grid.iter().map(|&n| audit_ns(n, epsilon, delta, consts)).collect::<Result<Vec<_>>>()?;
    let ser = default_ser_grid().into_iter().map(|(d, e)| audit_ser(d, e, consts)).collect::<Result<Vec<_>>>()?;
    let estimator = grid.iter().map(|&n| audit_estimator(n, epsilon, consts)).collect::<Result<Vec<_>>>()?;
    let hi = estimator.iter().map(|r| r.ratio).fold(f64::MIN, f64::max);
    let lo = estimator.iter().map(|r| r.ratio).fold(f64::MAX, f64::min);
    let connectivity = grid.iter().map(|&n| audit_connectivity(n, epsilon, consts)).collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, f64)> = connectivity.iter().map(|c| (c.n as f64, c.round1_normalized)).collect();
    Ok(AuditTable {
        constants: consts.clone(),
        epsilon,
        delta,
        ns,
        ser,
        estimator,
        estimator_band: hi / lo,
        connectivity,
        connectivity_exponent: growth_exponent(&pts),
    })
}

/// `(n, ε, δ) = (4096, 0.2, 0.1)` at `c_T = 2e⁸`: `13 ⌈2e⁸ ln 120 · 25⌉`.
pub fn ns_reference_count() -> u128 {
    13 * (PAPER_C_T * 120f64.ln() * 25.0).ceil() as u128
}
