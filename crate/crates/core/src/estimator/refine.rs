//! One query-free refinement pass over the per-level degree tables.

use serde::Serialize;

use super::schedule::LevelSchedule;
use crate::degree::DegreeTable;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefineState {
    /// `m̄_t`.
    pub estimate: f64,
    /// `Σ γ^μ(ℓ̂(v)) · d̂_ℓ̂(v)(v)` over recovered vertices.
    pub contribution: f64,
    /// `ℓ̂(v)` per vertex, `None` when not recovered.
    pub level: Vec<Option<u32>>,
    pub recovered: usize,
    pub t: usize,
    pub t_refine: usize,
}

impl RefineState {
    /// Recovered vertices with their level and `d̂` at that level, in vertex order.
    pub fn recovered_vertices<'a>(&'a self, tables: &'a [DegreeTable]) -> impl Iterator<Item = (usize, usize, f64)> + 'a {
        self.level.iter().enumerate().filter_map(move |(v, l)| {
            let j = (*l)? as usize;
            Some((v, j, tables[j].get(v).expect("recovered vertex is in its level")))
        })
    }
}

/// Scans levels `0..=L`; a vertex is recovered at the first level where its
/// estimate clears that level's threshold and contributes `γ^μ(j) d̂_j(v)`.
/// Before the last pass the sum is halved and padded by
/// `(ε log log n)^t m̄₀`; the last pass only halves.
pub fn refine(
    tables: &[DegreeTable],
    schedule: &LevelSchedule,
    c2: f64,
    m_prev: f64,
    m0: f64,
    t: usize,
    t_refine: usize,
) -> RefineState {
    let mut level = vec![None; schedule.n];
    let mut contribution = 0.0;
    let mut recovered = 0;
    for (j, table) in tables.iter().enumerate() {
        let thr = schedule.threshold(j, m_prev, c2);
        let w = schedule.weight(j);
        for (i, &v) in table.members.iter().enumerate() {
            let slot = &mut level[v as usize];
            if slot.is_none() && table.estimate[i] >= thr {
                contribution += w * table.estimate[i];
                *slot = Some(j as u32);
                recovered += 1;
            }
        }
    }
    let estimate = if t < t_refine {
        contribution / 2.0 + (schedule.eps_scaled * schedule.loglog()).powi(t as i32) * m0
    } else {
        contribution / 2.0
    };
    RefineState { estimate, contribution, level, recovered, t, t_refine }
}
