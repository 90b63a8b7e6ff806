//! Non-adaptive single element recovery.
//!
//! The unknown vector is `x ∈ {0,1}^N` and each query asks whether `x` has a one
//! inside a chosen index set. A repetition subsamples the domain at rate `2^-i`
//! and then asks about the whole subsample, about each bit side
//! (`bit b = 1` and `bit b = 0`), and about the subsample's odd-popcount indices.
//! If exactly one support index survives, every bit pair has exactly one side
//! lit and the lit sides spell the survivor's index. Two or more survivors
//! always differ in some bit, which lights both sides of that pair, so the
//! certificate rejects them. Given that exactly one index survives, it is
//! uniform over the support by symmetry of the subsample.
//!
//! Over a BIS oracle the domain is an ordered set `R`, index `i` is the `i`-th
//! smallest member, and a query on index set `Q` is `bis(L, R[Q])` read as
//! "hit" when it answers 0.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::plan::{QueryPlan, Recovery};
use crate::oracle::BisOracle;
use crate::rng;
use crate::vertex_set::VertexSet;

/// Default repetition constant: `Rreps = ⌈c_R ln(1/δ)⌉`.
pub const DEFAULT_C_R: f64 = 8.0;

/// Query shape of a recovery plan over an `N`-element domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SerPlan {
    domain: usize,
    bits: u32,
    levels: u32,
    reps: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Whole,
    Bit { bit: u32, one: bool },
    Parity,
}

/// One query of the plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SerQuery {
    pub level: u32,
    pub rep: u32,
    pub slot: Slot,
}

/// Answers of one repetition, as hit flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepAnswers {
    pub whole: bool,
    pub ones: u64,
    pub zeros: u64,
    pub parity: bool,
}

impl RepAnswers {
    pub fn hit(&self, slot: Slot) -> bool {
        match slot {
            Slot::Whole => self.whole,
            Slot::Bit { bit, one: true } => self.ones >> bit & 1 == 1,
            Slot::Bit { bit, one: false } => self.zeros >> bit & 1 == 1,
            Slot::Parity => self.parity,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SerOutcome {
    pub recovered: Option<usize>,
    pub level: Option<u32>,
    pub rep: Option<u32>,
    /// Repetitions examined before stopping.
    pub scanned: u32,
    /// Repetitions whose whole-subsample query hit but whose certificate failed.
    pub rejected: u32,
}

fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

impl SerPlan {
    pub fn new(domain: usize, delta: f64, c_r: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParam(format!("recovery delta {delta} outside (0, 1)")));
        }
        if c_r.is_nan() || c_r <= 0.0 {
            return Err(Error::InvalidParam(format!("c_R = {c_r} must be positive")));
        }
        let reps = (c_r * (1.0 / delta).ln()).ceil().max(1.0);
        if reps > u32::MAX as f64 {
            return Err(Error::InvalidParam("recovery repetition count overflows".into()));
        }
        Ok(Self::with_reps(domain, reps as u32))
    }

    pub fn with_reps(domain: usize, reps: u32) -> Self {
        let bits = ceil_log2(domain);
        let levels = if domain == 0 { 0 } else { bits + 1 };
        Self { domain, bits, levels, reps: reps.max(1) }
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn reps(&self) -> u32 {
        self.reps
    }

    pub fn slots_per_rep(&self) -> u32 {
        2 * self.bits + 2
    }

    /// Number of queries in one instantiation.
    pub fn size(&self) -> u128 {
        self.levels as u128 * self.reps as u128 * self.slots_per_rep() as u128
    }

    pub fn rate(level: u32) -> f64 {
        0.5f64.powi(level as i32)
    }

    pub fn rep_key(key: u64, level: u32, rep: u32) -> u64 {
        rng::child(rng::child(key, level as u64), rep as u64)
    }

    /// Every query in plan order: level, then repetition, then slot.
    pub fn queries(&self) -> impl Iterator<Item = SerQuery> + '_ {
        (0..self.levels).flat_map(move |level| {
            (0..self.reps).flat_map(move |rep| {
                std::iter::once(Slot::Whole)
                    .chain((0..self.bits).flat_map(|bit| [Slot::Bit { bit, one: true }, Slot::Bit { bit, one: false }]))
                    .chain(std::iter::once(Slot::Parity))
                    .map(move |slot| SerQuery { level, rep, slot })
            })
        })
    }

    #[inline]
    fn survives(&self, key: u64, level: u32, rep: u32, idx: usize) -> bool {
        level == 0 || rng::keep(Self::rep_key(key, level, rep), idx as u64, Self::rate(level))
    }

    /// Whether domain index `idx` belongs to query `q`'s index set.
    pub fn contains(&self, key: u64, q: SerQuery, idx: usize) -> bool {
        if idx >= self.domain || !self.survives(key, q.level, q.rep, idx) {
            return false;
        }
        match q.slot {
            Slot::Whole => true,
            Slot::Bit { bit, one } => ((idx >> bit) & 1 == 1) == one,
            Slot::Parity => idx.count_ones() % 2 == 1,
        }
    }

    /// All answers of one repetition given the support of `x`.
    pub fn rep_answers(&self, key: u64, level: u32, rep: u32, support: &[usize]) -> RepAnswers {
        let mask = if self.bits == 0 { 0 } else { u64::MAX >> (64 - self.bits) };
        let mut a = RepAnswers { whole: false, ones: 0, zeros: 0, parity: false };
        for &idx in support {
            if idx < self.domain && self.survives(key, level, rep, idx) {
                a.whole = true;
                a.ones |= idx as u64;
                a.zeros |= !(idx as u64) & mask;
                a.parity |= idx.count_ones() % 2 == 1;
            }
        }
        a
    }
}

/// Scans repetitions from the highest sampling rate down and returns the first
/// one whose certificate holds. `hit(q)` is the OR answer of query `q`.
pub fn decode_ser(plan: &SerPlan, mut hit: impl FnMut(SerQuery) -> bool) -> SerOutcome {
    let mut out = SerOutcome::default();
    for level in 0..plan.levels {
        for rep in 0..plan.reps {
            out.scanned += 1;
            let q = |slot| SerQuery { level, rep, slot };
            if !hit(q(Slot::Whole)) {
                continue;
            }
            let mut idx = 0usize;
            let mut isolated = true;
            for bit in 0..plan.bits {
                let one = hit(q(Slot::Bit { bit, one: true }));
                let zero = hit(q(Slot::Bit { bit, one: false }));
                if one == zero {
                    isolated = false;
                    break;
                }
                if one {
                    idx |= 1 << bit;
                }
            }
            if isolated && idx < plan.domain && hit(q(Slot::Parity)) == (idx.count_ones() % 2 == 1) {
                out.recovered = Some(idx);
                out.level = Some(level);
                out.rep = Some(rep);
                return out;
            }
            out.rejected += 1;
        }
    }
    out
}

/// Decodes against a known support, evaluating each repetition once.
pub fn decode_support(plan: &SerPlan, key: u64, support: &[usize]) -> SerOutcome {
    if support.is_empty() {
        return SerOutcome { scanned: plan.levels * plan.reps, ..Default::default() };
    }
    let mut cache: Option<((u32, u32), RepAnswers)> = None;
    decode_ser(plan, |q| match cache {
        Some((at, a)) if at == (q.level, q.rep) => a.hit(q.slot),
        _ => {
            let a = plan.rep_answers(key, q.level, q.rep, support);
            cache = Some(((q.level, q.rep), a));
            a.hit(q.slot)
        }
    })
}

/// A uniform member of `Γ(L) ∩ R`, or `None` on recovery failure. One batch, one round.
pub fn uniform_neighbor_of_set(
    oracle: &BisOracle,
    left: &VertexSet,
    right: &VertexSet,
    delta: f64,
    seed: u64,
) -> Result<Option<usize>> {
    let mut plan = QueryPlan::new();
    let entry = Recovery::new(Arc::new(left.clone()), Arc::new(right.clone()), delta, DEFAULT_C_R, seed, 1)?;
    let id = plan.push_recovery("recovery", entry)?;
    let answers = oracle.submit(&plan)?;
    Ok(answers.recovery(id, 0).decode_vertex())
}
