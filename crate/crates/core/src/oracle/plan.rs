//! Query plans: everything an algorithm will ask, fixed before any answer.
//!
//! Besides single queries a plan holds two compact families whose members are
//! defined by hashed subsamples. A `Sweep` is a grid of `levels × reps` queries
//! `(L', R')` with `R'` (and optionally `L'`) subsampled at a per-level rate.
//! A `Recovery` is one or more instantiations of a single-element recovery plan
//! over the ordered set `R`. Both expand to ordinary BIS queries via
//! `materialize`, and their sizes are exact query counts.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::recovery::{SerPlan, SerQuery};
use crate::rng;
use crate::vertex_set::VertexSet;

/// Index of an entry inside its plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EntryId(pub usize);

/// `levels × reps` subsampled queries.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub left: Arc<VertexSet>,
    pub right: Arc<VertexSet>,
    /// Keep rate per level.
    pub rates: Vec<f64>,
    pub reps: u64,
    pub key: u64,
    /// Subsample `L` too, with an independent key at the same rate.
    pub sample_left: bool,
}

impl Sweep {
    pub fn size(&self) -> u128 {
        self.rates.len() as u128 * self.reps as u128
    }

    pub fn right_key(&self, level: usize, rep: u64) -> u64 {
        rng::child(rng::child(self.key, level as u64), rep)
    }

    pub fn left_key(&self, level: usize, rep: u64) -> u64 {
        rng::child(self.right_key(level, rep), u64::MAX)
    }

    pub fn keeps_right(&self, level: usize, rep: u64, u: usize) -> bool {
        rng::keep(self.right_key(level, rep), u as u64, self.rates[level])
    }

    pub fn keeps_left(&self, level: usize, rep: u64, v: usize) -> bool {
        !self.sample_left || rng::keep(self.left_key(level, rep), v as u64, self.rates[level])
    }

    /// The explicit query at grid point `(level, rep)`.
    pub fn materialize(&self, level: usize, rep: u64) -> (VertexSet, VertexSet) {
        let n = self.right.universe();
        let l = VertexSet::from_vertices(n, self.left.iter().filter(|&v| self.keeps_left(level, rep, v))).unwrap();
        let r = VertexSet::from_vertices(n, self.right.iter().filter(|&u| self.keeps_right(level, rep, u))).unwrap();
        (l, r)
    }
}

/// `replicas` independent instantiations of a recovery plan over `R`.
#[derive(Clone, Debug)]
pub struct Recovery {
    pub left: Arc<VertexSet>,
    pub right: Arc<VertexSet>,
    pub ser: SerPlan,
    pub key: u64,
    pub replicas: u64,
}

impl Recovery {
    pub fn new(left: Arc<VertexSet>, right: Arc<VertexSet>, delta: f64, c_r: f64, key: u64, replicas: u64) -> Result<Self> {
        let ser = SerPlan::new(right.len(), delta, c_r)?;
        Ok(Self { left, right, ser, key, replicas })
    }

    pub fn size(&self) -> u128 {
        self.ser.size() * self.replicas as u128
    }

    pub fn replica_key(&self, replica: u64) -> u64 {
        rng::child(self.key, replica)
    }

    pub fn materialize(&self, replica: u64, q: SerQuery) -> (VertexSet, VertexSet) {
        let key = self.replica_key(replica);
        let n = self.right.universe();
        let r = VertexSet::from_vertices(
            n,
            self.right.iter().enumerate().filter(|&(idx, _)| self.ser.contains(key, q, idx)).map(|(_, u)| u),
        )
        .unwrap();
        ((*self.left).clone(), r)
    }
}

#[derive(Clone, Debug)]
pub enum PlanEntry {
    Single { left: Arc<VertexSet>, right: Arc<VertexSet> },
    Sweep(Sweep),
    Recovery(Recovery),
}

impl PlanEntry {
    pub fn size(&self) -> u128 {
        match self {
            PlanEntry::Single { .. } => 1,
            PlanEntry::Sweep(s) => s.size(),
            PlanEntry::Recovery(r) => r.size(),
        }
    }

    pub fn sides(&self) -> (&VertexSet, &VertexSet) {
        match self {
            PlanEntry::Single { left, right } => (left, right),
            PlanEntry::Sweep(s) => (&s.left, &s.right),
            PlanEntry::Recovery(r) => (&r.left, &r.right),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TaggedEntry {
    pub tag: Arc<str>,
    pub entry: PlanEntry,
}

/// An ordered list of tagged entries. Every entry has disjoint sides.
#[derive(Clone, Debug, Default)]
pub struct QueryPlan {
    entries: Vec<TaggedEntry>,
}

impl QueryPlan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, tag: impl Into<Arc<str>>, entry: PlanEntry) -> Result<EntryId> {
        let (l, r) = entry.sides();
        let index = self.entries.len();
        if l.universe() != r.universe() {
            return Err(Error::InvalidParam(format!("entry {index}: sides over different universes")));
        }
        if !l.is_disjoint(r) {
            return Err(Error::Overlap { index });
        }
        self.entries.push(TaggedEntry { tag: tag.into(), entry });
        Ok(EntryId(index))
    }

    pub fn push_single(&mut self, tag: impl Into<Arc<str>>, left: VertexSet, right: VertexSet) -> Result<EntryId> {
        self.push(tag, PlanEntry::Single { left: Arc::new(left), right: Arc::new(right) })
    }

    pub fn push_sweep(&mut self, tag: impl Into<Arc<str>>, sweep: Sweep) -> Result<EntryId> {
        self.push(tag, PlanEntry::Sweep(sweep))
    }

    pub fn push_recovery(&mut self, tag: impl Into<Arc<str>>, rec: Recovery) -> Result<EntryId> {
        self.push(tag, PlanEntry::Recovery(rec))
    }

    /// Appends another plan; returns the offset of its first entry.
    pub fn append(&mut self, other: QueryPlan) -> usize {
        let offset = self.entries.len();
        self.entries.extend(other.entries);
        offset
    }

    pub fn entries(&self) -> &[TaggedEntry] {
        &self.entries
    }

    pub fn entry(&self, id: EntryId) -> &PlanEntry {
        &self.entries[id.0].entry
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total number of BIS queries this plan issues when submitted.
    pub fn size(&self) -> u128 {
        self.entries.iter().map(|e| e.entry.size()).sum()
    }

    /// Query counts grouped by tag.
    pub fn phase_sizes(&self) -> BTreeMap<String, u128> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            *out.entry(e.tag.to_string()).or_insert(0) += e.entry.size();
        }
        out
    }
}
