//! Degree estimation for every vertex of a set `S`, count-min style.
//!
//! Each of `T_reps = ⌈2 log₂ n⌉` repetitions throws the vertices of `S` into
//! `λ` random parts and estimates, for each nonempty part `P`, the size of
//! `Γ(P) ∖ P`. A vertex's estimate is the minimum over repetitions of its part's
//! estimate: other vertices can only inflate a part's neighborhood.
//!
//! Neighbor mode additionally plans a single element recovery per part over
//! `V ∖ P`, so the vertex also gets a near-uniform neighbor drawn from the part
//! that achieved its minimum. The recovery can be instantiated several times to
//! give independent neighbor draws.
//!
//! Internally the neighborhood estimates run at accuracy `ε / 3`.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::nbr_size::{decode_ns, ns_sweep, NsParams};
use crate::oracle::plan::Recovery;
use crate::oracle::{BatchAnswers, BisOracle, EntryId, QueryPlan};
use crate::params::{check_epsilon, log2n, Constants};
use crate::rng;
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeMode {
    Counts,
    /// Plan `replicas` independent neighbor recoveries per part.
    Neighbors { replicas: u64 },
}

/// Shape parameters shared by planning and dry-run audits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DegreeShape {
    pub reps: usize,
    pub lambda: u128,
    pub ns: NsParams,
    /// Recovery failure budget per part, in neighbor mode.
    pub ser_delta: Option<f64>,
}

impl DegreeShape {
    pub fn new(n: usize, epsilon: f64, consts: &Constants, mode: DegreeMode) -> Result<Self> {
        check_epsilon(epsilon)?;
        let lg = log2n(n);
        let eps = epsilon / 3.0;
        let exponent = match mode {
            DegreeMode::Counts => 3,
            DegreeMode::Neighbors { .. } => 4,
        };
        let lambda = (consts.c_lambda * eps.powi(-exponent) * lg * lg).ceil().max(1.0);
        let delta_inner = (1.0 / lg.powi(4)).min(0.5);
        let ser_delta = match mode {
            DegreeMode::Counts => None,
            DegreeMode::Neighbors { .. } => Some((consts.c_delta * epsilon / lg.powi(4)).min(0.5)),
        };
        Ok(Self {
            reps: (2.0 * lg).ceil() as usize,
            lambda: if lambda >= u128::MAX as f64 { u128::MAX } else { lambda as u128 },
            ns: NsParams::for_constants(n, eps, delta_inner, consts)?,
            ser_delta,
        })
    }
}

#[derive(Clone, Debug)]
struct Part {
    members: Vec<u32>,
    ns: EntryId,
    ser: Option<EntryId>,
    /// `|V ∖ P|`, the most the estimate can honestly be.
    outside: usize,
}

/// The planned sketch for one set `S`. Decoding needs the batch answers.
#[derive(Clone, Debug)]
pub struct DegreeSketch {
    members: Vec<u32>,
    shape: DegreeShape,
    parts: Vec<Part>,
    /// `part_of[t][i]`: index in `parts` of member `i`'s part at repetition `t`.
    part_of: Vec<Vec<u32>>,
    n: usize,
}

/// Per-vertex degree estimates for the members of `S`, in ascending vertex order.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DegreeTable {
    pub members: Vec<u32>,
    pub estimate: Vec<f64>,
    /// Repetition achieving the minimum; `None` when every repetition failed to decode.
    pub t_min: Vec<Option<u32>>,
}

impl DegreeTable {
    pub fn index_of(&self, v: usize) -> Option<usize> {
        self.members.binary_search(&(v as u32)).ok()
    }

    pub fn get(&self, v: usize) -> Option<f64> {
        self.index_of(v).map(|i| self.estimate[i])
    }

    /// Members whose estimate is the `n` sentinel.
    pub fn flagged(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().zip(&self.t_min).filter(|(_, t)| t.is_none()).map(|(&v, _)| v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `U(v)` per member of `S`, aligned with the degree table.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct NeighborTable {
    pub members: Vec<u32>,
    pub neighbor: Vec<Option<u32>>,
}

impl NeighborTable {
    pub fn get(&self, v: usize) -> Option<u32> {
        self.members.binary_search(&(v as u32)).ok().and_then(|i| self.neighbor[i])
    }
}

impl DegreeSketch {
    /// Appends the sketch's queries to `plan` under `tag`.
    #[allow(clippy::too_many_arguments)]
    pub fn plan(
        n: usize,
        set: &VertexSet,
        epsilon: f64,
        seed: u64,
        consts: &Constants,
        mode: DegreeMode,
        tag: &str,
        plan: &mut QueryPlan,
    ) -> Result<Self> {
        let shape = DegreeShape::new(n, epsilon, consts, mode)?;
        let members: Vec<u32> = set.iter().map(|v| v as u32).collect();
        let tag: Arc<str> = Arc::from(tag);
        let mut parts = Vec::new();
        let mut part_of = Vec::with_capacity(shape.reps);
        for t in 0..shape.reps {
            let mut r = rng::rng(rng::derive(seed, "partition", t as u64));
            let mut labelled: Vec<(u128, u32)> =
                members.iter().enumerate().map(|(i, _)| (r.random_range(0..shape.lambda), i as u32)).collect();
            labelled.sort_unstable();
            let mut of = vec![0u32; members.len()];
            let mut start = 0;
            while start < labelled.len() {
                let mut end = start + 1;
                while end < labelled.len() && labelled[end].0 == labelled[start].0 {
                    end += 1;
                }
                let idx = parts.len();
                let part_members: Vec<u32> = labelled[start..end].iter().map(|&(_, i)| members[i as usize]).collect();
                for &(_, i) in &labelled[start..end] {
                    of[i as usize] = idx as u32;
                }
                let left = Arc::new(VertexSet::from_vertices(n, part_members.iter().map(|&v| v as usize))?);
                let right = Arc::new(left.complement());
                let ns_seed = rng::derive(seed, "ns", idx as u64);
                let ns = plan.push_sweep(tag.clone(), ns_sweep(left.clone(), right.clone(), &shape.ns, ns_seed))?;
                let ser = match (mode, shape.ser_delta) {
                    (DegreeMode::Neighbors { replicas }, Some(delta)) => {
                        let key = rng::derive(seed, "neighbor", idx as u64);
                        let rec = Recovery::new(left.clone(), right.clone(), delta, consts.c_r, key, replicas)?;
                        Some(plan.push_recovery(format!("{tag}/neighbor"), rec)?)
                    }
                    _ => None,
                };
                parts.push(Part { outside: n - part_members.len(), members: part_members, ns, ser });
                start = end;
            }
            part_of.push(of);
        }
        Ok(Self { members, shape, parts, part_of, n })
    }

    pub fn shape(&self) -> &DegreeShape {
        &self.shape
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    /// Members of the part holding member `v` at repetition `t`.
    pub fn part_members(&self, t: usize, v: usize) -> Option<&[u32]> {
        let i = self.members.binary_search(&(v as u32)).ok()?;
        Some(&self.parts[self.part_of[t][i] as usize].members)
    }

    /// Per-part estimates, then the minimum over repetitions per member.
    pub fn decode(&self, answers: &BatchAnswers<'_>) -> DegreeTable {
        let part_est: Vec<f64> = self
            .parts
            .iter()
            .map(|p| match decode_ns(answers.counts(p.ns), &self.shape.ns) {
                Ok(d) => d.estimate.min(p.outside as f64),
                Err(_) => f64::INFINITY,
            })
            .collect();
        let mut estimate = Vec::with_capacity(self.members.len());
        let mut t_min = Vec::with_capacity(self.members.len());
        for i in 0..self.members.len() {
            let mut best = self.n as f64;
            let mut arg = None;
            for (t, of) in self.part_of.iter().enumerate() {
                let e = part_est[of[i] as usize];
                if e < best || (arg.is_none() && e <= best) {
                    best = e;
                    arg = Some(t as u32);
                }
            }
            estimate.push(best);
            t_min.push(arg);
        }
        DegreeTable { members: self.members.clone(), estimate, t_min }
    }

    /// Instantiation `replica` of the recovery for the part that gave member
    /// `v` its minimum.
    pub fn neighbor(&self, table: &DegreeTable, v: usize, replica: u64, answers: &BatchAnswers<'_>) -> Option<u32> {
        let i = table.index_of(v)?;
        let t = table.t_min[i]? as usize;
        let part = &self.parts[self.part_of[t][i] as usize];
        answers.recovery(part.ser?, replica).decode_vertex().map(|u| u as u32)
    }

    pub fn neighbor_table(&self, table: &DegreeTable, replica: u64, answers: &BatchAnswers<'_>) -> NeighborTable {
        NeighborTable {
            members: table.members.clone(),
            neighbor: table.members.iter().map(|&v| self.neighbor(table, v as usize, replica, answers)).collect(),
        }
    }
}

pub fn estimate_degrees(
    oracle: &BisOracle,
    set: &VertexSet,
    epsilon: f64,
    seed: u64,
    consts: &Constants,
) -> Result<DegreeTable> {
    let mut plan = QueryPlan::new();
    let sketch = DegreeSketch::plan(oracle.n(), set, epsilon, seed, consts, DegreeMode::Counts, "degree", &mut plan)?;
    let answers = oracle.submit(&plan)?;
    Ok(sketch.decode(&answers))
}

pub fn estimate_degrees_with_neighbors(
    oracle: &BisOracle,
    set: &VertexSet,
    epsilon: f64,
    seed: u64,
    consts: &Constants,
) -> Result<(DegreeTable, NeighborTable)> {
    let mut plan = QueryPlan::new();
    let mode = DegreeMode::Neighbors { replicas: 1 };
    let sketch = DegreeSketch::plan(oracle.n(), set, epsilon, seed, consts, mode, "degree", &mut plan)?;
    let answers = oracle.submit(&plan)?;
    let table = sketch.decode(&answers);
    let neighbors = sketch.neighbor_table(&table, 0, &answers);
    Ok((table, neighbors))
}
