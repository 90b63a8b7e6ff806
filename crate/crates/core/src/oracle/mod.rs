//! The BIS oracle: answers, batches, rounds and the query ledger.
//!
//! `bis(L, R)` is 1 iff no edge joins `L` and `R`; an empty side answers 1 and
//! overlapping sides are an error. Algorithms hand the oracle a whole
//! [`QueryPlan`] at once. The ledger is charged the plan's full size at submit.
//!
//! Answers of subsample families are computed from `Γ(L) ∩ R`, which decides
//! every member query: a subsampled query `(L, R')` answers 1 iff no vertex of
//! `Γ(L) ∩ R` survives into `R'`. In [`EvalMode::Aggregate`] the per-level count
//! of 1-answers of a sweep is drawn from its exact binomial law instead of
//! hashing every member. Recovery families are evaluated when read.
//!
//! Rounds: a batch submitted outside a round scope is its own round. All
//! batches inside one scope (scopes nest) share one round.

pub mod ledger;
pub mod plan;
pub mod topology;

use std::sync::{Arc, Mutex, MutexGuard, OnceLock};

use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::recovery::{decode_support, SerOutcome, SerQuery};
use crate::rng;
use crate::vertex_set::VertexSet;
pub use ledger::QueryLedger;
pub use plan::{EntryId, PlanEntry, QueryPlan, Recovery, Sweep};
pub use topology::{SuperTopology, Topology};

/// How subsample sweeps are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    /// Hash every member query.
    Exact,
    /// Draw per-level counts from their binomial law.
    #[default]
    Aggregate,
}

#[derive(Debug, Default)]
struct State {
    ledger: QueryLedger,
    scope_depth: u32,
    scope_charged: bool,
}

#[derive(Clone)]
pub struct BisOracle {
    topo: Arc<dyn Topology>,
    state: Arc<Mutex<State>>,
    mode: EvalMode,
    prefix: String,
}

/// Open round scope; the round closes when this is dropped.
pub struct RoundScope<'a> {
    oracle: &'a BisOracle,
}

impl RoundScope<'_> {
    pub fn end(self) {}
}

impl Drop for RoundScope<'_> {
    fn drop(&mut self) {
        let mut s = self.oracle.lock();
        s.scope_depth -= 1;
    }
}

enum Answer {
    Bit(bool),
    Counts(Vec<u64>),
    Lazy(OnceLock<Vec<usize>>),
}

/// Answers aligned with the submitted plan.
pub struct BatchAnswers<'p> {
    plan: &'p QueryPlan,
    topo: Arc<dyn Topology>,
    answers: Vec<Answer>,
}

impl BisOracle {
    pub fn new(graph: Arc<Graph>) -> Self {
        Self::over(graph)
    }

    pub fn over(topo: Arc<dyn Topology>) -> Self {
        Self { topo, state: Arc::default(), mode: EvalMode::default(), prefix: String::new() }
    }

    /// An oracle over another view that charges `base`'s ledger and shares its rounds.
    pub fn sharing(base: &BisOracle, topo: Arc<dyn Topology>, prefix: &str) -> Self {
        Self { topo, state: base.state.clone(), mode: base.mode, prefix: format!("{}{prefix}", base.prefix) }
    }

    pub fn with_mode(mut self, mode: EvalMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.topo.n()
    }

    pub fn topology(&self) -> &Arc<dyn Topology> {
        &self.topo
    }

    fn lock(&self) -> MutexGuard<'_, State> {
        self.state.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn ledger(&self) -> QueryLedger {
        self.lock().ledger.clone()
    }

    pub fn begin_round(&self) -> RoundScope<'_> {
        let mut s = self.lock();
        if s.scope_depth == 0 {
            s.scope_charged = false;
        }
        s.scope_depth += 1;
        RoundScope { oracle: self }
    }

    pub fn bis(&self, left: &VertexSet, right: &VertexSet) -> Result<bool> {
        self.bis_tagged("bis", left, right)
    }

    pub fn bis_tagged(&self, tag: &str, left: &VertexSet, right: &VertexSet) -> Result<bool> {
        let mut plan = QueryPlan::new();
        let id = plan.push_single(tag, left.clone(), right.clone())?;
        Ok(self.submit(&plan)?.bit(id))
    }

    /// Returns 1 iff `Γ(L) ∩ R_subset = ∅`, using exactly one BIS query.
    pub fn or_query_via_bis(&self, left: &VertexSet, right_subset: &VertexSet) -> Result<bool> {
        self.bis_tagged("or", left, right_subset)
    }

    pub fn submit<'p>(&self, plan: &'p QueryPlan) -> Result<BatchAnswers<'p>> {
        let n = self.n();
        for (index, e) in plan.entries().iter().enumerate() {
            let (l, r) = e.entry.sides();
            if l.universe() != n || r.universe() != n {
                return Err(Error::InvalidParam(format!(
                    "entry {index}: vertex sets over {} vertices, oracle has {n}",
                    l.universe()
                )));
            }
            if !l.is_disjoint(r) {
                return Err(Error::Overlap { index });
            }
        }
        let answers: Vec<Answer> = plan.entries().par_iter().map(|e| self.evaluate(&e.entry)).collect();

        let mut s = self.lock();
        s.ledger.batch_count += 1;
        if s.scope_depth == 0 {
            s.ledger.round_count += 1;
        } else if !s.scope_charged {
            s.ledger.round_count += 1;
            s.scope_charged = true;
        }
        for e in plan.entries() {
            let size = e.entry.size();
            s.ledger.bis_count += size;
            *s.ledger.phases.entry(format!("{}{}", self.prefix, e.tag)).or_insert(0) += size;
        }
        drop(s);
        Ok(BatchAnswers { plan, topo: self.topo.clone(), answers })
    }

    fn evaluate(&self, entry: &PlanEntry) -> Answer {
        match entry {
            PlanEntry::Single { left, right } => {
                Answer::Bit(!self.topo.any_edge(&mut left.iter(), &|u| right.contains(u)))
            }
            PlanEntry::Sweep(s) if s.sample_left => {
                let mut ones = vec![0u64; s.rates.len()];
                for (level, count) in ones.iter_mut().enumerate() {
                    for rep in 0..s.reps {
                        let mut left = s.left.iter().filter(|&v| s.keeps_left(level, rep, v));
                        let edge = self
                            .topo
                            .any_edge(&mut left, &|u| s.right.contains(u) && s.keeps_right(level, rep, u));
                        *count += !edge as u64;
                    }
                }
                Answer::Counts(ones)
            }
            PlanEntry::Sweep(s) => {
                let support = self.topo.neighborhood(&s.left, &s.right);
                Answer::Counts(match self.mode {
                    EvalMode::Exact => sweep_exact(s, &support),
                    EvalMode::Aggregate => sweep_aggregate(s, support.len()),
                })
            }
            PlanEntry::Recovery(_) => Answer::Lazy(OnceLock::new()),
        }
    }
}

fn sweep_exact(s: &Sweep, support: &[usize]) -> Vec<u64> {
    (0..s.rates.len())
        .map(|level| {
            let t = rng::threshold(s.rates[level]);
            (0..s.reps)
                .filter(|&rep| match t {
                    None => support.is_empty(),
                    Some(t) => {
                        let key = s.right_key(level, rep);
                        !support.iter().any(|&u| rng::keep_below(key, u as u64, t))
                    }
                })
                .count() as u64
        })
        .collect()
}

/// Count(i) ~ Binomial(reps, (1 - rate_i)^k), independent across levels.
fn sweep_aggregate(s: &Sweep, k: usize) -> Vec<u64> {
    let mut r = rng::rng(rng::child(s.key, 0xA66E_6A7E));
    s.rates
        .iter()
        .map(|&rate| {
            let p = if k == 0 {
                1.0
            } else if rate >= 1.0 {
                0.0
            } else {
                (k as f64 * (-rate).ln_1p()).exp()
            };
            Binomial::new(s.reps, p.clamp(0.0, 1.0)).expect("valid binomial").sample(&mut r)
        })
        .collect()
}

impl<'p> BatchAnswers<'p> {
    pub fn plan(&self) -> &'p QueryPlan {
        self.plan
    }

    /// Answer of a single-query entry.
    pub fn bit(&self, id: EntryId) -> bool {
        match &self.answers[id.0] {
            Answer::Bit(b) => *b,
            _ => panic!("entry {} is not a single query", id.0),
        }
    }

    /// Answers of a plan made only of single queries, in plan order.
    pub fn bits(&self) -> Vec<bool> {
        (0..self.answers.len()).map(|i| self.bit(EntryId(i))).collect()
    }

    /// Per-level number of 1-answers of a sweep entry.
    pub fn counts(&self, id: EntryId) -> &[u64] {
        match &self.answers[id.0] {
            Answer::Counts(c) => c,
            _ => panic!("entry {} is not a sweep", id.0),
        }
    }

    /// Answers of instantiation `replica` of a recovery entry.
    pub fn recovery(&self, id: EntryId, replica: u64) -> RecoveryView<'_> {
        let rec = match self.plan.entry(id) {
            PlanEntry::Recovery(r) => r,
            _ => panic!("entry {} is not a recovery family", id.0),
        };
        assert!(replica < rec.replicas, "replica {replica} not in plan");
        let support = match &self.answers[id.0] {
            Answer::Lazy(cell) => cell.get_or_init(|| {
                self.topo.neighborhood(&rec.left, &rec.right).into_iter().map(|u| rec.right.rank(u)).collect()
            }),
            _ => unreachable!(),
        };
        RecoveryView { rec, key: rec.replica_key(replica), support }
    }
}

/// Read access to one recovery instantiation's answers.
pub struct RecoveryView<'a> {
    rec: &'a Recovery,
    key: u64,
    support: &'a [usize],
}

impl RecoveryView<'_> {
    /// OR answer of query `q`: true when it hits `Γ(L)`.
    pub fn hit(&self, q: SerQuery) -> bool {
        self.support.iter().any(|&i| self.rec.ser.contains(self.key, q, i))
    }

    pub fn decode(&self) -> SerOutcome {
        decode_support(&self.rec.ser, self.key, self.support)
    }

    /// Decoded member of `R`, as a vertex id.
    pub fn decode_vertex(&self) -> Option<usize> {
        self.decode().recovered.map(|idx| self.rec.right.select(idx).expect("index within R"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;
    use crate::recovery::decode_ser;

    fn set(n: usize, v: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, v.iter().copied()).unwrap()
    }

    fn triangle() -> BisOracle {
        BisOracle::new(Arc::new(generate::clique(3)))
    }

    #[test]
    fn bis_examples() {
        let o = triangle();
        assert!(!o.bis(&set(3, &[0]), &set(3, &[1])).unwrap());
        assert!(o.bis(&set(3, &[]), &VertexSet::full(3)).unwrap());
        assert_eq!(o.bis(&set(3, &[0]), &set(3, &[0, 1])), Err(Error::Overlap { index: 0 }));
        assert_eq!(o.ledger().bis_count, 2);
        assert_eq!(o.ledger().round_count, 2);
    }

    #[test]
    fn or_adapter_is_one_bis() {
        let o = BisOracle::new(Arc::new(generate::star(5)));
        assert!(!o.or_query_via_bis(&set(5, &[0]), &set(5, &[1, 2])).unwrap());
        assert!(o.or_query_via_bis(&set(5, &[0]), &set(5, &[])).unwrap());
        assert_eq!(o.ledger().bis_count, 2);
    }

    #[test]
    fn empty_plan_charges_a_round() {
        let o = triangle();
        let plan = QueryPlan::new();
        let a = o.submit(&plan).unwrap();
        assert!(a.bits().is_empty());
        let l = o.ledger();
        assert_eq!((l.bis_count, l.batch_count, l.round_count), (0, 1, 1));
    }

    #[test]
    fn scopes_merge_batches() {
        let o = triangle();
        let mut plan = QueryPlan::new();
        plan.push_single("a", set(3, &[0]), set(3, &[1])).unwrap();
        plan.push_single("b", set(3, &[0]), set(3, &[2])).unwrap();
        {
            let _scope = o.begin_round();
            o.submit(&plan).unwrap();
            let inner = o.begin_round();
            o.submit(&plan).unwrap();
            inner.end();
            o.submit(&plan).unwrap();
        }
        let l = o.ledger();
        assert_eq!((l.bis_count, l.batch_count, l.round_count), (6, 3, 1));
        assert_eq!(l.phases.get("a"), Some(&3));
        assert_eq!(l.phase_gap(), 0);
        o.submit(&plan).unwrap();
        assert_eq!(o.ledger().round_count, 2);
    }

    #[test]
    fn sweep_modes_agree_with_materialized_queries() {
        let g = Arc::new(generate::gnp(40, 0.15, 3));
        let exact = BisOracle::new(g.clone()).with_mode(EvalMode::Exact);
        let left = Arc::new(set(40, &[0, 1, 2]));
        let right = Arc::new(left.complement());
        for sample_left in [false, true] {
            let sweep = Sweep {
                left: left.clone(),
                right: right.clone(),
                rates: vec![1.0, 0.5, 0.25, 0.125],
                reps: 30,
                key: 17,
                sample_left,
            };
            let mut plan = QueryPlan::new();
            let id = plan.push_sweep("s", sweep.clone()).unwrap();
            let answers = exact.submit(&plan).unwrap();
            for level in 0..4 {
                let brute = (0..30)
                    .filter(|&t| {
                        let (l, r) = sweep.materialize(level, t);
                        !g.exact_has_cross_edge(&l, &r).unwrap()
                    })
                    .count() as u64;
                assert_eq!(answers.counts(id)[level], brute);
            }
        }
    }

    #[test]
    fn aggregate_matches_binomial_mean() {
        // k = 6 neighbours, level 2 keeps each with 1/4: P(1) = (3/4)^6.
        let g = Arc::new(generate::star(7));
        let o = BisOracle::new(g);
        let sweep = Sweep {
            left: Arc::new(set(7, &[0])),
            right: Arc::new(set(7, &[1, 2, 3, 4, 5, 6])),
            rates: vec![1.0, 0.5, 0.25],
            reps: 100_000,
            key: 5,
            sample_left: false,
        };
        let mut plan = QueryPlan::new();
        let id = plan.push_sweep("s", sweep).unwrap();
        let a = o.submit(&plan).unwrap();
        let c = a.counts(id);
        assert_eq!(c[0], 0);
        let p = 0.75f64.powi(6);
        let sd = (1e5 * p * (1.0 - p)).sqrt();
        assert!((c[2] as f64 - 1e5 * p).abs() < 4.0 * sd);
        assert_eq!(o.ledger().bis_count, 300_000);
    }

    #[test]
    fn recovery_view_matches_materialized_queries() {
        let g = Arc::new(generate::gnp(30, 0.3, 8));
        let o = BisOracle::new(g.clone());
        let rec = Recovery::new(Arc::new(set(30, &[4])), Arc::new(set(30, &[4]).complement()), 0.2, 2.0, 77, 2).unwrap();
        let mut plan = QueryPlan::new();
        let id = plan.push_recovery("r", rec.clone()).unwrap();
        let a = o.submit(&plan).unwrap();
        for replica in 0..2 {
            let view = a.recovery(id, replica);
            for q in rec.ser.queries() {
                let (l, r) = rec.materialize(replica, q);
                assert_eq!(view.hit(q), g.exact_has_cross_edge(&l, &r).unwrap());
            }
            assert_eq!(view.decode(), decode_ser(&rec.ser, |q| view.hit(q)));
            if let Some(u) = view.decode_vertex() {
                assert!(g.has_edge(4, u));
            }
        }
        assert_eq!(o.ledger().bis_count, rec.size());
    }

    #[test]
    fn supergraph_shares_ledger() {
        let g = Arc::new(generate::components(&[3, 3], generate::Inner::Path, 0).unwrap());
        let base = BisOracle::new(g.clone());
        let labels = g.exact_components().labels;
        let sup = BisOracle::sharing(&base, Arc::new(SuperTopology::new(base.topology().clone(), &labels)), "sup/");
        assert_eq!(sup.n(), 2);
        assert!(sup.bis(&set(2, &[0]), &set(2, &[1])).unwrap());
        assert_eq!(base.ledger().phases.get("sup/bis"), Some(&1));
    }
}
