//! Oracle behaviour through the public API: answers, rounds, ledger, plans.

use std::sync::Arc;

use bisq::graph::generate;
use bisq::oracle::plan::Sweep;
use bisq::oracle::{BisOracle, EvalMode, QueryPlan, SuperTopology};
use bisq::{Error, Graph, VertexSet};
use proptest::prelude::*;

fn set(n: usize, vs: &[usize]) -> VertexSet {
    VertexSet::from_vertices(n, vs.iter().copied()).unwrap()
}

#[test]
fn path_answers() {
    let o = BisOracle::new(Arc::new(generate::path(4)));
    assert!(!o.bis(&set(4, &[0]), &set(4, &[1])).unwrap());
    assert!(o.bis(&set(4, &[0]), &set(4, &[2, 3])).unwrap());
    assert!(o.bis(&set(4, &[]), &set(4, &[1])).unwrap());
    assert_eq!(o.ledger().bis_count, 3);
    assert_eq!(o.ledger().round_count, 3);
}

#[test]
fn overlap_names_the_plan_entry() {
    let o = BisOracle::new(Arc::new(generate::path(4)));
    match o.bis(&set(4, &[0, 2]), &set(4, &[2])) {
        Err(Error::Overlap { index }) => assert_eq!(index, 0),
        other => panic!("{other:?}"),
    }
    let mut plan = QueryPlan::new();
    plan.push_single("a", set(4, &[0]), set(4, &[1])).unwrap();
    assert_eq!(plan.push_single("a", set(4, &[1, 3]), set(4, &[3])), Err(Error::Overlap { index: 1 }));
    assert_eq!(o.ledger().bis_count, 0);
}

#[test]
fn one_scope_one_round() {
    let o = BisOracle::new(Arc::new(generate::cycle(10)));
    {
        let _outer = o.begin_round();
        for v in 0..5 {
            o.bis(&set(10, &[v]), &set(10, &[v + 5])).unwrap();
        }
        let _inner = o.begin_round();
        o.bis(&set(10, &[0]), &set(10, &[1])).unwrap();
    }
    let l = o.ledger();
    assert_eq!((l.bis_count, l.batch_count, l.round_count), (6, 6, 1));
    o.submit(&QueryPlan::new()).unwrap();
    assert_eq!(o.ledger().round_count, 2);
}

#[test]
fn ledger_json_has_phases() {
    let o = BisOracle::new(Arc::new(generate::path(3)));
    o.bis_tagged("probe", &set(3, &[0]), &set(3, &[1])).unwrap();
    let json = o.ledger().to_json();
    assert!(json.contains("\"phases\":{\"probe\":1}"), "{json}");
}

#[test]
fn exact_and_aggregate_sweeps_agree_on_average() {
    let g = Arc::new(generate::star(200));
    let left = Arc::new(set(200, &[0]));
    let right = Arc::new(left.complement());
    let sweep = Sweep { left, right, rates: vec![1.0, 0.01, 0.005], reps: 4000, key: 5, sample_left: false };
    let mut plan = QueryPlan::new();
    let id = plan.push_sweep("s", sweep).unwrap();
    let exact = BisOracle::new(g.clone()).with_mode(EvalMode::Exact);
    let agg = BisOracle::new(g).with_mode(EvalMode::Aggregate);
    let a = exact.submit(&plan).unwrap().counts(id).to_vec();
    let b = agg.submit(&plan).unwrap().counts(id).to_vec();
    assert_eq!((a[0], b[0]), (0, 0));
    for i in 1..3 {
        let p = (1.0 - [1.0f64, 0.01, 0.005][i]).powi(199);
        let sd = (4000.0 * p * (1.0 - p)).sqrt();
        for c in [a[i], b[i]] {
            assert!((c as f64 - 4000.0 * p).abs() < 4.0 * sd, "level {i}: {c}");
        }
    }
}

#[test]
fn supergraph_queries_expand_blocks() {
    let g: Arc<Graph> = Arc::new(Graph::from_edges(6, [(0, 1), (2, 3), (1, 4)]).unwrap());
    let base = BisOracle::new(g);
    let topo = SuperTopology::new(base.topology().clone(), &[0, 0, 1, 1, 2, 2]);
    let sup = BisOracle::sharing(&base, Arc::new(topo), "sup/");
    assert!(!sup.bis(&set(3, &[0]), &set(3, &[2])).unwrap());
    assert!(sup.bis(&set(3, &[0]), &set(3, &[1])).unwrap());
    assert_eq!(base.ledger().bis_count, 2);
}

proptest! {
    #[test]
    fn bis_matches_edge_scan(seed in any::<u64>(), p in 0.0f64..0.4, sides in prop::collection::vec(0u8..3, 30)) {
        let g = Arc::new(generate::gnp(30, p, seed));
        let o = BisOracle::new(g.clone());
        let l: Vec<usize> = (0..30).filter(|&v| sides[v] == 1).collect();
        let r: Vec<usize> = (0..30).filter(|&v| sides[v] == 2).collect();
        let crosses = l.iter().any(|&u| r.iter().any(|&v| g.has_edge(u, v)));
        prop_assert_eq!(o.bis(&set(30, &l), &set(30, &r)).unwrap(), !crosses);
        prop_assert_eq!(o.or_query_via_bis(&set(30, &l), &set(30, &r)).unwrap(), !crosses);
    }
}
