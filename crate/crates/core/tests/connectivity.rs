//! Two-round connectivity end to end.

use std::sync::Arc;

use bisq::connectivity::{contract, is_connected, round1_neighbor_sampling};
use bisq::graph::generate::{self, Inner};
use bisq::params::Constants;
use bisq::BisOracle;

#[test]
fn two_cliques_contract_to_two_supernodes() {
    let g = Arc::new(generate::components(&[10, 10], Inner::Clique, 3).unwrap());
    let o = BisOracle::new(g.clone());
    let edges = round1_neighbor_sampling(&o, &Constants::fast(), 1).unwrap();
    assert!(edges.iter().all(|&(u, v)| g.has_edge(u as usize, v as usize)));
    assert_eq!(contract(&edges, 20).p, 2);
}

#[test]
fn verdicts_on_mixed_graphs() {
    let fast = Constants::fast();
    let cases = [
        (Arc::new(generate::connected_gnp(200, 0.01, 1)), true),
        (Arc::new(generate::cycle(150)), true),
        (Arc::new(generate::components(&[40, 60, 20], Inner::Tree, 2).unwrap()), false),
        (Arc::new(generate::components(&[50, 50], Inner::Sparse(0.1), 5).unwrap()), false),
    ];
    for (i, (g, truth)) in cases.into_iter().enumerate() {
        assert_eq!(g.exact_connected(), truth);
        let o = BisOracle::new(g);
        let v = is_connected(&o, i as u64, 0.25, &fast).unwrap();
        assert_eq!(v.verdict, truth, "case {i}: {v:?}");
        assert!(v.rounds <= 2);
        assert_eq!(o.ledger().round_count, v.rounds);
    }
}
