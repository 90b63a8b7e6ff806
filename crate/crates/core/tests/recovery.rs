//! Neighborhood size and single element recovery through the oracle.

use std::collections::BTreeMap;
use std::sync::Arc;

use bisq::graph::generate;
use bisq::nbr_size::estimate_ns;
use bisq::params::Constants;
use bisq::recovery::uniform_neighbor_of_set;
use bisq::{BisOracle, EvalMode, VertexSet};

#[test]
fn ns_zero_and_one_exact_in_exact_mode() {
    let g = Arc::new(generate::path(64));
    let o = BisOracle::new(g).with_mode(EvalMode::Exact);
    let l = VertexSet::singleton(64, 0);
    let r = VertexSet::from_vertices(64, 1..64).unwrap();
    let far = VertexSet::from_vertices(64, 2..64).unwrap();
    for seed in 0..20 {
        assert_eq!(estimate_ns(&o, &l, &r, 0.25, 0.1, seed, &Constants::fast()).unwrap(), 1.0);
        assert_eq!(estimate_ns(&o, &l, &far, 0.25, 0.1, seed, &Constants::fast()).unwrap(), 0.0);
    }
}

#[test]
fn ns_star_center_within_epsilon() {
    let o = BisOracle::new(Arc::new(generate::star(512)));
    let l = VertexSet::singleton(512, 0);
    let r = l.complement();
    let mut hits = 0;
    for seed in 0..40 {
        let est = estimate_ns(&o, &l, &r, 0.25, 0.1, seed, &Constants::fast()).unwrap();
        hits += ((est - 511.0).abs() <= 0.25 * 511.0) as usize;
    }
    assert!(hits >= 34, "{hits}/40");
}

#[test]
fn recovered_neighbor_is_in_support_and_spread() {
    let g = Arc::new(generate::star(9));
    let o = BisOracle::new(g);
    let l = VertexSet::singleton(9, 0);
    let r = l.complement();
    let mut counts = BTreeMap::new();
    for seed in 0..2000 {
        let u = uniform_neighbor_of_set(&o, &l, &r, 0.01, seed).unwrap().expect("star has neighbors");
        assert!((1..9).contains(&u));
        *counts.entry(u).or_insert(0) += 1;
    }
    assert_eq!(counts.len(), 8);
    assert!(counts.values().all(|&c| (170..=330).contains(&c)), "{counts:?}");
}

#[test]
fn no_neighbor_means_none() {
    let o = BisOracle::new(Arc::new(generate::path(6)));
    let l = VertexSet::singleton(6, 0);
    let r = VertexSet::from_vertices(6, [3, 4, 5]).unwrap();
    assert_eq!(uniform_neighbor_of_set(&o, &l, &r, 0.01, 1).unwrap(), None);
}
