//! Generators and the edge-list format.

use bisq::graph::generate::{self, GenSpec, Inner};
use bisq::graph::io::{load_edge_list, write_edge_list};
use bisq::{Graph, VertexSet};

#[test]
fn family_examples() {
    assert_eq!(generate::star(5).m(), 4);
    assert_eq!(generate::clique(64).m(), 2016);
    assert_eq!(generate::complete_bipartite(3, 4).m(), 12);
    let g = generate::components(&[4, 4, 4], Inner::Clique, 0).unwrap();
    assert_eq!(g.exact_components().count, 3);
    assert!(!g.exact_connected());
    assert!(generate::random_tree(100, 3).exact_connected());
    assert!(generate::connected_gnp(200, 0.01, 3).exact_connected());
}

#[test]
fn spec_strings_build() {
    let g: Graph = "components:sizes=3/5,inner=path".parse::<GenSpec>().unwrap().build().unwrap();
    assert_eq!((g.n(), g.m(), g.exact_components().count), (8, 6, 2));
    assert!("gnp:n=10".parse::<GenSpec>().unwrap().build().is_err());
}

#[test]
fn text_round_trip_keeps_isolated_tail() {
    let g = Graph::from_edges(10, [(0, 1), (3, 4)]).unwrap();
    let text = write_edge_list(&g);
    assert!(text.starts_with("# n=10\n"));
    assert_eq!(load_edge_list(&text).unwrap(), g);
}

#[test]
fn neighborhood_counts_distinct_vertices() {
    let g = Graph::from_edges(5, [(0, 2), (1, 2), (1, 3)]).unwrap();
    let l = VertexSet::from_vertices(5, [0, 1]).unwrap();
    let r = VertexSet::from_vertices(5, [2, 3, 4]).unwrap();
    assert_eq!(g.exact_neighborhood_size(&l, &r).unwrap(), 2);
}
