//! The hidden graph and its brute-force ground truth.
//!
//! `Graph` is immutable once built. Algorithms only see it through the oracle;
//! the exact helpers here exist for tests and for `--with-truth` reports.

pub mod generate;
pub mod io;

use crate::error::{Error, Result};
use crate::union_find::DisjointSet;
use crate::vertex_set::VertexSet;

/// Simple undirected graph on `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    m: usize,
}

/// Connected components as dense labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub labels: Vec<usize>,
    pub count: usize,
}

impl Components {
    /// Graphs with at most one vertex count as connected.
    pub fn is_connected(&self) -> bool {
        self.count <= 1
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n], m: 0 }
    }

    /// Builds from an edge list, dropping duplicates in either orientation.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::InvalidParam(format!("n = {n} exceeds u32 vertex ids")));
        }
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::InvalidParam(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        let mut twice = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        let g = Self { adj, m: twice / 2 };
        debug_assert!(g.is_symmetric());
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| (v as usize) > u).map(move |&v| (u, v as usize)))
    }

    /// Sum of degrees over `set`.
    pub fn degree_sum(&self, set: &VertexSet) -> usize {
        set.iter().map(|v| self.degree(v)).sum()
    }

    fn is_symmetric(&self) -> bool {
        self.adj.iter().enumerate().all(|(u, list)| {
            list.iter().all(|&v| v as usize != u && self.adj[v as usize].binary_search(&(u as u32)).is_ok())
        }) && self.adj.iter().map(Vec::len).sum::<usize>() == 2 * self.m
    }

    fn check_sides(&self, left: &VertexSet, right: &VertexSet) -> Result<()> {
        for s in [left, right] {
            if s.universe() != self.n() {
                return Err(Error::InvalidParam(format!(
                    "vertex set over {} vertices used with a graph on {}",
                    s.universe(),
                    self.n()
                )));
            }
        }
        if !left.is_disjoint(right) {
            return Err(Error::Overlap { index: 0 });
        }
        Ok(())
    }

    /// `Γ(L) ∩ R` by enumeration.
    pub fn exact_neighborhood(&self, left: &VertexSet, right: &VertexSet) -> Result<VertexSet> {
        self.check_sides(left, right)?;
        let mut out = VertexSet::new(self.n());
        for v in left.iter() {
            for &u in self.neighbors(v) {
                if right.contains(u as usize) {
                    out.insert(u as usize);
                }
            }
        }
        Ok(out)
    }

    pub fn exact_neighborhood_size(&self, left: &VertexSet, right: &VertexSet) -> Result<usize> {
        Ok(self.exact_neighborhood(left, right)?.len())
    }

    /// Edge scan: true iff some edge joins `left` and `right`.
    pub fn exact_has_cross_edge(&self, left: &VertexSet, right: &VertexSet) -> Result<bool> {
        self.check_sides(left, right)?;
        Ok(self.edges().any(|(u, v)| {
            (left.contains(u) && right.contains(v)) || (left.contains(v) && right.contains(u))
        }))
    }

    pub fn exact_components(&self) -> Components {
        let mut ds = DisjointSet::new(self.n());
        for (u, v) in self.edges() {
            ds.union(u, v);
        }
        Components { count: ds.components(), labels: ds.labels() }
    }

    pub fn exact_connected(&self) -> bool {
        self.exact_components().is_connected()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn dedup_and_counts() {
        let g = Graph::from_edges(4, [(0, 1), (1, 0), (2, 3), (0, 1)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.degrees(), vec![1, 1, 1, 1]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn rejects_self_loop_and_range() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert_eq!(Graph::from_edges(3, [(0, 3)]), Err(Error::VertexOutOfRange { vertex: 3, n: 3 }));
    }

    #[test]
    fn neighborhood_examples() {
        let g = triangle();
        let l = VertexSet::singleton(3, 0);
        let r = VertexSet::from_vertices(3, [1, 2]).unwrap();
        assert_eq!(g.exact_neighborhood_size(&l, &r), Ok(2));
        assert_eq!(g.exact_neighborhood_size(&VertexSet::new(3), &VertexSet::full(3)), Ok(0));
        assert_eq!(g.exact_neighborhood_size(&l, &VertexSet::full(3)), Err(Error::Overlap { index: 0 }));
    }

    #[test]
    fn connectivity_examples() {
        assert!(Graph::empty(1).exact_connected());
        assert!(Graph::empty(0).exact_connected());
        assert!(!Graph::empty(2).exact_connected());
        let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(path.exact_components().count, 1);
    }

    proptest! {
        #[test]
        fn neighborhood_bounded(seed in any::<u64>(), p in 0.0f64..0.5, picks in prop::collection::vec(0u8..3, 40)) {
            let g = generate::gnp(40, p, seed);
            let left = VertexSet::from_vertices(40, (0..40).filter(|&v| picks[v] == 0)).unwrap();
            let right = VertexSet::from_vertices(40, (0..40).filter(|&v| picks[v] == 1)).unwrap();
            let k = g.exact_neighborhood_size(&left, &right).unwrap();
            prop_assert!(k <= right.len().min(g.degree_sum(&left)));
            prop_assert_eq!(k == 0, !g.exact_has_cross_edge(&left, &right).unwrap());
            prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.m());
        }
    }
}
