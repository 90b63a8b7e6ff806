//! Adjacency views the oracle can answer queries against.
//!
//! The base graph is one view. A contracted graph whose vertices are blocks of
//! base vertices is another; its queries expand each supernode into its block
//! and are answered by the base adjacency.

use std::sync::Arc;

use crate::graph::Graph;
use crate::vertex_set::VertexSet;

pub trait Topology: Send + Sync {
    fn n(&self) -> usize;

    /// `Γ(L) ∩ R` as a sorted, deduplicated list.
    fn neighborhood(&self, left: &VertexSet, right: &VertexSet) -> Vec<usize>;

    /// Whether some edge joins a vertex yielded by `left` to a vertex accepted by `right`.
    fn any_edge(&self, left: &mut dyn Iterator<Item = usize>, right: &dyn Fn(usize) -> bool) -> bool;
}

impl Topology for Graph {
    fn n(&self) -> usize {
        Graph::n(self)
    }

    fn neighborhood(&self, left: &VertexSet, right: &VertexSet) -> Vec<usize> {
        let mut out: Vec<usize> = left
            .iter()
            .flat_map(|v| self.neighbors(v).iter().map(|&u| u as usize))
            .filter(|&u| right.contains(u))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn any_edge(&self, left: &mut dyn Iterator<Item = usize>, right: &dyn Fn(usize) -> bool) -> bool {
        for v in left {
            if self.neighbors(v).iter().any(|&u| right(u as usize)) {
                return true;
            }
        }
        false
    }
}

/// A partition of the base vertices into blocks, viewed as a graph on blocks.
///
/// A query on supernode sets is answered by the base view on the union of
/// their blocks. Blocks are disjoint and an edge inside one block never joins
/// `L` to `R`, so the answers are those of the contracted graph.
#[derive(Clone)]
pub struct SuperTopology {
    base: Arc<dyn Topology>,
    blocks: Vec<Vec<u32>>,
    block_of: Vec<u32>,
}

impl SuperTopology {
    /// `labels[v]` is the block of base vertex `v`; labels must be dense `0..p`.
    pub fn new(base: Arc<dyn Topology>, labels: &[usize]) -> Self {
        assert_eq!(labels.len(), base.n(), "one label per base vertex");
        let p = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut blocks = vec![Vec::new(); p];
        for (v, &l) in labels.iter().enumerate() {
            blocks[l].push(v as u32);
        }
        assert!(blocks.iter().all(|b| !b.is_empty()), "labels must be dense");
        Self { base, blocks, block_of: labels.iter().map(|&l| l as u32).collect() }
    }

    pub fn block(&self, s: usize) -> &[u32] {
        &self.blocks[s]
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v] as usize
    }

    /// Union of the blocks of `set`, as a base vertex set.
    pub fn expand(&self, set: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.base.n());
        for s in set.iter() {
            for &v in &self.blocks[s] {
                out.insert(v as usize);
            }
        }
        out
    }
}

impl Topology for SuperTopology {
    fn n(&self) -> usize {
        self.blocks.len()
    }

    fn neighborhood(&self, left: &VertexSet, right: &VertexSet) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .base
            .neighborhood(&self.expand(left), &self.expand(right))
            .into_iter()
            .map(|u| self.block_of[u] as usize)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn any_edge(&self, left: &mut dyn Iterator<Item = usize>, right: &dyn Fn(usize) -> bool) -> bool {
        let mut members = left.flat_map(|s| self.blocks[s].iter().map(|&v| v as usize));
        self.base.any_edge(&mut members, &|u| right(self.block_of[u] as usize))
    }
}
