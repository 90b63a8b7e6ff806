//! A laboratory for graph algorithms that only see the graph through
//! bipartite independent set (BIS) queries.
//!
//! The hidden [`graph::Graph`] sits behind a [`oracle::BisOracle`] that counts
//! every query, batch and adaptivity round. On top of it live a neighborhood
//! size estimator, single element recovery, degree sketches, a non-adaptive
//! edge-count estimator, a near-uniform edge sampler and a two-round
//! connectivity test.

pub mod connectivity;
pub mod degree;
pub mod error;
pub mod estimator;
pub mod graph;
pub mod harness;
pub mod nbr_size;
pub mod oracle;
pub mod params;
pub mod recovery;
pub mod rng;
pub mod sampler;
pub mod union_find;
pub mod vertex_set;

pub use error::{Error, Result};
pub use graph::Graph;
pub use oracle::{BisOracle, EvalMode, QueryLedger, QueryPlan};
pub use vertex_set::VertexSet;
