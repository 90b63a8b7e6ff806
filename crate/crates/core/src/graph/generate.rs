//! Seeded graph generators and the `kind:key=value,...` spec syntax.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use super::Graph;
use crate::error::{Error, Result};
use crate::rng;

/// Erdős–Rényi G(n, p) by geometric skipping over the pairs `(v, w)`, `w < v`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let p = p.clamp(0.0, 1.0);
    if p == 0.0 || n < 2 {
        return Graph::empty(n);
    }
    if p == 1.0 {
        return clique(n);
    }
    let mut r = rng::rng(seed);
    let lq = (1.0 - p).ln();
    let mut edges = Vec::new();
    let (mut v, mut w): (usize, i64) = (1, -1);
    while v < n {
        let u: f64 = r.random();
        w += 1 + ((1.0 - u).ln() / lq).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((v, w as usize));
        }
    }
    Graph::from_edges(n, edges).expect("generated pairs are valid")
}

pub fn star(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (0, v))).expect("valid")
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("valid")
}

pub fn cycle(n: usize) -> Graph {
    if n < 3 {
        return path(n);
    }
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid")
}

pub fn clique(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid")
}

/// Sides `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).expect("valid")
}

/// Uniform random labelled tree (random attachment to an earlier vertex of a shuffled order).
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut r = rng::rng(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    let edges: Vec<_> = (1..n).map(|i| (order[i], order[r.random_range(0..i)])).collect();
    Graph::from_edges(n, edges).expect("valid")
}

/// A random spanning tree plus G(n, p) noise: always connected.
pub fn connected_gnp(n: usize, p: f64, seed: u64) -> Graph {
    let tree = random_tree(n, rng::derive(seed, "tree", 0));
    let noise = gnp(n, p, rng::derive(seed, "noise", 0));
    Graph::from_edges(n, tree.edges().chain(noise.edges())).expect("valid")
}

/// Block structure used inside each component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Inner {
    Clique,
    Path,
    Tree,
    /// Spanning tree plus G(size, p) noise.
    Sparse(f64),
}

/// Disjoint connected blocks laid out consecutively, then relabelled by a seeded shuffle.
pub fn components(sizes: &[usize], inner: Inner, seed: u64) -> Result<Graph> {
    if sizes.contains(&0) {
        return Err(Error::InvalidParam("component sizes must be positive".into()));
    }
    let n: usize = sizes.iter().sum();
    let mut r = rng::rng(rng::derive(seed, "components", 0));
    let mut label: Vec<usize> = (0..n).collect();
    if seed != 0 {
        label.shuffle(&mut r);
    }
    let mut edges = Vec::new();
    let mut base = 0;
    for (i, &s) in sizes.iter().enumerate() {
        let block = match inner {
            Inner::Clique => clique(s),
            Inner::Path => path(s),
            Inner::Tree => random_tree(s, rng::derive(seed, "block", i as u64)),
            Inner::Sparse(p) => connected_gnp(s, p, rng::derive(seed, "block", i as u64)),
        };
        edges.extend(block.edges().map(|(u, v)| (label[base + u], label[base + v])));
        base += s;
    }
    Graph::from_edges(n, edges)
}

/// A parsed generator spec such as `gnp:n=1024,p=0.01,seed=7`.
#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub kind: String,
    pub params: BTreeMap<String, String>,
}

impl FromStr for GenSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = BTreeMap::new();
        for kv in rest.split(',').filter(|t| !t.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidParam(format!("expected key=value, got {kv:?}")))?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self { kind: kind.trim().to_string(), params })
    }
}

impl GenSpec {
    pub fn new(kind: &str) -> Self {
        Self { kind: kind.into(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::InvalidParam(format!("{}: bad value {v:?} for {key}", self.kind))),
        }
    }

    fn need<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?
            .ok_or_else(|| Error::InvalidParam(format!("{}: missing parameter {key}", self.kind)))
    }

    pub fn build(&self) -> Result<Graph> {
        let seed: u64 = self.get("seed")?.unwrap_or(0);
        match self.kind.as_str() {
            "gnp" => {
                let p: f64 = self.need("p")?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidParam(format!("p = {p} outside [0, 1]")));
                }
                Ok(gnp(self.need("n")?, p, seed))
            }
            "connected_gnp" => Ok(connected_gnp(self.need("n")?, self.get("p")?.unwrap_or(0.0), seed)),
            "star" => Ok(star(self.need("n")?)),
            "path" => Ok(path(self.need("n")?)),
            "cycle" => Ok(cycle(self.need("n")?)),
            "clique" => Ok(clique(self.need("n")?)),
            "tree" => Ok(random_tree(self.need("n")?, seed)),
            "complete_bipartite" => Ok(complete_bipartite(self.need("a")?, self.need("b")?)),
            "empty" => Ok(Graph::empty(self.need("n")?)),
            "components" => {
                let sizes: Vec<usize> = match self.params.get("sizes") {
                    Some(list) => list
                        .split(['/', ';'])
                        .map(|t| t.parse().map_err(|_| Error::InvalidParam(format!("bad size {t:?}"))))
                        .collect::<Result<_>>()?,
                    None => vec![self.need("size")?; self.need("k")?],
                };
                let inner = match self.params.get("inner").map(String::as_str).unwrap_or("clique") {
                    "clique" => Inner::Clique,
                    "path" => Inner::Path,
                    "tree" => Inner::Tree,
                    "sparse" => Inner::Sparse(self.get("p")?.unwrap_or(0.05)),
                    other => return Err(Error::InvalidParam(format!("unknown inner block {other:?}"))),
                };
                components(&sizes, inner, seed)
            }
            other => Err(Error::InvalidParam(format!("unknown generator {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_extremes() {
        assert_eq!(gnp(10, 0.0, 1).m(), 0);
        assert_eq!(gnp(10, 1.0, 1).m(), 45);
    }

    #[test]
    fn gnp_edge_count_in_three_sigma() {
        let g = gnp(1024, 0.01, 7);
        let pairs = 1024.0 * 1023.0 / 2.0;
        let sd = (pairs * 0.01 * 0.99f64).sqrt();
        assert!((g.m() as f64 - pairs * 0.01).abs() <= 3.0 * sd, "m = {}", g.m());
        assert_eq!(g, gnp(1024, 0.01, 7));
    }

    #[test]
    fn gnp_pairs_are_uniform() {
        // Each pair should appear with frequency p across seeds.
        let mut hits = vec![0usize; 6];
        let runs = 4000;
        for s in 0..runs {
            let g = gnp(4, 0.3, s);
            for (i, (u, v)) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)].into_iter().enumerate() {
                hits[i] += g.has_edge(u, v) as usize;
            }
        }
        let sd = (runs as f64 * 0.21).sqrt();
        for h in hits {
            assert!((h as f64 - 0.3 * runs as f64).abs() < 4.0 * sd, "{h}");
        }
    }

    #[test]
    fn named_families() {
        assert_eq!(star(5).degrees(), vec![4, 1, 1, 1, 1]);
        let p = path(4);
        assert_eq!(p.m(), 3);
        assert!(p.exact_connected());
        assert_eq!(cycle(5).m(), 5);
        assert_eq!(complete_bipartite(2, 3).m(), 6);
        let t = random_tree(50, 3);
        assert_eq!(t.m(), 49);
        assert!(t.exact_connected());
        assert!(connected_gnp(80, 0.01, 4).exact_connected());
    }

    #[test]
    fn components_family() {
        let g = components(&[4, 4, 4], Inner::Clique, 0).unwrap();
        assert_eq!(g.exact_components().count, 3);
        assert_eq!(g.m(), 18);
        let g = components(&[5, 9, 3], Inner::Sparse(0.2), 11).unwrap();
        assert_eq!(g.exact_components().count, 3);
        assert!(components(&[3, 0], Inner::Path, 0).is_err());
    }

    #[test]
    fn spec_parsing() {
        let g = "gnp:n=100,p=0.1,seed=3".parse::<GenSpec>().unwrap().build().unwrap();
        assert_eq!(g, gnp(100, 0.1, 3));
        let g = "components:k=3,size=4".parse::<GenSpec>().unwrap().build().unwrap();
        assert_eq!(g.exact_components().count, 3);
        let g = "components:sizes=3/5,inner=path".parse::<GenSpec>().unwrap().build().unwrap();
        assert_eq!(g.m(), 6);
        assert!("gnp:n=10".parse::<GenSpec>().unwrap().build().is_err());
        assert!("gnp:n=10,p=2".parse::<GenSpec>().unwrap().build().is_err());
        assert!("nope:n=3".parse::<GenSpec>().unwrap().build().is_err());
    }
}
