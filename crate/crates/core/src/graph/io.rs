//! Edge-list text format.
//!
//! An optional `# n=<N>` header fixes the vertex count, then one `u v` pair per
//! line. Blank lines and other `#` comments are ignored. Without a header,
//! `n = 1 + max id`.

use super::Graph;
use crate::error::{Error, Result};

pub fn load_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut max_id: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("n=") {
                let n = v.trim().parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    reason: format!("bad vertex count {:?}", v.trim()),
                })?;
                declared = Some(n);
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let mut next = |what: &str| -> Result<usize> {
            let tok = parts.next().ok_or_else(|| Error::Parse { line: line_no, reason: format!("missing {what} vertex") })?;
            let v = tok.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                reason: format!("{tok:?} is not a vertex id"),
            })?;
            if v >= u32::MAX as u64 {
                return Err(Error::Parse { line: line_no, reason: format!("vertex id {v} overflows") });
            }
            Ok(v as usize)
        };
        let u = next("first")?;
        let v = next("second")?;
        if parts.next().is_some() {
            return Err(Error::Parse { line: line_no, reason: "more than two fields".into() });
        }
        if u == v {
            return Err(Error::Parse { line: line_no, reason: format!("self-loop at vertex {u}") });
        }
        if let Some(n) = declared {
            if u.max(v) >= n {
                return Err(Error::Parse { line: line_no, reason: format!("vertex {} exceeds header n={n}", u.max(v)) });
            }
        }
        max_id = Some(max_id.map_or(u.max(v), |m: usize| m.max(u).max(v)));
        edges.push((u, v));
    }
    let n = declared.unwrap_or(max_id.map_or(0, |m| m + 1));
    Graph::from_edges(n, edges)
}

/// Header line, then `u v` with `u < v` in sorted order.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("# n={}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;
    use proptest::prelude::*;

    #[test]
    fn header_only() {
        let g = load_edge_list("# n=3\n").unwrap();
        assert_eq!((g.n(), g.m()), (3, 0));
        assert_eq!(load_edge_list("").unwrap().n(), 0);
    }

    #[test]
    fn triangle() {
        let g = load_edge_list("0 1\n1 2\n0 2").unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
    }

    #[test]
    fn errors_name_the_line() {
        assert_eq!(
            load_edge_list("0 1\n0 0\n"),
            Err(Error::Parse { line: 2, reason: "self-loop at vertex 0".into() })
        );
        assert!(matches!(load_edge_list("0 1\n2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(load_edge_list("a b"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_edge_list("# n=2\n0 5"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(load_edge_list("0 99999999999"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_edge_list("0 1 2"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn writer_format() {
        let text = write_edge_list(&generate::star(5));
        assert_eq!(text, "# n=5\n0 1\n0 2\n0 3\n0 4\n");
    }

    proptest! {
        #[test]
        fn round_trip(n in 0usize..60, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = generate::gnp(n, p, seed);
            let back = load_edge_list(&write_edge_list(&g)).unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
