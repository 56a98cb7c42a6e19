//! Directed graphs with value semantics.
//!
//! A graph is an immutable node count plus sorted adjacency lists. Adding an
//! edge produces a new graph, which keeps concurrent candidate evaluation in
//! the selectors free of shared mutable state. Node identifiers are dense
//! indices in `0..n`.

use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    out: Vec<Vec<NodeId>>,
}

impl DirectedGraph {
    /// Builds a graph with `nodes` nodes and the given edges. Duplicate edges
    /// collapse to one; endpoints must lie in `0..nodes`.
    pub fn build(nodes: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut out = vec![Vec::new(); nodes];
        for &(u, v) in edges {
            if u >= nodes || v >= nodes {
                return Err(Error::EdgeOutOfRange { u, v, nodes });
            }
            out[u].push(v);
        }
        for list in &mut out {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { out })
    }

    pub fn empty(nodes: usize) -> Self {
        Self { out: vec![Vec::new(); nodes] }
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out[u].len()
    }

    pub fn is_sink(&self, u: NodeId) -> bool {
        self.out[u].is_empty()
    }

    pub fn out_neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.out[u]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.out.len() && self.out[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    /// Nodes with an edge into `v`, ascending.
    pub fn in_neighbors(&self, v: NodeId) -> Vec<NodeId> {
        (0..self.out.len()).filter(|&u| self.has_edge(u, v)).collect()
    }

    /// Returns a copy of the graph with the edge added. Adding an existing
    /// edge yields an identical copy.
    pub fn add_edge(&self, u: NodeId, v: NodeId) -> Result<Self> {
        let nodes = self.out.len();
        if u >= nodes || v >= nodes {
            return Err(Error::EdgeOutOfRange { u, v, nodes });
        }
        let mut next = self.clone();
        if let Err(pos) = next.out[u].binary_search(&v) {
            next.out[u].insert(pos, v);
        }
        Ok(next)
    }

    /// Copy with one edge `source -> target` added per source.
    pub fn add_backlinks(&self, sources: &[NodeId], target: NodeId) -> Result<Self> {
        let mut g = self.clone();
        for &s in sources {
            g = g.add_edge(s, target)?;
        }
        Ok(g)
    }
}

/// Parses the plain edge-list format: `#` comment lines, then the node count
/// on its own line, then one `u v` pair per line. Accepts LF or CRLF.
pub fn parse_edge_list(text: &str) -> Result<DirectedGraph> {
    let mut nodes: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let mut fields = line.split_whitespace();
        match nodes {
            None => {
                let head = fields.next().expect("non-empty line");
                if fields.next().is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("expected a single node count, got {line:?}"),
                    });
                }
                let n: usize = head.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("invalid node count {head:?}"),
                })?;
                nodes = Some(n);
            }
            Some(_) => {
                let (u, v) = match (fields.next(), fields.next(), fields.next()) {
                    (Some(u), Some(v), None) => (u, v),
                    _ => {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!("expected {:?} to be an edge `u v`", line),
                        })
                    }
                };
                let parse = |tok: &str| -> Result<NodeId> {
                    tok.parse().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("invalid node id {tok:?}"),
                    })
                };
                edges.push((parse(u)?, parse(v)?));
            }
        }
    }
    let nodes = nodes.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing node count line".into(),
    })?;
    DirectedGraph::build(nodes, &edges)
}

/// Renders the edge-list format written by this crate: node count first, then
/// edges ascending by source and target, LF line endings.
pub fn edge_list_to_string(g: &DirectedGraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", g.node_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

pub fn load_edge_list(path: &std::path::Path) -> Result<DirectedGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_edge_list(&text)
}

pub fn save_edge_list(g: &DirectedGraph, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, edge_list_to_string(g)).map_err(|e| Error::Parse {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })
}

/// Directed Erdos-Renyi sample: each ordered pair `u != v` becomes an edge
/// with probability `p`. Sinks are allowed; self-loops are not generated.
pub fn random_digraph<R: rand::Rng>(nodes: usize, p: f64, rng: &mut R) -> DirectedGraph {
    let mut edges = Vec::new();
    for u in 0..nodes {
        for v in 0..nodes {
            if u != v && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    DirectedGraph::build(nodes, &edges).expect("endpoints in range by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_sorts_and_dedups() {
        let g = DirectedGraph::build(4, &[(2, 1), (2, 3), (2, 1), (0, 3)]).unwrap();
        assert_eq!(g.out_neighbors(2), &[1, 3]);
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(0, 3));
        assert!(!g.has_edge(3, 0));
    }

    #[test]
    fn build_rejects_out_of_range() {
        let err = DirectedGraph::build(2, &[(0, 2)]).unwrap_err();
        assert_eq!(err, Error::EdgeOutOfRange { u: 0, v: 2, nodes: 2 });
    }

    #[test]
    fn add_edge_is_a_copy_and_idempotent() {
        let g = DirectedGraph::build(3, &[(0, 1)]).unwrap();
        let h = g.add_edge(1, 2).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.add_edge(1, 2).unwrap(), h);
    }

    #[test]
    fn in_neighbors_scans_all_sources() {
        let g = DirectedGraph::build(4, &[(1, 0), (3, 0), (2, 1)]).unwrap();
        assert_eq!(g.in_neighbors(0), vec![1, 3]);
        assert_eq!(g.in_neighbors(2), Vec::<NodeId>::new());
    }

    #[test]
    fn parse_round_trip_with_comments_and_crlf() {
        let text = "# fixture\r\n3\r\n0 1\r\n2 1\r\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.node_count(), 3);
        assert!(g.has_edge(0, 1) && g.has_edge(2, 1));
        assert_eq!(edge_list_to_string(&g), "3\n0 1\n2 1\n");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_edge_list("2\n0 one\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_edge_list("# only a comment\n") {
            Err(Error::Parse { message, .. }) => assert!(message.contains("node count")),
            other => panic!("unexpected {other:?}"),
        }
        match parse_edge_list("3\n0 1 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_edge_list("2\n0 5\n") {
            Err(Error::EdgeOutOfRange { v: 5, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn random_digraph_has_no_self_loops() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let g = random_digraph(20, 0.4, &mut rng);
        assert!(g.edges().all(|(u, v)| u != v));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph() -> impl Strategy<Value = DirectedGraph> {
            (1usize..12).prop_flat_map(|n| {
                proptest::collection::vec((0..n, 0..n), 0..30)
                    .prop_map(move |edges| DirectedGraph::build(n, &edges).unwrap())
            })
        }

        proptest! {
            #[test]
            fn edge_list_round_trips(g in arb_graph()) {
                let back = parse_edge_list(&edge_list_to_string(&g)).unwrap();
                prop_assert_eq!(back, g);
            }

            #[test]
            fn adjacency_is_sorted_unique(g in arb_graph()) {
                for u in 0..g.node_count() {
                    let vs = g.out_neighbors(u);
                    prop_assert!(vs.windows(2).all(|w| w[0] < w[1]));
                }
            }
        }
    }
}
