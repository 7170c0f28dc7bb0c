//! Simple undirected graphs with one adjacency bit row per vertex, plus the
//! DIMACS-style edge-list reader and writer.

use std::fmt::Write as _;

use thiserror::Error;

use crate::bitset::VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing `p edge <n> <m>` header")]
    MissingHeader,
    #[error("header announced {expected} edges but {found} were listed")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {0} listed twice")]
    DuplicateVertex(usize),
}

/// Immutable simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    rows: Vec<VertexSet>,
    names: Option<Vec<String>>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

/// Mutable staging area for a [`Graph`]; the only way edges get added.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    rows: Vec<VertexSet>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            rows: (0..n).map(|_| VertexSet::new(n)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Adds `uv`; returns false if it was already present. Panics on loops or
    /// out-of-range endpoints.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v, "self-loop at {u}");
        self.rows[u].insert(v);
        self.rows[v].insert(u)
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        self.rows[u].remove(v);
        self.rows[v].remove(u)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    /// Makes `set` a clique.
    pub fn add_clique(&mut self, set: &[usize]) {
        for (i, &u) in set.iter().enumerate() {
            for &v in &set[i + 1..] {
                self.add_edge(u, v);
            }
        }
    }

    pub fn add_complete(&mut self, a: &[usize], b: &[usize]) {
        for &u in a {
            for &v in b {
                self.add_edge(u, v);
            }
        }
    }

    pub fn build(self) -> Graph {
        Graph {
            rows: self.rows,
            names: None,
        }
    }
}

impl From<&Graph> for GraphBuilder {
    fn from(g: &Graph) -> Self {
        Self {
            rows: g.rows.clone(),
        }
    }
}

/// Graph induced on a vertex subset, relabelled `0..k`; `mapping[new] = old`.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub mapping: Vec<usize>,
}

impl InducedSubgraph {
    pub fn to_original(&self, vs: &[usize]) -> Vec<usize> {
        vs.iter().map(|&v| self.mapping[v]).collect()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        GraphBuilder::new(n).build()
    }

    /// Builds from a 0-indexed edge list. Repeated edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            b.add_edge(u, v);
        }
        Ok(b.build())
    }

    pub fn complete(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        b.add_clique(&(0..n).collect::<Vec<_>>());
        b.build()
    }

    pub fn path(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        for i in 1..n {
            b.add_edge(i - 1, i);
        }
        b.build()
    }

    /// Chordless cycle `0-1-…-(n-1)-0`; needs `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        let mut b = GraphBuilder::new(n);
        for i in 0..n {
            b.add_edge(i, (i + 1) % n);
        }
        b.build()
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.n());
        self.names = Some(names);
        self
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.rows.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn vertex_set<I: IntoIterator<Item = usize>>(&self, vs: I) -> VertexSet {
        VertexSet::from_iter_in(self.n(), vs)
    }

    /// Sorted edge list with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for u in 0..self.n() {
            out.extend(self.rows[u].iter().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn is_clique(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| {
            let mut rest = set.clone();
            rest.remove(v);
            rest.is_subset(&self.rows[v])
        })
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| self.rows[v].is_disjoint(set))
    }

    /// Same graph with the adjacency of `uv` flipped.
    pub fn with_edge_toggled(&self, u: usize, v: usize) -> Graph {
        let mut b = GraphBuilder::from(self);
        if b.has_edge(u, v) {
            b.remove_edge(u, v);
        } else {
            b.add_edge(u, v);
        }
        let mut g = b.build();
        g.names = self.names.clone();
        g
    }

    /// `G[S]` with vertices renumbered in increasing order of `S`.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<InducedSubgraph, GraphError> {
        if set.universe() > self.n() {
            if let Some(v) = set.next_from(self.n()) {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v,
                    n: self.n(),
                });
            }
        }
        self.induced_by_sequence(&set.to_vec())
    }

    /// `G[S]` with new vertex `i` being `seq[i]`, so the order of `seq` is
    /// preserved (useful for comparing witnesses against pattern layouts).
    pub fn induced_by_sequence(&self, seq: &[usize]) -> Result<InducedSubgraph, GraphError> {
        let n = self.n();
        let mut seen = VertexSet::new(n);
        for &v in seq {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if !seen.insert(v) {
                return Err(GraphError::DuplicateVertex(v));
            }
        }
        let mut b = GraphBuilder::new(seq.len());
        for (i, &u) in seq.iter().enumerate() {
            for (j, &v) in seq.iter().enumerate().skip(i + 1) {
                if self.adjacent(u, v) {
                    b.add_edge(i, j);
                }
            }
        }
        let mut graph = b.build();
        if let Some(names) = &self.names {
            graph.names = Some(seq.iter().map(|&v| names[v].clone()).collect());
        }
        Ok(InducedSubgraph {
            graph,
            mapping: seq.to_vec(),
        })
    }

    /// Edge-list text: optional `c vertex <i> <name>` lines, the header, then
    /// sorted 1-indexed `e u v` lines.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        if let Some(names) = &self.names {
            for (i, name) in names.iter().enumerate() {
                let _ = writeln!(out, "c vertex {} {}", i + 1, name);
            }
        }
        let _ = writeln!(out, "p edge {} {}", self.n(), self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        out
    }
}

fn parse_index(tok: &str, line: usize, what: &str) -> Result<usize, GraphError> {
    tok.parse().map_err(|_| GraphError::Parse {
        line,
        msg: format!("bad {what} `{tok}`"),
    })
}

/// Parses the edge-list format (1-indexed in the file, 0-indexed in memory).
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut builder: Option<GraphBuilder> = None;
    let mut names: Vec<(usize, String)> = Vec::new();
    let mut listed = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(&kind) = toks.first() else { continue };
        let err = |msg: String| GraphError::Parse { line, msg };
        match kind {
            "c" => {
                if toks.len() >= 4 && toks[1] == "vertex" {
                    let i = parse_index(toks[2], line, "vertex index")?;
                    names.push((i, toks[3..].join(" ")));
                }
            }
            "p" => {
                if header.is_some() {
                    return Err(err("second header".into()));
                }
                if toks.len() != 4 || toks[1] != "edge" {
                    return Err(err(format!("malformed header `{}`", raw.trim())));
                }
                let n = parse_index(toks[2], line, "vertex count")?;
                let m = parse_index(toks[3], line, "edge count")?;
                header = Some((n, m));
                builder = Some(GraphBuilder::new(n));
            }
            "e" => {
                let Some(b) = builder.as_mut() else {
                    return Err(err("edge before header".into()));
                };
                if toks.len() != 3 {
                    return Err(err(format!("malformed edge `{}`", raw.trim())));
                }
                let n = b.n();
                let u = parse_index(toks[1], line, "vertex")?;
                let v = parse_index(toks[2], line, "vertex")?;
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(err(format!("vertex index {x} out of range 1..={n}")));
                    }
                }
                if u == v {
                    return Err(err(format!("self-loop at vertex {u}")));
                }
                if !b.add_edge(u - 1, v - 1) {
                    return Err(err(format!("duplicate edge {u} {v}")));
                }
                listed += 1;
            }
            other => return Err(err(format!("unknown line type `{other}`"))),
        }
    }

    let (n, m) = header.ok_or(GraphError::MissingHeader)?;
    if listed != m {
        return Err(GraphError::EdgeCountMismatch {
            expected: m,
            found: listed,
        });
    }
    let mut g = builder.expect("header seen").build();
    if !names.is_empty() {
        let mut all = (1..=n).map(|i| i.to_string()).collect::<Vec<_>>();
        for (i, name) in names {
            if i == 0 || i > n {
                return Err(GraphError::VertexOutOfRange { vertex: i, n });
            }
            all[i - 1] = name;
        }
        g = g.with_names(all);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_k2() {
        let g = parse_graph("p edge 2 1\ne 1 2\n").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        assert!(g.adjacent(0, 1));
    }

    #[test]
    fn parses_c6_with_comments() {
        let text = "c a hexagon\np edge 6 6\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 6\ne 6 1\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g, Graph::cycle(6));
    }

    #[test]
    fn rejects_out_of_range_with_line() {
        let e = parse_graph("p edge 3 1\ne 1 4\n").unwrap_err();
        assert!(matches!(e, GraphError::Parse { line: 2, .. }), "{e}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let cases = [
            ("p edge 2\n", 1),
            ("p edge 2 1\ne 1 1\n", 2),
            ("p edge 3 2\ne 1 2\ne 2 1\n", 3),
            ("e 1 2\n", 1),
            ("p edge 2 1\nq\n", 2),
            ("p edge 2 1\np edge 2 1\n", 2),
        ];
        for (text, line) in cases {
            match parse_graph(text) {
                Err(GraphError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        assert_eq!(parse_graph("c nothing\n"), Err(GraphError::MissingHeader));
        assert_eq!(
            parse_graph("p edge 3 2\ne 1 2\n"),
            Err(GraphError::EdgeCountMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn writer_sorts_and_round_trips_names() {
        let g = Graph::from_edges(3, &[(2, 1), (1, 0)])
            .unwrap()
            .with_names(vec!["a".into(), "b".into(), "c".into()]);
        let text = g.to_dimacs();
        assert!(text.ends_with("p edge 3 2\ne 1 2\ne 2 3\n"), "{text}");
        let back = parse_graph(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.names().unwrap()[2], "c");
    }

    #[test]
    fn induced_subgraphs() {
        let c6 = Graph::cycle(6);
        let p3 = c6.induced_subgraph(&c6.vertex_set([0, 1, 2])).unwrap();
        assert_eq!(p3.graph, Graph::path(3));
        let none = c6.induced_subgraph(&c6.vertex_set([])).unwrap();
        assert_eq!(none.graph.n(), 0);
        let k4 = Graph::complete(4);
        let k2 = k4.induced_subgraph(&k4.vertex_set([0, 1])).unwrap();
        assert_eq!(k2.graph, Graph::complete(2));
        let big = VertexSet::from_iter_in(10, [9]);
        assert!(matches!(
            k4.induced_subgraph(&big),
            Err(GraphError::VertexOutOfRange { vertex: 9, n: 4 })
        ));
        assert!(matches!(
            k4.induced_by_sequence(&[1, 1]),
            Err(GraphError::DuplicateVertex(1))
        ));
    }

    #[test]
    fn toggling_is_an_involution() {
        let g = Graph::cycle(5);
        let h = g.with_edge_toggled(0, 2);
        assert_eq!(h.m(), 6);
        assert_eq!(h.with_edge_toggled(2, 0), g);
    }
}
