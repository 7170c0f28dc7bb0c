//! Induced-subgraph detection for the small fixed patterns that define the
//! graph class, and the class gate itself.
//!
//! Witnesses are vertex tuples `w` laid out like the pattern graph returned by
//! [`PatternId::graph`]: `w[i] ~ w[j]` iff `i ~ j` in the pattern. Among all
//! such tuples the lexicographically smallest one is returned, so every
//! verdict is reproducible.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::graph::{Graph, GraphBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PatternId {
    FourK1,
    C4,
    P6,
    C6,
    K4,
    Diamond,
    Paw,
    Claw,
    CoDiamond,
    TwoK2,
    CoPaw,
    CoClaw,
    P4,
    /// Chordless cycle on `k >= 3` vertices.
    Cycle(usize),
    /// Chordless path on `k >= 1` vertices.
    Path(usize),
}

/// The eleven graphs on four vertices.
pub const FOUR_VERTEX_PATTERNS: [PatternId; 11] = [
    PatternId::P4,
    PatternId::K4,
    PatternId::Diamond,
    PatternId::C4,
    PatternId::Paw,
    PatternId::Claw,
    PatternId::FourK1,
    PatternId::CoDiamond,
    PatternId::TwoK2,
    PatternId::CoPaw,
    PatternId::CoClaw,
];

/// Forbidden patterns of the class, in the order the gate reports them.
pub const CLASS_PATTERNS: [PatternId; 3] = [PatternId::FourK1, PatternId::C4, PatternId::P6];

impl PatternId {
    pub fn order(self) -> usize {
        match self {
            PatternId::P6 | PatternId::C6 => 6,
            PatternId::Cycle(k) | PatternId::Path(k) => k,
            _ => 4,
        }
    }

    /// The pattern with its canonical vertex layout.
    pub fn graph(self) -> Graph {
        let e = |n: usize, edges: &[(usize, usize)]| Graph::from_edges(n, edges).expect("static");
        match self {
            PatternId::FourK1 => Graph::empty(4),
            PatternId::C4 => Graph::cycle(4),
            PatternId::P6 => Graph::path(6),
            PatternId::C6 => Graph::cycle(6),
            PatternId::K4 => Graph::complete(4),
            PatternId::Diamond => e(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]),
            PatternId::Paw => e(4, &[(0, 1), (1, 2), (1, 3), (2, 3)]),
            PatternId::Claw => e(4, &[(0, 1), (1, 2), (1, 3)]),
            PatternId::CoDiamond => e(4, &[(2, 3)]),
            PatternId::TwoK2 => e(4, &[(0, 1), (2, 3)]),
            PatternId::CoPaw => e(4, &[(0, 1), (1, 2)]),
            PatternId::CoClaw => e(4, &[(0, 1), (0, 2), (1, 2)]),
            PatternId::P4 => Graph::path(4),
            PatternId::Cycle(k) => Graph::cycle(k),
            PatternId::Path(k) => Graph::path(k),
        }
    }
}

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternId::FourK1 => f.write_str("4K1"),
            PatternId::C4 => f.write_str("C4"),
            PatternId::P6 => f.write_str("P6"),
            PatternId::C6 => f.write_str("C6"),
            PatternId::K4 => f.write_str("K4"),
            PatternId::Diamond => f.write_str("diamond"),
            PatternId::Paw => f.write_str("paw"),
            PatternId::Claw => f.write_str("claw"),
            PatternId::CoDiamond => f.write_str("co-diamond"),
            PatternId::TwoK2 => f.write_str("2K2"),
            PatternId::CoPaw => f.write_str("co-paw"),
            PatternId::CoClaw => f.write_str("co-claw"),
            PatternId::P4 => f.write_str("P4"),
            PatternId::Cycle(k) => write!(f, "C{k}"),
            PatternId::Path(k) => write!(f, "P{k}"),
        }
    }
}

impl FromStr for PatternId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "4K1" => PatternId::FourK1,
            "C4" => PatternId::C4,
            "P6" => PatternId::P6,
            "C6" => PatternId::C6,
            "K4" => PatternId::K4,
            "diamond" => PatternId::Diamond,
            "paw" => PatternId::Paw,
            "claw" => PatternId::Claw,
            "co-diamond" => PatternId::CoDiamond,
            "2K2" => PatternId::TwoK2,
            "co-paw" => PatternId::CoPaw,
            "co-claw" => PatternId::CoClaw,
            "P4" => PatternId::P4,
            _ => {
                let (kind, k) = s.split_at(1.min(s.len()));
                let k: usize = k.parse().map_err(|_| format!("unknown pattern `{s}`"))?;
                match kind {
                    "C" if k >= 3 => PatternId::Cycle(k),
                    "P" if k >= 1 => PatternId::Path(k),
                    _ => return Err(format!("unknown pattern `{s}`")),
                }
            }
        })
    }
}

impl Serialize for PatternId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PatternId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Lexicographically smallest tuple of `g` inducing `pattern` (with the
/// pattern's own vertex layout), found by backtracking with forward checking
/// on bit rows.
pub fn find_induced(g: &Graph, pattern: &Graph) -> Option<Vec<usize>> {
    let k = pattern.n();
    let n = g.n();
    if k > n {
        return None;
    }
    if k == 0 {
        return Some(Vec::new());
    }
    let full = VertexSet::full(n);
    let mut cands = vec![full; k];
    let mut tuple = Vec::with_capacity(k);
    if search(g, pattern, 0, &mut cands, &mut tuple) {
        Some(tuple)
    } else {
        None
    }
}

fn search(
    g: &Graph,
    pattern: &Graph,
    pos: usize,
    cands: &mut [VertexSet],
    tuple: &mut Vec<usize>,
) -> bool {
    let k = pattern.n();
    if pos == k {
        return true;
    }
    let here = cands[pos].clone();
    'next: for v in &here {
        let mut narrowed: Vec<VertexSet> = Vec::with_capacity(k - pos - 1);
        for (p, cand) in cands.iter().enumerate().skip(pos + 1) {
            let mut c = cand.clone();
            c.remove(v);
            if pattern.adjacent(pos, p) {
                c.intersect_with(g.neighbours(v));
            } else {
                c.difference_with(g.neighbours(v));
            }
            if c.is_empty() {
                continue 'next;
            }
            narrowed.push(c);
        }
        let saved: Vec<VertexSet> = cands[pos + 1..].to_vec();
        cands[pos + 1..].clone_from_slice(&narrowed);
        tuple.push(v);
        if search(g, pattern, pos + 1, cands, tuple) {
            return true;
        }
        tuple.pop();
        cands[pos + 1..].clone_from_slice(&saved);
    }
    false
}

/// True iff some two non-adjacent vertices have two non-adjacent common
/// neighbours.
pub fn has_induced_c4(g: &Graph) -> bool {
    let n = g.n();
    for u in 0..n {
        let mut non = g.neighbours(u).complement();
        non.remove(u);
        for v in non.iter().filter(|&v| v > u) {
            let common = g.neighbours(u).intersection(g.neighbours(v));
            if common.len() >= 2 && !g.is_clique(&common) {
                return true;
            }
        }
    }
    false
}

/// Canonical witness for `p` in `g`, or `None`.
pub fn induced_contains(g: &Graph, p: PatternId) -> Option<Vec<usize>> {
    if p.order() > g.n() {
        return None;
    }
    if matches!(p, PatternId::C4 | PatternId::Cycle(4)) && !has_induced_c4(g) {
        return None;
    }
    find_induced(g, &p.graph())
}

/// Does `tuple` induce exactly the pattern layout?
pub fn witness_matches(g: &Graph, p: PatternId, tuple: &[usize]) -> bool {
    match g.induced_by_sequence(tuple) {
        Ok(sub) => sub.graph == p.graph(),
        Err(_) => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ClassVerdict {
    InClass,
    Witness {
        pattern: PatternId,
        vertices: Vec<usize>,
    },
}

impl ClassVerdict {
    pub fn is_in_class(&self) -> bool {
        matches!(self, ClassVerdict::InClass)
    }
}

/// The (4K1, C4, P6)-free gate: first witness in the order 4K1, C4, P6.
pub fn is_in_class(g: &Graph) -> ClassVerdict {
    for p in CLASS_PATTERNS {
        if let Some(vertices) = induced_contains(g, p) {
            return ClassVerdict::Witness {
                pattern: p,
                vertices,
            };
        }
    }
    ClassVerdict::InClass
}

/// Lexicographically smallest tuple `(c1, …, c6)` inducing a 6-cycle in that
/// order.
pub fn find_c6(g: &Graph) -> Option<[usize; 6]> {
    induced_contains(g, PatternId::C6).map(|w| w.try_into().expect("six vertices"))
}

/// Graph with an extra vertex joined to `nbrs` (test and generator helper).
pub fn with_extra_vertex(g: &Graph, nbrs: &[usize]) -> Graph {
    let n = g.n();
    let mut b = GraphBuilder::new(n + 1);
    for (u, v) in g.edges() {
        b.add_edge(u, v);
    }
    for &u in nbrs {
        b.add_edge(u, n);
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_vertex_patterns_are_distinct_and_have_four_vertices() {
        let gs: Vec<Graph> = FOUR_VERTEX_PATTERNS.iter().map(|p| p.graph()).collect();
        for (i, g) in gs.iter().enumerate() {
            assert_eq!(g.n(), 4);
            // Edge counts 0..=6 cover the eleven classes with the known multiplicities.
            for h in &gs[i + 1..] {
                assert_ne!(g, h);
            }
        }
        let mut counts = [0usize; 7];
        for g in &gs {
            counts[g.m()] += 1;
        }
        assert_eq!(counts, [1, 1, 2, 3, 2, 1, 1]);
    }

    #[test]
    fn names_round_trip() {
        for p in FOUR_VERTEX_PATTERNS.into_iter().chain([
            PatternId::P6,
            PatternId::C6,
            PatternId::Cycle(7),
            PatternId::Path(9),
        ]) {
            assert_eq!(p.to_string().parse::<PatternId>().unwrap(), p);
        }
        assert!("C2".parse::<PatternId>().is_err());
        assert!("X".parse::<PatternId>().is_err());
    }

    #[test]
    fn detector_examples() {
        assert_eq!(
            induced_contains(&Graph::complete(4), PatternId::FourK1),
            None
        );
        assert_eq!(induced_contains(&Graph::cycle(6), PatternId::C4), None);
        let w = induced_contains(&Graph::cycle(7), PatternId::P6).unwrap();
        assert_eq!(w, vec![0, 1, 2, 3, 4, 5]);
        assert!(witness_matches(&Graph::cycle(7), PatternId::P6, &w));
        assert_eq!(induced_contains(&Graph::cycle(3), PatternId::FourK1), None);
    }

    #[test]
    fn class_gate_examples() {
        assert_eq!(is_in_class(&Graph::cycle(6)), ClassVerdict::InClass);
        assert_eq!(is_in_class(&Graph::complete(4)), ClassVerdict::InClass);
        assert_eq!(
            is_in_class(&Graph::cycle(4)),
            ClassVerdict::Witness {
                pattern: PatternId::C4,
                vertices: vec![0, 1, 2, 3]
            }
        );
        match is_in_class(&Graph::empty(5)) {
            ClassVerdict::Witness { pattern, vertices } => {
                assert_eq!(pattern, PatternId::FourK1);
                assert_eq!(vertices, vec![0, 1, 2, 3]);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn c6_finder_examples() {
        assert_eq!(find_c6(&Graph::cycle(6)), Some([0, 1, 2, 3, 4, 5]));
        assert_eq!(find_c6(&Graph::cycle(7)), None);
        assert_eq!(find_c6(&Graph::complete(4)), None);
        // A relabelled hexagon: the canonical tuple starts at the smallest vertex
        // and walks to its smaller neighbour first.
        let g = Graph::from_edges(6, &[(0, 3), (3, 5), (5, 1), (1, 4), (4, 2), (2, 0)]).unwrap();
        let c = find_c6(&g).unwrap();
        assert_eq!(c, [0, 2, 4, 1, 5, 3]);
        assert!(witness_matches(&g, PatternId::C6, &c));
    }

    #[test]
    fn c4_set_algebra_agrees_with_matcher() {
        for g in [
            Graph::cycle(4),
            Graph::cycle(5),
            Graph::cycle(6),
            Graph::complete(5),
        ] {
            assert_eq!(
                has_induced_c4(&g),
                find_induced(&g, &Graph::cycle(4)).is_some()
            );
        }
    }

    #[test]
    fn with_extra_vertex_adds_a_vertex() {
        let g = with_extra_vertex(&Graph::cycle(6), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(g.n(), 7);
        assert_eq!(g.degree(6), 6);
    }
}
