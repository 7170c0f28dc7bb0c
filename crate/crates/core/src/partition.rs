//! Relations between vertex sets (complete, anticomplete, monotone), vertex
//! partitions, extreme vertices, box graphs and the hereditary extreme vertex
//! property.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::{Graph, GraphBuilder, InducedSubgraph};
use crate::pattern::{induced_contains, PatternId};

/// Largest graph the exhaustive hev check accepts.
pub const HEV_BRUTE_LIMIT: usize = 18;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("vertex {0} appears in two sets")]
    Overlap(usize),
    #[error("vertex {0} is not covered by any part")]
    Uncovered(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("partition covers {partition} vertices but the graph has {graph}")]
    SizeMismatch { partition: usize, graph: usize },
    #[error("no part with index {0}")]
    NoSuchPart(usize),
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("part {part} is not monotone to its complement: {crossing}")]
    NotMonotone { part: usize, crossing: Crossing },
    #[error("sets are not monotone to each other: {0}")]
    Crossing(Crossing),
    #[error("{n} vertices exceeds the exhaustive limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// Four vertices `x, x' ∈ X`, `y, y' ∈ Y` with `x~y`, `x'~y'`, `x≁y'`, `x'≁y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub x: usize,
    pub x2: usize,
    pub y: usize,
    pub y2: usize,
}

impl Crossing {
    pub fn holds_in(&self, g: &Graph) -> bool {
        g.adjacent(self.x, self.y)
            && g.adjacent(self.x2, self.y2)
            && !g.adjacent(self.x, self.y2)
            && !g.adjacent(self.x2, self.y)
    }

    pub fn vertices(&self) -> Vec<usize> {
        vec![self.x, self.x2, self.y, self.y2]
    }
}

impl std::fmt::Display for Crossing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}~{}, {}~{}, {}≁{}, {}≁{}",
            self.x, self.y, self.x2, self.y2, self.x, self.y2, self.x2, self.y
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Complete,
    Anticomplete,
    Mixed,
}

/// How one vertex set sees another. An empty side is both complete and
/// anticomplete; that case is reported as `Anticomplete` with `vacuous` set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetRelation {
    pub kind: RelationKind,
    pub monotone: bool,
    pub vacuous: bool,
}

impl SetRelation {
    pub fn is_uniform(&self) -> bool {
        self.kind != RelationKind::Mixed
    }

    pub fn is_complete(&self) -> bool {
        self.kind == RelationKind::Complete || self.vacuous
    }

    pub fn is_anticomplete(&self) -> bool {
        self.kind == RelationKind::Anticomplete
    }
}

fn ensure_disjoint(x: &VertexSet, y: &VertexSet) -> Result<(), PartitionError> {
    match x.intersection(y).first() {
        Some(v) => Err(PartitionError::Overlap(v)),
        None => Ok(()),
    }
}

/// `N(v) ∩ Y` is empty or all of `Y`.
pub fn vertex_uniform_to(g: &Graph, v: usize, y: &VertexSet) -> bool {
    let k = g.neighbours(v).intersection_len(y);
    k == 0 || k == y.len()
}

/// A vertex pair `(x, y)` with `x ∈ X`, `y ∈ Y`, `x ≁ y`, if any.
pub fn first_non_edge(g: &Graph, x: &VertexSet, y: &VertexSet) -> Option<(usize, usize)> {
    x.iter()
        .find_map(|u| y.first_not_in(g.neighbours(u)).map(|v| (u, v)))
}

/// A pair `(x, y)` with `x ∈ X`, `y ∈ Y`, `x ~ y`, if any.
pub fn first_edge(g: &Graph, x: &VertexSet, y: &VertexSet) -> Option<(usize, usize)> {
    x.iter()
        .find_map(|u| g.neighbours(u).intersection(y).first().map(|v| (u, v)))
}

pub fn relation_between(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
) -> Result<SetRelation, PartitionError> {
    ensure_disjoint(x, y)?;
    if x.is_empty() || y.is_empty() {
        return Ok(SetRelation {
            kind: RelationKind::Anticomplete,
            monotone: true,
            vacuous: true,
        });
    }
    let edges: usize = x.iter().map(|u| g.neighbours(u).intersection_len(y)).sum();
    let kind = if edges == 0 {
        RelationKind::Anticomplete
    } else if edges == x.len() * y.len() {
        RelationKind::Complete
    } else {
        RelationKind::Mixed
    };
    let monotone = kind != RelationKind::Mixed || crossing_between(g, x, y).is_none();
    Ok(SetRelation {
        kind,
        monotone,
        vacuous: false,
    })
}

/// Sort `X` by `|N_Y|` and check consecutive neighbourhoods are nested; the
/// first failure yields a crossing. Does not check disjointness.
pub fn crossing_between(g: &Graph, x: &VertexSet, y: &VertexSet) -> Option<Crossing> {
    let mut rows: Vec<(usize, VertexSet)> = x
        .iter()
        .map(|u| (u, g.neighbours(u).intersection(y)))
        .collect();
    rows.sort_by_key(|(u, s)| (s.len(), *u));
    for w in rows.windows(2) {
        let (a, na) = &w[0];
        let (b, nb) = &w[1];
        if let Some(ya) = na.first_not_in(nb) {
            let yb = nb
                .first_not_in(na)
                .expect("|N(b)| >= |N(a)| and N(a) ⊄ N(b)");
            return Some(Crossing {
                x: *a,
                x2: *b,
                y: ya,
                y2: yb,
            });
        }
    }
    None
}

pub fn is_monotone_between(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
) -> Result<bool, PartitionError> {
    ensure_disjoint(x, y)?;
    Ok(crossing_between(g, x, y).is_none())
}

/// `X` ordered so that `N_Y` grows under inclusion; ties by vertex index.
pub fn monotone_order(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
) -> Result<Vec<usize>, PartitionError> {
    ensure_disjoint(x, y)?;
    if let Some(c) = crossing_between(g, x, y) {
        return Err(PartitionError::Crossing(c));
    }
    let mut order: Vec<usize> = x.to_vec();
    order.sort_by_key(|&u| (g.neighbours(u).intersection_len(y), u));
    Ok(order)
}

/// A named vertex set of a [`VertexPartition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub name: String,
    pub vertices: VertexSet,
    pub is_clique: bool,
}

/// Ordered partition of `V(G)` into named, possibly empty, parts. The part
/// index is the part's identity everywhere else in the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    n: usize,
    parts: Vec<Part>,
    part_of: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartDoc {
    pub name: String,
    pub vertices: Vec<usize>,
}

/// JSON shape: `{"parts": [{"name": …, "vertices": […]}, …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionDoc {
    pub parts: Vec<PartDoc>,
}

impl VertexPartition {
    pub fn new<S: Into<String>>(
        g: &Graph,
        parts: Vec<(S, Vec<usize>)>,
    ) -> Result<Self, PartitionError> {
        let n = g.n();
        let mut sets = Vec::with_capacity(parts.len());
        for (name, vs) in parts {
            let mut s = VertexSet::new(n);
            for v in vs {
                if v >= n {
                    return Err(PartitionError::OutOfRange { vertex: v, n });
                }
                if !s.insert(v) {
                    return Err(PartitionError::Overlap(v));
                }
            }
            sets.push((name.into(), s));
        }
        Self::from_sets(g, sets)
    }

    pub fn from_sets(g: &Graph, sets: Vec<(String, VertexSet)>) -> Result<Self, PartitionError> {
        let n = g.n();
        let mut part_of = vec![usize::MAX; n];
        let mut parts = Vec::with_capacity(sets.len());
        for (i, (name, vertices)) in sets.into_iter().enumerate() {
            if vertices.universe() != n {
                if let Some(v) = vertices.next_from(n) {
                    return Err(PartitionError::OutOfRange { vertex: v, n });
                }
            }
            let vertices = VertexSet::from_iter_in(n, vertices.iter());
            for v in &vertices {
                if part_of[v] != usize::MAX {
                    return Err(PartitionError::Overlap(v));
                }
                part_of[v] = i;
            }
            let is_clique = g.is_clique(&vertices);
            parts.push(Part {
                name,
                vertices,
                is_clique,
            });
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(PartitionError::Uncovered(v));
        }
        Ok(Self { n, parts, part_of })
    }

    /// One singleton part per vertex, named by the vertex index.
    pub fn singletons(g: &Graph) -> Self {
        Self::new(g, (0..g.n()).map(|v| (v.to_string(), vec![v])).collect())
            .expect("singletons partition")
    }

    pub fn from_doc(g: &Graph, doc: &PartitionDoc) -> Result<Self, PartitionError> {
        Self::new(
            g,
            doc.parts
                .iter()
                .map(|p| (p.name.clone(), p.vertices.clone()))
                .collect(),
        )
    }

    pub fn to_doc(&self) -> PartitionDoc {
        PartitionDoc {
            parts: self
                .parts
                .iter()
                .map(|p| PartDoc {
                    name: p.name.clone(),
                    vertices: p.vertices.to_vec(),
                })
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &Part {
        &self.parts[i]
    }

    pub fn set(&self, i: usize) -> &VertexSet {
        &self.parts[i].vertices
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn non_empty_parts(&self) -> usize {
        self.parts.iter().filter(|p| !p.vertices.is_empty()).count()
    }

    pub fn all_cliques(&self) -> bool {
        self.parts.iter().all(|p| p.is_clique)
    }

    /// `P[S]` transported onto an induced subgraph; empty parts are kept.
    pub fn restrict_to(&self, sub: &InducedSubgraph) -> VertexPartition {
        let mut sets: Vec<(String, Vec<usize>)> = self
            .parts
            .iter()
            .map(|p| (p.name.clone(), Vec::new()))
            .collect();
        for (new, &old) in sub.mapping.iter().enumerate() {
            sets[self.part_of[old]].1.push(new);
        }
        VertexPartition::new(&sub.graph, sets).expect("restriction of a partition")
    }

    pub(crate) fn check_graph(&self, g: &Graph) -> Result<(), PartitionError> {
        if self.n != g.n() {
            return Err(PartitionError::SizeMismatch {
                partition: self.n,
                graph: g.n(),
            });
        }
        Ok(())
    }
}

/// First part (by index) that is not monotone to its complement.
pub fn first_non_monotone_part(
    g: &Graph,
    p: &VertexPartition,
) -> Result<Option<(usize, Crossing)>, PartitionError> {
    p.check_graph(g)?;
    for (i, part) in p.parts().iter().enumerate() {
        let rest = part.vertices.complement();
        if let Some(c) = crossing_between(g, &part.vertices, &rest) {
            return Ok(Some((i, c)));
        }
    }
    Ok(None)
}

pub fn is_monotone_partition(g: &Graph, p: &VertexPartition) -> Result<bool, PartitionError> {
    Ok(first_non_monotone_part(g, p)?.is_none())
}

pub(crate) fn require_monotone(g: &Graph, p: &VertexPartition) -> Result<(), PartitionError> {
    match first_non_monotone_part(g, p)? {
        Some((part, crossing)) => Err(PartitionError::NotMonotone { part, crossing }),
        None => Ok(()),
    }
}

/// Inclusion-maximal and inclusion-minimal members of a part with respect to
/// their neighbourhood outside the part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extremes {
    pub maximal: Vec<usize>,
    pub minimal: Vec<usize>,
}

/// Extremes of `part ∩ active` inside `G[active]`. Assumes the restricted part
/// is monotone to the rest, so inclusion order and size order agree.
pub(crate) fn extremes_within(g: &Graph, part: &VertexSet, active: &VertexSet) -> Option<Extremes> {
    let members = part.intersection(active);
    if members.is_empty() {
        return None;
    }
    let outside = active.difference(part);
    let sizes: Vec<(usize, usize)> = members
        .iter()
        .map(|v| (v, g.neighbours(v).intersection_len(&outside)))
        .collect();
    let hi = sizes.iter().map(|s| s.1).max().expect("non-empty");
    let lo = sizes.iter().map(|s| s.1).min().expect("non-empty");
    Some(Extremes {
        maximal: sizes.iter().filter(|s| s.1 == hi).map(|s| s.0).collect(),
        minimal: sizes.iter().filter(|s| s.1 == lo).map(|s| s.0).collect(),
    })
}

pub fn extreme_vertices(
    g: &Graph,
    p: &VertexPartition,
    i: usize,
) -> Result<Extremes, PartitionError> {
    p.check_graph(g)?;
    if i >= p.len() {
        return Err(PartitionError::NoSuchPart(i));
    }
    let part = p.set(i);
    if part.is_empty() {
        return Err(PartitionError::EmptyPart(i));
    }
    if let Some(crossing) = crossing_between(g, part, &part.complement()) {
        return Err(PartitionError::NotMonotone { part: i, crossing });
    }
    Ok(extremes_within(g, part, &g.all_vertices()).expect("non-empty part"))
}

/// Graph on the parts of a partition; `i ~ j` iff part `i` is not uniform to
/// part `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxGraph {
    pub graph: Graph,
}

impl BoxGraph {
    pub fn node_count(&self) -> usize {
        self.graph.n()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.graph.edges()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.graph.n())
            .map(|v| self.graph.degree(v))
            .max()
            .unwrap_or(0)
    }

    pub fn is_forest(&self) -> bool {
        is_forest(self)
    }
}

pub fn box_graph(g: &Graph, p: &VertexPartition) -> Result<BoxGraph, PartitionError> {
    p.check_graph(g)?;
    let k = p.len();
    let mut b = GraphBuilder::new(k);
    for i in 0..k {
        for j in i + 1..k {
            let r = relation_between(g, p.set(i), p.set(j))?;
            if !r.is_uniform() {
                b.add_edge(i, j);
            }
        }
    }
    Ok(BoxGraph { graph: b.build() })
}

/// Acyclicity by union-find over the box edges.
pub fn is_forest(b: &BoxGraph) -> bool {
    let mut parent: Vec<usize> = (0..b.node_count()).collect();
    fn root(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (u, v) in b.edges() {
        let (ru, rv) = (root(&mut parent, u), root(&mut parent, v));
        if ru == rv {
            return false;
        }
        parent[ru] = rv;
    }
    true
}

/// Repeatedly removes a box node with at most one remaining box neighbour.
/// Returns the removal order when every node goes; this succeeds exactly on
/// forests and certifies the hev-property of a monotone partition.
pub fn leaf_strip_order(b: &BoxGraph) -> Option<Vec<usize>> {
    let k = b.node_count();
    let mut alive = VertexSet::full(k);
    let mut order = Vec::with_capacity(k);
    while let Some(v) = alive
        .iter()
        .find(|&v| b.graph.neighbours(v).intersection_len(&alive) <= 1)
    {
        alive.remove(v);
        order.push(v);
    }
    alive.is_empty().then_some(order)
}

/// Pairwise sufficient condition for monotonicity: part `i` is monotone to each
/// other part on its own and uniform to all of them but at most one. When it
/// holds, part `i` is monotone to its whole complement.
pub fn monotone_by_pairs(g: &Graph, p: &VertexPartition, i: usize) -> Result<bool, PartitionError> {
    p.check_graph(g)?;
    let mut non_uniform = 0;
    for j in (0..p.len()).filter(|&j| j != i) {
        let r = relation_between(g, p.set(i), p.set(j))?;
        if !r.monotone {
            return Ok(false);
        }
        if !r.is_uniform() {
            non_uniform += 1;
        }
    }
    Ok(non_uniform <= 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HevVerdict {
    pub holds: bool,
    /// Smallest (as a bitmask) vertex set whose restricted partition has no
    /// extreme vertex uniform to all other parts.
    pub violating_subset: Option<Vec<usize>>,
}

/// Exhaustive check of the hereditary extreme vertex property over all
/// non-empty vertex subsets.
pub fn hev_holds_brute(g: &Graph, p: &VertexPartition) -> Result<HevVerdict, PartitionError> {
    p.check_graph(g)?;
    let n = g.n();
    if n > HEV_BRUTE_LIMIT {
        return Err(PartitionError::TooLarge {
            n,
            limit: HEV_BRUTE_LIMIT,
        });
    }
    require_monotone(g, p)?;
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbours(v).iter().fold(0u32, |m, u| m | 1 << u))
        .collect();
    let parts: Vec<u32> = p
        .parts()
        .iter()
        .map(|part| part.vertices.iter().fold(0u32, |m, u| m | 1 << u))
        .collect();
    for x in 1u32..(1u32 << n) {
        if !extreme_vertex_property(&adj, &parts, x) {
            let subset = (0..n).filter(|&v| x >> v & 1 == 1).collect();
            return Ok(HevVerdict {
                holds: false,
                violating_subset: Some(subset),
            });
        }
    }
    Ok(HevVerdict {
        holds: true,
        violating_subset: None,
    })
}

fn extreme_vertex_property(adj: &[u32], parts: &[u32], x: u32) -> bool {
    for (i, &part) in parts.iter().enumerate() {
        let members = part & x;
        if members == 0 {
            continue;
        }
        let outside = x & !part;
        let (mut lo, mut hi) = (u32::MAX, 0);
        let mut m = members;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let d = (adj[v] & outside).count_ones();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        let mut m = members;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let d = (adj[v] & outside).count_ones();
            if d != lo && d != hi {
                continue;
            }
            let uniform = parts.iter().enumerate().all(|(j, &other)| {
                let aj = other & x;
                let seen = adj[v] & aj;
                j == i || seen == 0 || seen == aj
            });
            if uniform {
                return true;
            }
        }
    }
    false
}

/// Near-uniform partitions: every part a clique, the box graph a matching, and
/// each non-uniform pair inducing a C4-free graph.
pub fn near_uniform_check(g: &Graph, p: &VertexPartition) -> Result<bool, PartitionError> {
    let b = box_graph(g, p)?;
    if !p.all_cliques() || b.max_degree() > 1 {
        return Ok(false);
    }
    for (i, j) in b.edges() {
        let both = p.set(i).union(p.set(j));
        let sub = g.induced_subgraph(&both).expect("in range");
        if induced_contains(&sub.graph, PatternId::C4).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}
