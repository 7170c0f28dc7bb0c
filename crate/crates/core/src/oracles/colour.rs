//! Exact colouring: branch and bound, simplicial reduction, and a
//! q-colourability DP over clique-width expressions.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::bitset::VertexSet;
use crate::cw::term::{CwOp, CwTerm, TermError};
use crate::graph::Graph;

pub const CHROMATIC_LIMIT: usize = 30;
pub const DEFAULT_STATE_BUDGET: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Colouring {
    /// Colour of each vertex, `0..count`.
    pub colours: Vec<usize>,
    pub count: usize,
}

impl Colouring {
    pub fn is_proper(&self, g: &Graph) -> bool {
        self.colours.len() == g.n()
            && self.colours.iter().all(|&c| c < self.count.max(1))
            && g.edges()
                .iter()
                .all(|&(u, v)| self.colours[u] != self.colours[v])
    }

    fn from_assignment(colours: Vec<usize>) -> Self {
        let count = colours.iter().map(|&c| c + 1).max().unwrap_or(0);
        Colouring { colours, count }
    }
}

fn greedy_clique(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut best = Vec::new();
    for &s in &order {
        let mut clique = vec![s];
        let mut cand = g.neighbours(s).clone();
        for &v in &order {
            if cand.contains(v) {
                clique.push(v);
                cand.intersect_with(g.neighbours(v));
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

struct Dsatur<'a> {
    g: &'a Graph,
    k: usize,
    colour: Vec<Option<usize>>,
    /// `seen[v]` has bit `c` when a neighbour of `v` has colour `c`.
    seen: Vec<u64>,
}

impl Dsatur<'_> {
    fn pick(&self) -> Option<usize> {
        (0..self.g.n())
            .filter(|&v| self.colour[v].is_none())
            .max_by_key(|&v| {
                (
                    self.seen[v].count_ones(),
                    self.g.degree(v),
                    std::cmp::Reverse(v),
                )
            })
    }

    fn set(&mut self, v: usize, c: usize) {
        self.colour[v] = Some(c);
        for u in self.g.neighbours(v) {
            self.seen[u] = self.recompute(u);
        }
    }

    fn unset(&mut self, v: usize) {
        self.colour[v] = None;
        for u in self.g.neighbours(v) {
            self.seen[u] = self.recompute(u);
        }
    }

    fn recompute(&self, v: usize) -> u64 {
        self.g
            .neighbours(v)
            .iter()
            .filter_map(|u| self.colour[u])
            .fold(0, |m, c| m | 1 << c)
    }

    fn solve(&mut self, used: usize) -> bool {
        let Some(v) = self.pick() else {
            return true;
        };
        let limit = self.k.min(used + 1);
        for c in 0..limit {
            if self.seen[v] >> c & 1 == 1 {
                continue;
            }
            self.set(v, c);
            if self.solve(used.max(c + 1)) {
                return true;
            }
            self.unset(v);
        }
        false
    }
}

fn k_colouring(g: &Graph, k: usize, seed_clique: &[usize]) -> Option<Vec<usize>> {
    let mut d = Dsatur {
        g,
        k,
        colour: vec![None; g.n()],
        seen: vec![0; g.n()],
    };
    if seed_clique.len() > k {
        return None;
    }
    for (c, &v) in seed_clique.iter().enumerate() {
        d.set(v, c);
    }
    d.solve(seed_clique.len()).then(|| {
        d.colour
            .into_iter()
            .map(|c| c.expect("all coloured"))
            .collect()
    })
}

fn greedy_dsatur(g: &Graph) -> Vec<usize> {
    let mut d = Dsatur {
        g,
        k: g.n(),
        colour: vec![None; g.n()],
        seen: vec![0; g.n()],
    };
    while let Some(v) = d.pick() {
        let c = (!d.seen[v]).trailing_zeros() as usize;
        d.set(v, c);
    }
    d.colour
        .into_iter()
        .map(|c| c.expect("all coloured"))
        .collect()
}

/// Optimal colouring by DSATUR branch and bound, between a greedy clique
/// lower bound and a greedy colouring upper bound.
pub fn chromatic_number_exact(g: &Graph) -> Result<Colouring, OracleError> {
    let n = g.n();
    if n > CHROMATIC_LIMIT {
        return Err(OracleError::TooLarge {
            what: "exact colouring",
            n,
            limit: CHROMATIC_LIMIT,
        });
    }
    let clique = greedy_clique(g);
    let mut best = greedy_dsatur(g);
    let upper = best.iter().map(|&c| c + 1).max().unwrap_or(0);
    for k in clique.len()..upper {
        if let Some(c) = k_colouring(g, k, &clique) {
            best = c;
            break;
        }
    }
    Ok(Colouring::from_assignment(best))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    /// `(vertex, |N(vertex)| + 1)` at the time of removal, in removal order.
    pub removed: Vec<(usize, usize)>,
    /// Vertices left when no simplicial vertex remains, ascending.
    pub residual: Vec<usize>,
}

impl Elimination {
    pub fn bound(&self) -> usize {
        self.removed.iter().map(|r| r.1).max().unwrap_or(0)
    }
}

/// Repeatedly deletes the lowest-indexed simplicial vertex.
pub fn simplicial_eliminate(g: &Graph) -> Elimination {
    let mut alive = g.all_vertices();
    let mut removed = Vec::new();
    'outer: loop {
        for v in &alive {
            let nbrs = g.neighbours(v).intersection(&alive);
            if g.is_clique(&nbrs) {
                removed.push((v, nbrs.len() + 1));
                alive.remove(v);
                continue 'outer;
            }
        }
        break;
    }
    Elimination {
        removed,
        residual: alive.to_vec(),
    }
}

/// χ(G) = max(χ(residual), max |N(x)| + 1), with a colouring rebuilt by
/// re-inserting removed vertices in reverse order.
pub fn chromatic_via_simplicial(g: &Graph) -> Result<Colouring, OracleError> {
    let elim = simplicial_eliminate(g);
    let sub = g
        .induced_by_sequence(&elim.residual)
        .expect("residual vertices are in range");
    let inner = chromatic_number_exact(&sub.graph)?;
    let mut colours: Vec<Option<usize>> = vec![None; g.n()];
    for (i, &v) in sub.mapping.iter().enumerate() {
        colours[v] = Some(inner.colours[i]);
    }
    for &(v, _) in elim.removed.iter().rev() {
        let taken: VertexSet =
            VertexSet::from_iter_in(g.n() + 1, g.neighbours(v).iter().filter_map(|u| colours[u]));
        colours[v] = Some((0..).find(|&c| !taken.contains(c)).expect("free colour"));
    }
    let colouring =
        Colouring::from_assignment(colours.into_iter().map(|c| c.expect("coloured")).collect());
    debug_assert_eq!(colouring.count, inner.count.max(elim.bound()));
    Ok(colouring)
}

/// Per-colour label sets, sorted so that colour permutations coincide.
type Profile = Vec<u64>;

#[derive(Clone, Debug)]
enum Origin {
    Leaf,
    /// `perm[i]` is the child position that became position `i`.
    Unary {
        child: usize,
        perm: Vec<usize>,
    },
    Binary {
        left: usize,
        right: usize,
        perm_left: Vec<usize>,
        perm_right: Vec<usize>,
    },
}

#[derive(Default)]
struct Node {
    states: Vec<Profile>,
    origin: Vec<Origin>,
    index: HashMap<Profile, usize>,
    children: Vec<usize>,
    vertex: Option<usize>,
}

impl Node {
    fn add(&mut self, p: Profile, o: Origin, budget: usize) -> Result<(), OracleError> {
        if self.index.contains_key(&p) {
            return Ok(());
        }
        if self.states.len() >= budget {
            return Err(OracleError::StateBudget { budget });
        }
        self.index.insert(p.clone(), self.states.len());
        self.states.push(p);
        self.origin.push(o);
        Ok(())
    }
}

fn sorted_with_order(raw: &[u64]) -> (Profile, Vec<usize>) {
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by_key(|&i| raw[i]);
    (order.iter().map(|&i| raw[i]).collect(), order)
}

/// Distinct permutations of a sorted profile, as index maps.
fn distinct_perms(p: &[u64]) -> Vec<Vec<usize>> {
    fn rec(p: &[u64], used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..p.len() {
            if used[i] || (i > 0 && p[i] == p[i - 1] && !used[i - 1]) {
                continue;
            }
            used[i] = true;
            cur.push(i);
            rec(p, used, cur, out);
            cur.pop();
            used[i] = false;
        }
    }
    let mut out = Vec::new();
    rec(p, &mut vec![false; p.len()], &mut Vec::new(), &mut out);
    out
}

/// Decides q-colourability of the graph an expression builds. Returns a
/// proper colouring (indexed by vertex id) when one exists. Labels must be
/// below 64.
pub fn color_via_term(
    t: &CwTerm,
    q: usize,
    budget: usize,
) -> Result<Option<Colouring>, OracleError> {
    if t.ops.is_empty() {
        return Ok(Some(Colouring {
            colours: vec![],
            count: 0,
        }));
    }
    let mut nodes: Vec<Node> = Vec::with_capacity(t.ops.len());
    let mut stack: Vec<usize> = Vec::new();
    let mut n = 0;
    for (index, op) in t.ops.iter().enumerate() {
        let underflow = TermError::StackUnderflow { index };
        let mut node = Node::default();
        match *op {
            CwOp::Create { v, label } => {
                if label >= 64 {
                    return Err(TermError::LabelOutOfBudget {
                        index,
                        label,
                        budget: 64,
                    }
                    .into());
                }
                n = n.max(v + 1);
                node.vertex = Some(v);
                if q > 0 {
                    let mut p = vec![0; q];
                    p[q - 1] = 1 << label;
                    node.add(p, Origin::Leaf, budget)?;
                }
            }
            CwOp::Union => {
                let r = stack.pop().ok_or(underflow.clone())?;
                let l = stack.pop().ok_or(underflow.clone())?;
                node.children = vec![l, r];
                let (ln, rn) = (&nodes[l], &nodes[r]);
                for (li, ls) in ln.states.iter().enumerate() {
                    for (ri, rs) in rn.states.iter().enumerate() {
                        for pi in distinct_perms(rs) {
                            let raw: Vec<u64> = (0..q).map(|i| ls[i] | rs[pi[i]]).collect();
                            let (p, order) = sorted_with_order(&raw);
                            let o = Origin::Binary {
                                left: li,
                                right: ri,
                                perm_left: order.clone(),
                                perm_right: order.iter().map(|&i| pi[i]).collect(),
                            };
                            node.add(p, o, budget)?;
                        }
                    }
                }
            }
            CwOp::Join { a, b } => {
                let c = stack.pop().ok_or(underflow.clone())?;
                node.children = vec![c];
                let mask = 1u64 << a | 1u64 << b;
                for (ci, cs) in nodes[c].states.iter().enumerate() {
                    if cs.iter().all(|&x| x & mask != mask) {
                        let o = Origin::Unary {
                            child: ci,
                            perm: (0..q).collect(),
                        };
                        node.add(cs.clone(), o, budget)?;
                    }
                }
            }
            CwOp::Relabel { from, to } => {
                let c = stack.pop().ok_or(underflow.clone())?;
                node.children = vec![c];
                for (ci, cs) in nodes[c].states.iter().enumerate() {
                    let raw: Vec<u64> = cs
                        .iter()
                        .map(|&x| {
                            if x >> from & 1 == 1 {
                                (x & !(1 << from)) | 1 << to
                            } else {
                                x
                            }
                        })
                        .collect();
                    let (p, order) = sorted_with_order(&raw);
                    node.add(
                        p,
                        Origin::Unary {
                            child: ci,
                            perm: order,
                        },
                        budget,
                    )?;
                }
            }
        }
        stack.push(nodes.len());
        nodes.push(node);
    }
    if stack.len() != 1 {
        return Err(TermError::UnbalancedStack(stack.len()).into());
    }
    let root = nodes.len() - 1;
    if nodes[root].states.is_empty() {
        return Ok(None);
    }
    // Top-down: each node receives (state index, colour of each position).
    let mut chosen: Vec<Option<(usize, Vec<usize>)>> = vec![None; nodes.len()];
    chosen[root] = Some((0, (0..q).collect()));
    let mut colours = vec![usize::MAX; n];
    for k in (0..nodes.len()).rev() {
        let Some((si, pos_colour)) = chosen[k].take() else {
            continue;
        };
        let node = &nodes[k];
        match &node.origin[si] {
            Origin::Leaf => colours[node.vertex.expect("leaf vertex")] = pos_colour[q - 1],
            Origin::Unary { child, perm } => {
                let mut cc = vec![0; q];
                for i in 0..q {
                    cc[perm[i]] = pos_colour[i];
                }
                chosen[node.children[0]] = Some((*child, cc));
            }
            Origin::Binary {
                left,
                right,
                perm_left,
                perm_right,
            } => {
                let mut lc = vec![0; q];
                let mut rc = vec![0; q];
                for i in 0..q {
                    lc[perm_left[i]] = pos_colour[i];
                    rc[perm_right[i]] = pos_colour[i];
                }
                chosen[node.children[0]] = Some((*left, lc));
                chosen[node.children[1]] = Some((*right, rc));
            }
        }
    }
    // Vertex ids never created are left out of the graph; give them colour 0.
    for c in colours.iter_mut().filter(|c| **c == usize::MAX) {
        *c = 0;
    }
    Ok(Some(Colouring::from_assignment(colours)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::with_extra_vertex;

    fn chi(g: &Graph) -> usize {
        let c = chromatic_number_exact(g).unwrap();
        assert!(c.is_proper(g));
        c.count
    }

    #[test]
    fn exact_examples() {
        assert_eq!(chi(&Graph::cycle(6)), 2);
        assert_eq!(chi(&Graph::cycle(5)), 3);
        assert_eq!(chi(&Graph::complete(4)), 4);
        assert_eq!(chi(&Graph::empty(3)), 1);
        assert_eq!(chi(&Graph::empty(0)), 0);
        let wheel = with_extra_vertex(&Graph::cycle(6), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(chi(&wheel), 3);
    }

    #[test]
    fn simplicial_examples() {
        let tree = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let e = simplicial_eliminate(&tree);
        assert!(e.residual.is_empty());
        assert_eq!(chromatic_via_simplicial(&tree).unwrap().count, 2);

        let e = simplicial_eliminate(&Graph::cycle(6));
        assert!(e.removed.is_empty());
        assert_eq!(e.residual, vec![0, 1, 2, 3, 4, 5]);

        let k4 = Graph::complete(4);
        let e = simplicial_eliminate(&k4);
        assert!(e.residual.is_empty());
        assert_eq!(e.bound(), 4);
        let c = chromatic_via_simplicial(&k4).unwrap();
        assert!(c.is_proper(&k4));
        assert_eq!(c.count, 4);
    }

    fn k3_term() -> CwTerm {
        let mut t = CwTerm::new(3);
        t.ops = vec![
            CwOp::Create { v: 0, label: 0 },
            CwOp::Create { v: 1, label: 1 },
            CwOp::Union,
            CwOp::Join { a: 0, b: 1 },
            CwOp::Create { v: 2, label: 2 },
            CwOp::Union,
            CwOp::Join { a: 0, b: 2 },
            CwOp::Join { a: 1, b: 2 },
        ];
        t
    }

    #[test]
    fn term_dp_on_triangle() {
        let t = k3_term();
        assert_eq!(color_via_term(&t, 2, DEFAULT_STATE_BUDGET).unwrap(), None);
        let c = color_via_term(&t, 3, DEFAULT_STATE_BUDGET)
            .unwrap()
            .unwrap();
        assert!(c.is_proper(&Graph::complete(3)));
        assert_eq!(color_via_term(&t, 0, DEFAULT_STATE_BUDGET).unwrap(), None);
    }

    #[test]
    fn term_dp_budget_is_enforced() {
        let t = k3_term();
        assert!(matches!(
            color_via_term(&t, 3, 1),
            Err(OracleError::StateBudget { budget: 1 })
        ));
    }
}
