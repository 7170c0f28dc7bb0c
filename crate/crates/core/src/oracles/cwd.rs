//! Exact clique-width decision for tiny graphs.
//!
//! A state is a vertex subset `S` together with a partition of `S` into label
//! classes, standing for `G[S]` with that labelling. Two vertices may share a
//! label only if they have the same neighbours outside `S`, since later joins
//! cannot tell them apart. A state is reachable from singletons by the union
//! of two disjoint states (classes of the two sides may be identified), all
//! joins between classes that are fully adjacent in `G`, and merges of
//! classes. The graph has clique-width at most `c` iff some state on `V(G)`
//! with at most `c` classes is reachable.

use std::collections::HashMap;

use serde::Serialize;

use super::OracleError;
use crate::cw::term::{CwOp, CwTerm};
use crate::graph::Graph;

pub const CWD_VERTEX_LIMIT: usize = 8;
pub const CWD_LABEL_LIMIT: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CwdDecision {
    pub n: usize,
    pub width: usize,
    pub answer: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CwTerm>,
}

type Classes = Vec<u8>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    set: u8,
    classes: Classes,
}

#[derive(Clone, Debug)]
enum Origin {
    Create(usize),
    Union { left: State, right: State },
    Merge { parent: State, a: u8, b: u8 },
}

struct Search {
    adj: Vec<u8>,
    all: u8,
    c: usize,
    origin: HashMap<State, Origin>,
    by_set: HashMap<u8, Vec<Classes>>,
}

fn bits(mut m: u8) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(v)
    })
}

impl Search {
    fn outside(&self, class: u8, set: u8) -> u8 {
        let v = class.trailing_zeros() as usize;
        self.adj[v] & self.all & !set
    }

    fn uniform_outside(&self, class: u8, set: u8) -> bool {
        let sig = self.outside(class, set);
        bits(class).all(|v| self.adj[v] & self.all & !set == sig)
    }

    fn fully_adjacent(&self, a: u8, b: u8) -> bool {
        bits(a).all(|v| self.adj[v] & b == b)
    }

    fn insert(&mut self, st: State, how: Origin) -> bool {
        if self.origin.contains_key(&st) {
            return false;
        }
        self.by_set
            .entry(st.set)
            .or_default()
            .push(st.classes.clone());
        self.origin.insert(st, how);
        true
    }

    /// Adds a state and every state reachable from it by merging classes.
    fn insert_with_merges(&mut self, st: State, how: Origin) {
        if !self.insert(st.clone(), how) {
            return;
        }
        let mut queue = vec![st];
        while let Some(cur) = queue.pop() {
            let k = cur.classes.len();
            for i in 0..k {
                for j in i + 1..k {
                    let (a, b) = (cur.classes[i], cur.classes[j]);
                    if self.outside(a, cur.set) != self.outside(b, cur.set) {
                        continue;
                    }
                    let mut classes: Classes = cur
                        .classes
                        .iter()
                        .copied()
                        .filter(|&x| x != a && x != b)
                        .collect();
                    classes.push(a | b);
                    classes.sort_unstable();
                    let next = State {
                        set: cur.set,
                        classes,
                    };
                    let how = Origin::Merge {
                        parent: cur.clone(),
                        a,
                        b,
                    };
                    if self.insert(next.clone(), how) {
                        queue.push(next);
                    }
                }
            }
        }
    }

    /// Union of two states under a partial identification of their classes.
    fn try_union(&self, left: &State, right: &State, pairing: &[Option<usize>]) -> Option<State> {
        let set = left.set | right.set;
        let mut classes: Classes = Vec::with_capacity(self.c);
        let mut used = vec![false; right.classes.len()];
        for (i, &a) in left.classes.iter().enumerate() {
            match pairing[i] {
                Some(j) => {
                    used[j] = true;
                    classes.push(a | right.classes[j]);
                }
                None => classes.push(a),
            }
        }
        classes.extend(
            right
                .classes
                .iter()
                .zip(&used)
                .filter(|(_, &u)| !u)
                .map(|(&b, _)| b),
        );
        if classes.len() > self.c {
            return None;
        }
        if !classes.iter().all(|&cl| self.uniform_outside(cl, set)) {
            return None;
        }
        let class_of = |v: usize| classes.iter().position(|&cl| cl >> v & 1 == 1).unwrap();
        for u in bits(left.set) {
            for v in bits(self.adj[u] & right.set) {
                let (cu, cv) = (class_of(u), class_of(v));
                if cu == cv || !self.fully_adjacent(classes[cu], classes[cv]) {
                    return None;
                }
            }
        }
        classes.sort_unstable();
        Some(State { set, classes })
    }

    fn pairings(k1: usize, k2: usize, max_pairs_needed: usize) -> Vec<Vec<Option<usize>>> {
        #[allow(clippy::too_many_arguments)]
        fn rec(
            i: usize,
            k1: usize,
            k2: usize,
            used: &mut Vec<bool>,
            cur: &mut Vec<Option<usize>>,
            pairs: usize,
            need: usize,
            out: &mut Vec<Vec<Option<usize>>>,
        ) {
            if i == k1 {
                if pairs >= need {
                    out.push(cur.clone());
                }
                return;
            }
            cur.push(None);
            rec(i + 1, k1, k2, used, cur, pairs, need, out);
            cur.pop();
            for j in 0..k2 {
                if !used[j] {
                    used[j] = true;
                    cur.push(Some(j));
                    rec(i + 1, k1, k2, used, cur, pairs + 1, need, out);
                    cur.pop();
                    used[j] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(
            0,
            k1,
            k2,
            &mut vec![false; k2],
            &mut Vec::new(),
            0,
            max_pairs_needed,
            &mut out,
        );
        out
    }

    fn run(&mut self, n: usize) -> Option<State> {
        for v in 0..n {
            let st = State {
                set: 1 << v,
                classes: vec![1 << v],
            };
            self.insert(st, Origin::Create(v));
        }
        if n == 1 {
            return self.goal();
        }
        for size in 2..=n {
            let mut fresh: Vec<(State, Origin)> = Vec::new();
            let sets: Vec<u8> = self.by_set.keys().copied().collect();
            for &sa in &sets {
                let la = sa.count_ones() as usize;
                if la >= size {
                    continue;
                }
                for &sb in &sets {
                    if sb.count_ones() as usize != size - la
                        || sa & sb != 0
                        || (sa | sb).trailing_zeros() != sa.trailing_zeros()
                    {
                        continue;
                    }
                    for ca in &self.by_set[&sa] {
                        for cb in &self.by_set[&sb] {
                            let need = (ca.len() + cb.len()).saturating_sub(self.c);
                            let left = State {
                                set: sa,
                                classes: ca.clone(),
                            };
                            let right = State {
                                set: sb,
                                classes: cb.clone(),
                            };
                            for pairing in Self::pairings(ca.len(), cb.len(), need) {
                                if let Some(st) = self.try_union(&left, &right, &pairing) {
                                    fresh.push((
                                        st,
                                        Origin::Union {
                                            left: left.clone(),
                                            right: right.clone(),
                                        },
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            for (st, how) in fresh {
                self.insert_with_merges(st, how);
            }
            if size == n {
                return self.goal();
            }
        }
        None
    }

    fn goal(&self) -> Option<State> {
        self.by_set.get(&self.all).and_then(|cs| {
            cs.iter().min_by_key(|c| c.len()).map(|c| State {
                set: self.all,
                classes: c.clone(),
            })
        })
    }

    /// Emits an expression for `st` in which class `st.classes[i]` ends with
    /// label `labels[i]`.
    fn emit(&self, st: &State, labels: &[usize], ops: &mut Vec<CwOp>) {
        let label_of = |class: u8| labels[st.classes.iter().position(|&c| c == class).unwrap()];
        match &self.origin[st] {
            Origin::Create(v) => ops.push(CwOp::Create {
                v: *v,
                label: labels[0],
            }),
            Origin::Merge { parent, a, b } => {
                let merged = label_of(a | b);
                let free = (0..self.c)
                    .find(|l| !labels.contains(l))
                    .expect("parent has at most c classes");
                let parent_labels: Vec<usize> = parent
                    .classes
                    .iter()
                    .map(|&cl| {
                        if cl == *a {
                            merged
                        } else if cl == *b {
                            free
                        } else {
                            label_of(cl)
                        }
                    })
                    .collect();
                self.emit(parent, &parent_labels, ops);
                ops.push(CwOp::Relabel {
                    from: free,
                    to: merged,
                });
            }
            Origin::Union { left, right } => {
                let inherit = |side: &State| -> Vec<usize> {
                    side.classes
                        .iter()
                        .map(|&cl| {
                            let k = st.classes.iter().position(|&c| c & cl == cl).unwrap();
                            labels[k]
                        })
                        .collect()
                };
                self.emit(left, &inherit(left), ops);
                self.emit(right, &inherit(right), ops);
                ops.push(CwOp::Union);
                for i in 0..st.classes.len() {
                    for j in i + 1..st.classes.len() {
                        let (a, b) = (st.classes[i], st.classes[j]);
                        let crosses = (a & left.set != 0 && b & right.set != 0)
                            || (a & right.set != 0 && b & left.set != 0);
                        if crosses && self.fully_adjacent(a, b) {
                            ops.push(CwOp::Join {
                                a: labels[i],
                                b: labels[j],
                            });
                        }
                    }
                }
            }
        }
    }
}

/// Decides `cw(G) ≤ c` exactly; a positive answer carries an expression with
/// labels `0..c`.
pub fn brute_cwd_at_most(g: &Graph, c: usize) -> Result<CwdDecision, OracleError> {
    let n = g.n();
    if n > CWD_VERTEX_LIMIT {
        return Err(OracleError::TooLarge {
            what: "clique-width oracle",
            n,
            limit: CWD_VERTEX_LIMIT,
        });
    }
    if c > CWD_LABEL_LIMIT {
        return Err(OracleError::TooManyLabels {
            c,
            limit: CWD_LABEL_LIMIT,
        });
    }
    let no = CwdDecision {
        n,
        width: c,
        answer: false,
        witness: None,
    };
    if n == 0 {
        return Ok(CwdDecision {
            answer: true,
            witness: Some(CwTerm::new(c)),
            ..no
        });
    }
    if c == 0 {
        return Ok(no);
    }
    let adj: Vec<u8> = (0..n)
        .map(|v| g.neighbours(v).iter().fold(0u8, |m, u| m | 1 << u))
        .collect();
    let mut search = Search {
        adj,
        all: if n == 8 { u8::MAX } else { (1u8 << n) - 1 },
        c,
        origin: HashMap::new(),
        by_set: HashMap::new(),
    };
    let Some(goal) = search.run(n) else {
        return Ok(no);
    };
    let labels: Vec<usize> = (0..goal.classes.len()).collect();
    let mut t = CwTerm::new(c);
    search.emit(&goal, &labels, &mut t.ops);
    log::trace!("cwd ≤ {c} for n={n}: {} states", search.origin.len());
    Ok(CwdDecision {
        answer: true,
        witness: Some(t),
        ..no
    })
}

/// Smallest `c ≤ max_c` with `cw(G) ≤ c`, with its witness.
pub fn min_cwd(g: &Graph, max_c: usize) -> Result<Option<CwdDecision>, OracleError> {
    for c in 0..=max_c {
        let d = brute_cwd_at_most(g, c)?;
        if d.answer {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cw::term::verify_term;

    fn width(g: &Graph) -> usize {
        let d = min_cwd(g, 4).unwrap().expect("width at most 4");
        let t = d.witness.as_ref().unwrap();
        assert!(verify_term(t, g).unwrap().is_ok(), "{t:?}");
        assert!(t.width() <= d.width);
        d.width
    }

    #[test]
    fn small_examples() {
        assert_eq!(width(&Graph::empty(0)), 0);
        assert_eq!(width(&Graph::empty(1)), 1);
        assert_eq!(width(&Graph::empty(3)), 1);
        assert_eq!(width(&Graph::complete(4)), 2);
        assert_eq!(width(&Graph::path(3)), 2);
        assert_eq!(width(&Graph::path(4)), 3);
        assert_eq!(width(&Graph::path(5)), 3);
        assert_eq!(width(&Graph::cycle(4)), 2);
    }

    #[test]
    fn limits() {
        assert!(matches!(
            brute_cwd_at_most(&Graph::empty(9), 2),
            Err(OracleError::TooLarge { .. })
        ));
        assert!(matches!(
            brute_cwd_at_most(&Graph::empty(2), 5),
            Err(OracleError::TooManyLabels { .. })
        ));
    }
}
