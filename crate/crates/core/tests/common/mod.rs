#![allow(dead_code)]

use cwf_core::{Graph, GraphBuilder, VertexPartition, VertexSet};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// Graph on `n` vertices whose edge `k` (pairs `u < v` in lexicographic
/// order) is present iff bit `k` of `mask` is set.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut b = GraphBuilder::new(n);
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> k & 1 == 1 {
                b.add_edge(u, v);
            }
            k += 1;
        }
    }
    b.build()
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut b = GraphBuilder::new(n);
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    for ((u, v), &on) in pairs.zip(bits) {
        if on {
            b.add_edge(u, v);
        }
    }
    b.build()
}

pub fn arb_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), pair_count(n))
            .prop_map(move |bits| graph_from_bits(n, &bits))
    })
}

/// Random partition of `V(g)` into cliques: vertices in shuffled order join a
/// random existing part they are complete to, or open a new one.
pub fn random_clique_partition<R: Rng>(g: &Graph, rng: &mut R) -> VertexPartition {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(rng);
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for v in order {
        let fits: Vec<usize> = (0..parts.len())
            .filter(|&i| parts[i].iter().all(|&u| g.adjacent(u, v)))
            .collect();
        if fits.is_empty() || rng.gen_bool(0.3) {
            parts.push(vec![v]);
        } else {
            parts[fits[rng.gen_range(0..fits.len())]].push(v);
        }
    }
    let named = parts
        .into_iter()
        .enumerate()
        .map(|(i, vs)| (format!("A{i}"), vs))
        .collect();
    VertexPartition::new(g, named).expect("valid partition")
}

/// No `x, x' ∈ X`, `y, y' ∈ Y` with `x~y`, `x'~y'`, `x≁y'`, `x'≁y`.
pub fn no_crossing(g: &Graph, x: &[usize], y: &[usize]) -> bool {
    for &a in x {
        for &b in x {
            for &c in y {
                for &d in y {
                    if g.adjacent(a, c)
                        && g.adjacent(b, d)
                        && !g.adjacent(a, d)
                        && !g.adjacent(b, c)
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Neighbourhoods of `x` in `y` are pairwise comparable under inclusion.
pub fn nested(g: &Graph, x: &[usize], y: &[usize]) -> bool {
    let nbhd = |v: usize| -> Vec<bool> { y.iter().map(|&w| g.adjacent(v, w)).collect() };
    let subset = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(p, q)| !p || *q);
    x.iter().all(|&a| {
        x.iter().all(|&b| {
            let (na, nb) = (nbhd(a), nbhd(b));
            subset(&na, &nb) || subset(&nb, &na)
        })
    })
}

/// Every part is monotone to its complement, by the crossing definition.
pub fn monotone_partition_naive(g: &Graph, p: &VertexPartition) -> bool {
    p.parts().iter().all(|part| {
        let inside = part.vertices.to_vec();
        let outside = part.vertices.complement().to_vec();
        no_crossing(g, &inside, &outside)
    })
}

pub fn set(g: &Graph, vs: &[usize]) -> VertexSet {
    g.vertex_set(vs.iter().copied())
}
