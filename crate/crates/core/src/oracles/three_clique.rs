//! Exhaustive search for monotone partitions into three cliques.

use super::OracleError;
use crate::graph::Graph;
use crate::partition::VertexPartition;

pub const THREE_CLIQUE_LIMIT: usize = 12;

/// A partition of `V(G)` into three (possibly empty) cliques, each monotone
/// to the union of the other two, if one exists.
pub fn monotone_3clique_partition_exists(
    g: &Graph,
) -> Result<Option<VertexPartition>, OracleError> {
    let n = g.n();
    if n > THREE_CLIQUE_LIMIT {
        return Err(OracleError::TooLarge {
            what: "three-clique partition search",
            n,
            limit: THREE_CLIQUE_LIMIT,
        });
    }
    let all: u16 = ((1u32 << n) - 1) as u16;
    let adj: Vec<u16> = (0..n)
        .map(|v| g.neighbours(v).iter().fold(0u16, |m, u| m | 1 << u))
        .collect();
    // good[m]: m is a clique and monotone to its complement.
    let good: Vec<bool> = (0..=all as usize)
        .map(|m| {
            let m = m as u16;
            let members: Vec<usize> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
            let clique = members.iter().all(|&v| (adj[v] | 1 << v) & m == m);
            let mut rows: Vec<u16> = members.iter().map(|&v| adj[v] & all & !m).collect();
            rows.sort_by_key(|r| r.count_ones());
            clique && rows.windows(2).all(|w| w[0] & w[1] == w[0])
        })
        .collect();
    let mut a = all;
    loop {
        if good[a as usize] {
            let rest = all & !a;
            let mut b = rest;
            loop {
                let c = rest & !b;
                if good[b as usize] && good[c as usize] {
                    let part = |m: u16| (0..n).filter(|&v| m >> v & 1 == 1).collect::<Vec<_>>();
                    let p = VertexPartition::new(
                        g,
                        vec![("A", part(a)), ("B", part(b)), ("C", part(c))],
                    )
                    .expect("three disjoint masks cover V");
                    return Ok(Some(p));
                }
                if b == 0 {
                    break;
                }
                b = (b - 1) & rest;
            }
        }
        if a == 0 {
            break;
        }
        a = (a - 1) & all;
    }
    Ok(None)
}
