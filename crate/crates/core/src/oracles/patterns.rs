//! Induced-pattern search by plain enumeration of vertex tuples.

use super::OracleError;
use crate::graph::Graph;
use crate::pattern::PatternId;

pub const NAIVE_PATTERN_LIMIT: usize = 12;

/// First tuple of distinct vertices, in lexicographic order, whose induced
/// adjacency equals the pattern's. Same contract as the fast detector.
pub fn naive_pattern_oracle(g: &Graph, p: PatternId) -> Result<Option<Vec<usize>>, OracleError> {
    let n = g.n();
    if n > NAIVE_PATTERN_LIMIT {
        return Err(OracleError::TooLarge {
            what: "naive pattern oracle",
            n,
            limit: NAIVE_PATTERN_LIMIT,
        });
    }
    let h = p.graph();
    let k = h.n();
    if k > n {
        return Ok(None);
    }
    let mut tuple = vec![0usize; k];
    Ok(next_tuple(g, &h, &mut tuple, 0).then_some(tuple))
}

fn next_tuple(g: &Graph, h: &Graph, tuple: &mut [usize], pos: usize) -> bool {
    if pos == tuple.len() {
        return (0..tuple.len()).all(|i| {
            (i + 1..tuple.len()).all(|j| g.adjacent(tuple[i], tuple[j]) == h.adjacent(i, j))
        });
    }
    for v in 0..g.n() {
        if tuple[..pos].contains(&v) {
            continue;
        }
        tuple[pos] = v;
        if next_tuple(g, h, tuple, pos + 1) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(
            naive_pattern_oracle(&Graph::cycle(6), PatternId::C4).unwrap(),
            None
        );
        assert_eq!(
            naive_pattern_oracle(&Graph::cycle(4), PatternId::C4).unwrap(),
            Some(vec![0, 1, 2, 3])
        );
        assert_eq!(
            naive_pattern_oracle(&Graph::path(6), PatternId::FourK1).unwrap(),
            None
        );
        assert!(naive_pattern_oracle(&Graph::cycle(7), PatternId::P6)
            .unwrap()
            .is_some());
        assert!(naive_pattern_oracle(&Graph::empty(13), PatternId::C4).is_err());
    }
}
