//! Exact treewidth by dynamic programming over vertex subsets.
//!
//! `TW(S) = min_{v in S} max(TW(S \ {v}), |Q(S \ {v}, v)|)` where `Q(S, v)`
//! is the set of vertices outside `S ∪ {v}` reachable from `v` through `S`.
//! The treewidth of the graph is `TW(V)`. Runs in `O(2^n · n²)`.

use super::{full_mask, BitIter, Graph};
use crate::error::{Error, Result};

/// Largest graph the exact algorithm accepts.
pub const TREEWIDTH_LIMIT: usize = 16;

pub fn treewidth(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > TREEWIDTH_LIMIT {
        return Err(Error::TooLarge {
            what: "treewidth input",
            size: n,
            limit: TREEWIDTH_LIMIT,
        });
    }
    let adj = g.adjacency();
    let size = 1usize << n;
    let mut tw = vec![u8::MAX; size];
    tw[0] = 0;
    for s in 1..size as u64 {
        let mut best = u8::MAX;
        for v in BitIter(s) {
            let rest = s & !(1 << v);
            let prev = tw[rest as usize];
            if prev >= best {
                continue;
            }
            let q = q_size(adj, rest, v, n);
            best = best.min(prev.max(q));
        }
        tw[s as usize] = best;
    }
    Ok(tw[full_mask(n) as usize] as usize)
}

fn q_size(adj: &[u64], s: u64, v: usize, n: usize) -> u8 {
    let inside = s | (1 << v);
    let mut reach = 1u64 << v;
    let mut frontier = reach;
    while frontier != 0 {
        let mut next = 0;
        for u in BitIter(frontier) {
            next |= adj[u];
        }
        // only vertices of S extend the search
        let grow = next & s & !reach;
        reach |= grow;
        frontier = grow;
    }
    let mut boundary = 0;
    for u in BitIter(reach) {
        boundary |= adj[u];
    }
    (boundary & !inside & full_mask(n)).count_ones() as u8
}
