#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use resbench::circuit::{Circuit, Gate, Quarter};
use resbench::graph::Graph;

/// Connected graph on `n` vertices from an edge bitmask over all pairs, or
/// `None` when disconnected.
pub fn graph_from_mask(n: usize, mask: u64) -> Option<Graph> {
    let mut edges = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> k & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    let g = Graph::from_edges(n, &edges).ok()?;
    g.is_connected().then_some(g)
}

pub fn connected_graph(min: usize, max: usize) -> impl Strategy<Value = Graph> {
    (min..=max, any::<u64>()).prop_filter_map("connected", |(n, m)| graph_from_mask(n, m))
}

/// Every connected labeled graph on `n` vertices.
pub fn all_connected(n: usize) -> Vec<Graph> {
    let pairs = n * (n - 1) / 2;
    (0..1u64 << pairs)
        .filter_map(|m| graph_from_mask(n, m))
        .collect()
}

pub fn random_gate<R: Rng>(rng: &mut R, n: usize) -> Gate {
    let q = rng.random_range(0..n);
    let quarter = if rng.random() {
        Quarter::Plus
    } else {
        Quarter::Minus
    };
    match rng.random_range(0..8) {
        0 => Gate::H(q),
        1 => Gate::S(q),
        2 => Gate::Sdg(q),
        3 => Gate::Rx(q, quarter),
        4 => Gate::Rz(q, quarter),
        k if n > 1 => {
            let mut t = rng.random_range(0..n - 1);
            if t >= q {
                t += 1;
            }
            if k == 7 {
                Gate::Swap(q, t)
            } else {
                Gate::Cnot(q, t)
            }
        }
        _ => Gate::H(q),
    }
}

pub fn random_circuit<R: Rng>(rng: &mut R, n: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..len {
        c.push(random_gate(rng, n)).unwrap();
    }
    c.measure_all();
    c
}

/// Minimum over all vertex elimination orderings of the largest neighbourhood
/// met while eliminating.
pub fn brute_force_treewidth(g: &Graph) -> usize {
    fn go(adj: &mut Vec<u64>, alive: u64, width: usize, best: &mut usize) {
        if width >= *best {
            return;
        }
        if alive == 0 {
            *best = width;
            return;
        }
        for v in 0..adj.len() {
            if alive >> v & 1 == 0 {
                continue;
            }
            let nb = adj[v] & alive & !(1 << v);
            let saved = adj.clone();
            for (u, a) in adj.iter_mut().enumerate() {
                if nb >> u & 1 == 1 {
                    *a |= nb & !(1 << u);
                }
            }
            go(
                adj,
                alive & !(1 << v),
                width.max(nb.count_ones() as usize),
                best,
            );
            *adj = saved;
        }
    }
    let n = g.n();
    let mut adj: Vec<u64> = (0..n).map(|v| g.neighbor_mask(v)).collect();
    let mut best = n;
    go(&mut adj, (1u64 << n) - 1, 0, &mut best);
    best.min(n.saturating_sub(1))
}
