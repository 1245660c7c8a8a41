//! Graphs, local complementation, LC orbits, exact treewidth and hardware
//! topologies.

mod lc;
mod topology;
mod treewidth;

pub use lc::{
    apply_lc_sequence, enumerate_orbit, local_complement, sample_lc_sequences, LcSequence, Orbit,
};
pub use topology::{
    bundled_topologies, bundled_topology, connected_subsets, induced_subgraph, HardwareTopology,
    InducedSubgraph,
};
pub use treewidth::{treewidth, TREEWIDTH_LIMIT};

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Largest vertex count representable by the bitmask adjacency.
pub const MAX_VERTICES: usize = 64;

/// Simple undirected graph on vertices `0..n`.
///
/// Adjacency is stored as one bitmask per vertex, so equality and hashing are
/// by labeled edge set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if n > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "graph",
                size: n,
                limit: MAX_VERTICES,
            });
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    /// Build from an edge list. Duplicate edges (in either orientation) are
    /// merged; self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(i, j) in edges {
            if i == j || i >= n || j >= n {
                return Err(Error::InvalidEdge(i, j));
            }
            g.adj[i] |= 1 << j;
            g.adj[j] |= 1 << i;
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        Graph::from_edges(n, &edges).expect("valid cycle")
    }

    /// Star with vertex 0 at the center.
    pub fn star(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Graph::from_edges(n, &edges).expect("valid star")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Graph::from_edges(n, &edges).expect("valid complete graph")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.adj[i] >> j & 1 == 1
    }

    pub fn neighbor_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        BitIter(self.adj[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|m| m.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| BitIter(self.adj[i] >> i >> 1).map(move |d| (i, i + 1 + d)))
            .collect()
    }

    pub(crate) fn toggle_edge(&mut self, i: usize, j: usize) {
        self.adj[i] ^= 1 << j;
        self.adj[j] ^= 1 << i;
    }

    pub(crate) fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    pub fn is_connected(&self) -> bool {
        let all = full_mask(self.n);
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0;
            for v in BitIter(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen & all == all
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Serialized as `{"n": .., "edges": [[i, j], ..]}`.
#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr {
            n: self.n,
            edges: self.edges(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GraphRepr::deserialize(d)?;
        Graph::from_edges(r.n, &r.edges).map_err(serde::de::Error::custom)
    }
}

/// Largest vertex count accepted by [`Graph::canonical_form`].
pub const CANONICAL_LIMIT: usize = 9;

impl Graph {
    /// Copy with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Graph> {
        let mut seen = 0u64;
        for &p in perm {
            if p >= self.n || seen >> p & 1 == 1 || perm.len() != self.n {
                return Err(Error::InvalidConfig(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            seen |= 1 << p;
        }
        let mut adj = vec![0u64; self.n];
        for (v, &m) in self.adj.iter().enumerate() {
            adj[perm[v]] = BitIter(m).fold(0, |acc, u| acc | 1 << perm[u]);
        }
        Ok(Graph { n: self.n, adj })
    }

    /// Smallest relabeling over all vertex permutations; two graphs are
    /// isomorphic iff their canonical forms are equal.
    pub fn canonical_form(&self) -> Result<Graph> {
        if self.n > CANONICAL_LIMIT {
            return Err(Error::TooLarge {
                what: "canonical form",
                size: self.n,
                limit: CANONICAL_LIMIT,
            });
        }
        let mut perm: Vec<usize> = (0..self.n).collect();
        let mut best = self.clone();
        // Heap's algorithm.
        let mut c = vec![0usize; self.n];
        let mut i = 0;
        while i < self.n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                let g = self.relabeled(&perm)?;
                if g.adj < best.adj {
                    best = g;
                }
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        Ok(best)
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bit positions of a mask in ascending order.
#[derive(Clone, Copy)]
pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}
