use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{HashSet, VecDeque};
use std::ops::Deref;

use super::{BitIter, Graph};
use crate::error::{Error, Result};
use crate::rng;

/// Toggle every edge between distinct pairs of neighbors of `v`.
pub fn local_complement(g: &Graph, v: usize) -> Result<Graph> {
    g.check_vertex(v)?;
    let mut out = g.clone();
    let nbrs = g.neighbor_mask(v);
    for a in BitIter(nbrs) {
        // pairs (a, b) with b > a
        let higher = nbrs & !((1u64 << a) | ((1u64 << a) - 1));
        for b in BitIter(higher) {
            out.toggle_edge(a, b);
        }
    }
    Ok(out)
}

/// Fold [`local_complement`] over `ops`, left to right. Accepts raw
/// (unconsolidated) vertex lists as well as [`LcSequence`]s.
pub fn apply_lc_sequence(g: &Graph, ops: &[usize]) -> Result<Graph> {
    ops.iter()
        .try_fold(g.clone(), |acc, &v| local_complement(&acc, v))
}

/// Ordered list of LC vertices with consecutive duplicates consolidated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LcSequence(Vec<usize>);

impl LcSequence {
    pub fn identity() -> Self {
        LcSequence(Vec::new())
    }

    /// Consolidate a raw draw: runs like `[a, a]` collapse to `[a]`.
    pub fn from_raw(mut raw: Vec<usize>) -> Self {
        raw.dedup();
        LcSequence(raw)
    }

    pub fn ops(&self) -> &[usize] {
        &self.0
    }

    /// Graphs visited while applying the sequence: `history[0] == g` and
    /// `history[i + 1]` is the graph after the `i`-th LC.
    pub fn graph_history(&self, g: &Graph) -> Result<Vec<Graph>> {
        let mut out = Vec::with_capacity(self.0.len() + 1);
        out.push(g.clone());
        for &v in &self.0 {
            let next = local_complement(out.last().expect("nonempty"), v)?;
            out.push(next);
        }
        Ok(out)
    }
}

impl Deref for LcSequence {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// Draw `count` random LC sequences for an `n`-vertex graph.
///
/// Raw lengths are uniform on `1..=2n`, entries uniform on `0..n`, and
/// consecutive duplicates are consolidated after drawing. Sampling is with
/// replacement over raw sequences.
pub fn sample_lc_sequences(n: usize, count: usize, seed: u64) -> Vec<LcSequence> {
    let mut rng = rng::rng_from_seed(seed);
    (0..count)
        .map(|_| {
            let len = rng.random_range(1..=2 * n);
            let raw = (0..len).map(|_| rng.random_range(0..n)).collect();
            LcSequence::from_raw(raw)
        })
        .collect()
}

/// Result of a breadth-first LC closure.
#[derive(Clone, Debug)]
pub struct Orbit {
    /// Graphs in discovery order, starting with the seed graph.
    pub graphs: Vec<Graph>,
    /// Set when the closure stopped at the size limit.
    pub truncated: bool,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn contains(&self, g: &Graph) -> bool {
        self.graphs.contains(g)
    }

    /// Canonical forms of the orbit members, sorted and deduplicated.
    pub fn isomorphism_classes(&self) -> Result<Vec<Graph>> {
        let mut out = self
            .graphs
            .iter()
            .map(Graph::canonical_form)
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Labeled LC orbit of `g`, deduplicated by edge set, stopping at `limit`
/// graphs.
pub fn enumerate_orbit(g: &Graph, limit: usize) -> Result<Orbit> {
    if limit == 0 {
        return Err(Error::InvalidConfig(
            "orbit limit must be at least 1".into(),
        ));
    }
    let mut seen: HashSet<Graph> = HashSet::new();
    let mut graphs = vec![g.clone()];
    seen.insert(g.clone());
    let mut queue = VecDeque::from([g.clone()]);
    while let Some(cur) = queue.pop_front() {
        for v in 0..cur.n() {
            let next = local_complement(&cur, v)?;
            if seen.contains(&next) {
                continue;
            }
            if graphs.len() == limit {
                return Ok(Orbit {
                    graphs,
                    truncated: true,
                });
            }
            seen.insert(next.clone());
            graphs.push(next.clone());
            queue.push_back(next);
        }
    }
    Ok(Orbit {
        graphs,
        truncated: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: toggle pairs using the edge-list view only.
    fn lc_oracle(g: &Graph, v: usize) -> Vec<(usize, usize)> {
        let nbrs: Vec<usize> = (0..g.n()).filter(|&u| g.has_edge(u, v)).collect();
        let mut edges: HashSet<(usize, usize)> = g.edges().into_iter().collect();
        for (ia, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[ia + 1..] {
                let e = (a.min(b), a.max(b));
                if !edges.remove(&e) {
                    edges.insert(e);
                }
            }
        }
        let mut out: Vec<_> = edges.into_iter().collect();
        out.sort();
        out
    }

    #[test]
    fn path4_at_1_adds_0_2() {
        let g = local_complement(&Graph::path(4), 1).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (0, 2), (1, 2), (2, 3)]);
    }

    #[test]
    fn star_center_gives_complete_and_leaf_is_noop() {
        for n in 3..=6 {
            let s = Graph::star(n);
            assert_eq!(local_complement(&s, 0).unwrap(), Graph::complete(n));
            assert_eq!(local_complement(&s, 1).unwrap(), s);
        }
    }

    #[test]
    fn out_of_range_vertex() {
        assert!(matches!(
            local_complement(&Graph::path(3), 3),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        assert!(apply_lc_sequence(&Graph::path(3), &[0, 5]).is_err());
    }

    #[test]
    fn sequence_application() {
        let g = Graph::path(4);
        assert_eq!(apply_lc_sequence(&g, &[]).unwrap(), g);
        assert_eq!(apply_lc_sequence(&g, &[2, 2]).unwrap(), g);
        let step1 = Graph::from_edges(4, &lc_oracle(&g, 1)).unwrap();
        let step2 = lc_oracle(&step1, 2);
        assert_eq!(apply_lc_sequence(&g, &[1, 2]).unwrap().edges(), step2);
    }

    #[test]
    fn consolidation() {
        assert_eq!(LcSequence::from_raw(vec![2, 2, 0]).ops(), &[2, 0]);
        assert_eq!(LcSequence::from_raw(vec![1, 1, 1]).ops(), &[1]);
        assert_eq!(LcSequence::from_raw(vec![0, 1, 0]).ops(), &[0, 1, 0]);
    }

    #[test]
    fn sampled_sequences_respect_bounds() {
        let n = 3;
        let seqs = sample_lc_sequences(n, 1 << (n + 1), 11);
        assert_eq!(seqs.len(), 16);
        for s in &seqs {
            assert!(!s.is_empty() && s.len() <= 2 * n);
            assert!(s.iter().all(|&v| v < n));
            assert!(s.windows(2).all(|w| w[0] != w[1]));
        }
        assert_eq!(seqs, sample_lc_sequences(n, 16, 11));
        assert_ne!(seqs, sample_lc_sequences(n, 16, 12));
    }

    #[test]
    fn raw_lengths_cover_full_range() {
        // With a large draw every raw length in 1..=2n should appear; the
        // longest consolidated sequences must therefore reach 2n somewhere.
        let n = 3;
        let seqs = sample_lc_sequences(n, 4000, 5);
        let max = seqs.iter().map(|s| s.len()).max().unwrap();
        assert_eq!(max, 2 * n);
        assert!(seqs.iter().any(|s| s.len() == 1));
    }

    #[test]
    fn small_orbits() {
        let k2 = Graph::complete(2);
        let o = enumerate_orbit(&k2, 10).unwrap();
        assert_eq!(o.graphs, vec![k2]);
        assert!(!o.truncated);

        // Labeled: K4 plus a star centred on each vertex. Up to isomorphism:
        // star and complete graph.
        let o = enumerate_orbit(&Graph::star(4), 100).unwrap();
        assert_eq!(o.len(), 5);
        assert!(o.contains(&Graph::complete(4)));
        for c in 0..4 {
            let perm: Vec<usize> = (0..4)
                .map(|v| {
                    if v == 0 {
                        c
                    } else if v == c {
                        0
                    } else {
                        v
                    }
                })
                .collect();
            assert!(o.contains(&Graph::star(4).relabeled(&perm).unwrap()));
        }
        let mut want = vec![
            Graph::star(4).canonical_form().unwrap(),
            Graph::complete(4).canonical_form().unwrap(),
        ];
        want.sort();
        assert_eq!(o.isomorphism_classes().unwrap(), want);
    }

    #[test]
    fn orbit_truncation_signal() {
        let o = enumerate_orbit(&Graph::path(5), 3).unwrap();
        assert_eq!(o.len(), 3);
        assert!(o.truncated);
        assert!(enumerate_orbit(&Graph::path(3), 0).is_err());
    }

    #[test]
    fn path4_orbit_contains_figure_sequence() {
        let orbit = enumerate_orbit(&Graph::path(4), 1000).unwrap();
        assert!(!orbit.truncated);
        // brute force: every graph reachable by sequences of length <= 6
        let mut frontier = vec![Graph::path(4)];
        let mut reached: HashSet<Graph> = frontier.iter().cloned().collect();
        for _ in 0..6 {
            let mut next = Vec::new();
            for g in &frontier {
                for v in 0..4 {
                    let h = Graph::from_edges(4, &lc_oracle(g, v)).unwrap();
                    if reached.insert(h.clone()) {
                        next.push(h);
                    }
                }
            }
            frontier = next;
        }
        assert_eq!(reached.len(), orbit.len());
        for g in &reached {
            assert!(orbit.contains(g));
        }
        // the illustrated walk: LC at 1, then 2, then 0
        let walk = apply_lc_sequence(&Graph::path(4), &[1, 2, 0]).unwrap();
        assert!(orbit.contains(&walk));
    }
}
