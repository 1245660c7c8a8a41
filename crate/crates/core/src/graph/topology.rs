use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

/// Device connectivity plus per-qubit and per-coupler error rates.
#[derive(Clone, Debug, PartialEq)]
pub struct HardwareTopology {
    pub name: String,
    pub n_qubits: usize,
    /// Couplers as `(min, max)` pairs, sorted.
    pub couplers: Vec<(usize, usize)>,
    /// Per qubit `(ε₀, ε₁)`: `P(read 1 | prepared 0)`, `P(read 0 | prepared 1)`.
    pub readout_err: Vec<(f64, f64)>,
    /// Two-qubit depolarizing probability per coupler. Missing couplers are
    /// noiseless.
    pub cnot_err: BTreeMap<(usize, usize), f64>,
    /// Single-qubit depolarizing probability per qubit.
    pub sq_err: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TopologyFile {
    name: String,
    n_qubits: usize,
    couplers: Vec<[usize; 2]>,
    readout_err: Vec<[f64; 2]>,
    #[serde(default)]
    cnot_err: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sq_err: Option<Vec<f64>>,
}

fn ordered(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

fn check_prob(p: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidTopology(format!(
            "{what} = {p} is not a probability"
        )))
    }
}

impl HardwareTopology {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: TopologyFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidTopology(e.to_string()))?;
        Self::from_file_repr(raw)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file_repr()).expect("topology serializes")
    }

    fn to_file_repr(&self) -> TopologyFile {
        TopologyFile {
            name: self.name.clone(),
            n_qubits: self.n_qubits,
            couplers: self.couplers.iter().map(|&(a, b)| [a, b]).collect(),
            readout_err: self.readout_err.iter().map(|&(a, b)| [a, b]).collect(),
            cnot_err: self
                .cnot_err
                .iter()
                .map(|(&(a, b), &p)| (a, b, p))
                .collect(),
            sq_err: if self.sq_err.iter().all(|&p| p == 0.0) {
                None
            } else {
                Some(self.sq_err.clone())
            },
        }
    }

    fn from_file_repr(raw: TopologyFile) -> Result<Self> {
        let n = raw.n_qubits;
        if n == 0 {
            return Err(Error::InvalidTopology("n_qubits must be positive".into()));
        }
        let mut couplers = Vec::with_capacity(raw.couplers.len());
        for [a, b] in raw.couplers {
            if a == b || a >= n || b >= n {
                return Err(Error::InvalidTopology(format!("bad coupler [{a}, {b}]")));
            }
            couplers.push(ordered(a, b));
        }
        couplers.sort_unstable();
        couplers.dedup();
        if raw.readout_err.len() != n {
            return Err(Error::InvalidTopology(format!(
                "readout_err has {} entries, expected {n}",
                raw.readout_err.len()
            )));
        }
        let mut readout_err = Vec::with_capacity(n);
        for (q, [e0, e1]) in raw.readout_err.into_iter().enumerate() {
            check_prob(e0, &format!("readout_err[{q}][0]"))?;
            check_prob(e1, &format!("readout_err[{q}][1]"))?;
            readout_err.push((e0, e1));
        }
        let mut cnot_err = BTreeMap::new();
        for (a, b, p) in raw.cnot_err {
            let key = ordered(a, b);
            if couplers.binary_search(&key).is_err() {
                return Err(Error::InvalidTopology(format!(
                    "cnot_err given for [{a}, {b}] which is not a coupler"
                )));
            }
            check_prob(p, &format!("cnot_err[{a}, {b}]"))?;
            cnot_err.insert(key, p);
        }
        let sq_err = raw.sq_err.unwrap_or_else(|| vec![0.0; n]);
        if sq_err.len() != n {
            return Err(Error::InvalidTopology(format!(
                "sq_err has {} entries, expected {n}",
                sq_err.len()
            )));
        }
        for (q, &p) in sq_err.iter().enumerate() {
            check_prob(p, &format!("sq_err[{q}]"))?;
        }
        let topo = HardwareTopology {
            name: raw.name,
            n_qubits: n,
            couplers,
            readout_err,
            cnot_err,
            sq_err,
        };
        topo.check_connected()?;
        Ok(topo)
    }

    fn check_connected(&self) -> Result<()> {
        let named: Vec<usize> = {
            let mut v: Vec<usize> = self.couplers.iter().flat_map(|&(a, b)| [a, b]).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        if named.len() <= 1 {
            return Ok(());
        }
        let mut seen = vec![false; self.n_qubits];
        let mut stack = vec![named[0]];
        seen[named[0]] = true;
        while let Some(q) = stack.pop() {
            for r in self.neighbors(q) {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        match named.iter().find(|&&q| !seen[q]) {
            Some(q) => Err(Error::InvalidTopology(format!(
                "coupler graph is disconnected (qubit {q} unreachable)"
            ))),
            None => Ok(()),
        }
    }

    pub fn is_coupled(&self, a: usize, b: usize) -> bool {
        self.couplers.binary_search(&ordered(a, b)).is_ok()
    }

    /// Hardware neighbors of `q` in ascending order.
    pub fn neighbors(&self, q: usize) -> impl Iterator<Item = usize> + '_ {
        let mut v: Vec<usize> = self
            .couplers
            .iter()
            .filter_map(move |&(a, b)| match (a == q, b == q) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect();
        v.sort_unstable();
        v.into_iter()
    }

    pub fn cnot_error(&self, a: usize, b: usize) -> f64 {
        self.cnot_err.get(&ordered(a, b)).copied().unwrap_or(0.0)
    }

    /// Same layout with every error rate set to zero.
    pub fn noiseless(&self) -> Self {
        self.with_uniform_errors((0.0, 0.0), 0.0, 0.0)
    }

    /// Same layout with uniform readout, CNOT and single-qubit error rates.
    pub fn with_uniform_errors(&self, readout: (f64, f64), cnot: f64, sq: f64) -> Self {
        HardwareTopology {
            name: self.name.clone(),
            n_qubits: self.n_qubits,
            couplers: self.couplers.clone(),
            readout_err: vec![readout; self.n_qubits],
            cnot_err: self.couplers.iter().map(|&c| (c, cnot)).collect(),
            sq_err: vec![sq; self.n_qubits],
        }
    }

    /// Multiply every CNOT error by `factor`, saturating at 1.
    pub fn scale_cnot_errors(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for p in out.cnot_err.values_mut() {
            *p = (*p * factor).clamp(0.0, 1.0);
        }
        out
    }
}

impl Serialize for HardwareTopology {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HardwareTopology {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Self::from_file_repr(TopologyFile::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// An induced subgraph together with its local → hardware qubit map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `qubits[i]` is the hardware qubit behind local vertex `i`.
    pub qubits: Vec<usize>,
}

/// Restrict `topo` to `qubits`, relabeling them `0..n` in the given order.
pub fn induced_subgraph(topo: &HardwareTopology, qubits: &[usize]) -> Result<InducedSubgraph> {
    for (i, &q) in qubits.iter().enumerate() {
        if q >= topo.n_qubits {
            return Err(Error::VertexOutOfRange {
                vertex: q,
                n: topo.n_qubits,
            });
        }
        if qubits[..i].contains(&q) {
            return Err(Error::InvalidConfig(format!("qubit {q} listed twice")));
        }
    }
    let n = qubits.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if topo.is_coupled(qubits[i], qubits[j]) {
                edges.push((i, j));
            }
        }
    }
    let graph = Graph::from_edges(n, &edges)?;
    if !graph.is_connected() {
        return Err(Error::DisconnectedSubgraph(qubits.to_vec()));
    }
    Ok(InducedSubgraph {
        graph,
        qubits: qubits.to_vec(),
    })
}

/// Every set of `size` hardware qubits whose induced subgraph is connected,
/// each sorted ascending, in lexicographic order.
pub fn connected_subsets(topo: &HardwareTopology, size: usize) -> Result<Vec<Vec<usize>>> {
    if size == 0 || size > topo.n_qubits {
        return Err(Error::InvalidConfig(format!(
            "subset size {size} outside 1..={}",
            topo.n_qubits
        )));
    }
    let n = topo.n_qubits;
    let nbr: Vec<u128> = (0..n)
        .map(|q| topo.neighbors(q).fold(0u128, |m, r| m | 1 << r))
        .collect();
    let mut level: BTreeSet<u128> = (0..n).map(|q| 1u128 << q).collect();
    for _ in 1..size {
        let mut next = BTreeSet::new();
        for &set in &level {
            let frontier = (0..n)
                .filter(|&q| set >> q & 1 == 1)
                .fold(0u128, |m, q| m | nbr[q])
                & !set;
            for q in (0..n).filter(|&q| frontier >> q & 1 == 1) {
                next.insert(set | 1 << q);
            }
        }
        level = next;
    }
    let mut out: Vec<Vec<usize>> = level
        .into_iter()
        .map(|set| (0..n).filter(|&q| set >> q & 1 == 1).collect())
        .collect();
    out.sort();
    Ok(out)
}

const BUNDLED: [(&str, &str); 4] = [
    ("belem5", include_str!("../../fixtures/belem5.json")),
    ("jakarta7", include_str!("../../fixtures/jakarta7.json")),
    (
        "guadalupe16",
        include_str!("../../fixtures/guadalupe16.json"),
    ),
    ("toronto27", include_str!("../../fixtures/toronto27.json")),
];

/// The four bundled device layouts (5-, 7-, 16- and 27-qubit).
pub fn bundled_topologies() -> Vec<HardwareTopology> {
    BUNDLED
        .iter()
        .map(|(_, text)| HardwareTopology::from_json(text).expect("bundled topology is valid"))
        .collect()
}

pub fn bundled_topology(name: &str) -> Option<HardwareTopology> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| HardwareTopology::from_json(text).expect("bundled topology is valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> HardwareTopology {
        HardwareTopology::from_json(
            r#"{"name":"p3","n_qubits":3,"couplers":[[0,1],[1,2]],
               "readout_err":[[0,0],[0,0],[0,0]],"cnot_err":[[0,1,0.01],[2,1,0.02]]}"#,
        )
        .unwrap()
    }

    #[test]
    fn parse_and_lookup() {
        let t = path3();
        assert!(t.is_coupled(1, 0));
        assert!(!t.is_coupled(0, 2));
        assert_eq!(t.cnot_error(1, 2), 0.02);
        assert_eq!(t.neighbors(1).collect::<Vec<_>>(), vec![0, 2]);
        let again = HardwareTopology::from_json(&t.to_json()).unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn validation_errors() {
        let bad = [
            r#"{"name":"x","n_qubits":3,"couplers":[[0,1]],"readout_err":[[0,0],[0,0],[0,0]],"cnot_err":[[1,2,0.1]]}"#,
            r#"{"name":"x","n_qubits":2,"couplers":[[0,1]],"readout_err":[[0,0]],"cnot_err":[]}"#,
            r#"{"name":"x","n_qubits":2,"couplers":[[0,1]],"readout_err":[[0,1.5],[0,0]],"cnot_err":[]}"#,
            r#"{"name":"x","n_qubits":4,"couplers":[[0,1],[2,3]],"readout_err":[[0,0],[0,0],[0,0],[0,0]]}"#,
            r#"{"name":"x","n_qubits":2,"couplers":[[0,0]],"readout_err":[[0,0],[0,0]]}"#,
        ];
        for text in bad {
            assert!(
                matches!(
                    HardwareTopology::from_json(text),
                    Err(Error::InvalidTopology(_))
                ),
                "{text}"
            );
        }
    }

    #[test]
    fn induced_examples() {
        let t = path3();
        let s = induced_subgraph(&t, &[0, 1]).unwrap();
        assert_eq!(s.graph, Graph::complete(2));
        assert!(matches!(
            induced_subgraph(&t, &[0, 2]),
            Err(Error::DisconnectedSubgraph(_))
        ));
        assert!(induced_subgraph(&t, &[0, 3]).is_err());
        assert!(induced_subgraph(&t, &[1, 1]).is_err());

        let tee = bundled_topology("belem5").unwrap();
        let s = induced_subgraph(&tee, &[1, 3, 4]).unwrap();
        // brute-force restriction of {0-1, 1-2, 1-3, 3-4} to {1, 3, 4}
        let expected: Vec<(usize, usize)> = [(0usize, 1usize), (1, 2), (1, 3), (3, 4)]
            .iter()
            .filter_map(|&(a, b)| {
                let la = [1, 3, 4].iter().position(|&q| q == a)?;
                let lb = [1, 3, 4].iter().position(|&q| q == b)?;
                Some((la.min(lb), la.max(lb)))
            })
            .collect();
        assert_eq!(s.graph.edges(), expected);
        assert_eq!(s.graph, Graph::path(3));
        assert_eq!(s.qubits, vec![1, 3, 4]);
    }

    #[test]
    fn bundled_layouts_load() {
        let all = bundled_topologies();
        let sizes: Vec<usize> = all.iter().map(|t| t.n_qubits).collect();
        assert_eq!(sizes, vec![5, 7, 16, 27]);
        let couplers: Vec<usize> = all.iter().map(|t| t.couplers.len()).collect();
        assert_eq!(couplers, vec![4, 6, 16, 28]);
    }

    #[test]
    fn scaling_and_uniform() {
        let t = path3().scale_cnot_errors(10.0);
        assert!((t.cnot_error(0, 1) - 0.1).abs() < 1e-15);
        let u = t.with_uniform_errors((0.1, 0.2), 0.3, 0.01);
        assert_eq!(u.readout_err, vec![(0.1, 0.2); 3]);
        assert_eq!(u.cnot_error(1, 2), 0.3);
        assert_eq!(t.noiseless().cnot_error(0, 1), 0.0);
    }

    #[test]
    fn connected_subset_enumeration() {
        let belem = bundled_topology("belem5").unwrap();
        assert_eq!(connected_subsets(&belem, 1).unwrap().len(), 5);
        assert_eq!(connected_subsets(&belem, 2).unwrap().len(), 4);
        assert_eq!(
            connected_subsets(&belem, 3).unwrap(),
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![1, 2, 3], vec![1, 3, 4]]
        );
        assert_eq!(
            connected_subsets(&belem, 5).unwrap(),
            vec![vec![0, 1, 2, 3, 4]]
        );
        assert!(connected_subsets(&belem, 6).is_err());
        for s in connected_subsets(&bundled_topology("jakarta7").unwrap(), 4).unwrap() {
            assert!(induced_subgraph(&bundled_topology("jakarta7").unwrap(), &s).is_ok());
        }
    }
}
