use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::results::{Record, ResultSet};
use crate::circuit::Method;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::witness::{biseparable_witness, genuine_witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Genuine,
    Biseparable,
}

/// Witness values of one prepared graph state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphWitness {
    pub subset_index: usize,
    pub method: Method,
    pub seq_index: usize,
    pub n: usize,
    pub treewidth: usize,
    pub genuine: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genuine_mitigated: Option<f64>,
    /// One value per edge of the prepared graph, in edge order.
    pub biseparable: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub biseparable_mitigated: Option<Vec<f64>>,
}

impl GraphWitness {
    fn values(&self, kind: WitnessKind, mitigated: bool) -> Vec<f64> {
        match (kind, mitigated) {
            (WitnessKind::Genuine, false) => vec![self.genuine],
            (WitnessKind::Genuine, true) => self.genuine_mitigated.into_iter().collect(),
            (WitnessKind::Biseparable, false) => self.biseparable.clone(),
            (WitnessKind::Biseparable, true) => {
                self.biseparable_mitigated.clone().unwrap_or_default()
            }
        }
    }
}

fn witnesses_of(edges: &[(usize, usize)], n: usize, e: &[f64]) -> Result<(f64, Vec<f64>)> {
    let g = Graph::from_edges(n, edges)?;
    let genuine = genuine_witness(e, n)?;
    let bisep = edges
        .iter()
        .map(|&(i, j)| biseparable_witness(&g, i, j, e[i], e[j]))
        .collect::<Result<Vec<_>>>()?;
    Ok((genuine, bisep))
}

/// Witnesses for every graph whose generator records all succeeded. The
/// identity record never enters a witness.
pub fn graph_witnesses(records: &[Record]) -> Vec<GraphWitness> {
    let mut groups: BTreeMap<(usize, Method, usize), Vec<&Record>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.subset_index, r.method, r.seq_index))
            .or_default()
            .push(r);
    }
    let mut out = Vec::new();
    for ((subset_index, method, seq_index), rs) in groups {
        let first = rs[0];
        let n = first.width;
        let mut raw = vec![None; n];
        let mut mit = vec![None; n];
        for r in rs.iter().filter(|r| !r.is_identity() && r.is_ok()) {
            if r.stabilizer_index < n {
                raw[r.stabilizer_index] = r.raw;
                mit[r.stabilizer_index] = r.mitigated;
            }
        }
        let Some(raw) = raw.into_iter().collect::<Option<Vec<f64>>>() else {
            continue;
        };
        let Ok((genuine, biseparable)) = witnesses_of(&first.graph_edges, n, &raw) else {
            continue;
        };
        let mitigated = mit
            .into_iter()
            .collect::<Option<Vec<f64>>>()
            .and_then(|m| witnesses_of(&first.graph_edges, n, &m).ok());
        out.push(GraphWitness {
            subset_index,
            method,
            seq_index,
            n,
            treewidth: first.treewidth,
            genuine,
            genuine_mitigated: mitigated.as_ref().map(|m| m.0),
            biseparable,
            biseparable_mitigated: mitigated.map(|m| m.1),
        });
    }
    out
}

/// Median of a nonempty slice; the mean of the two middle values for even
/// lengths.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Ok(if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatCell {
    pub n: usize,
    pub treewidth: usize,
    pub median: f64,
    pub count: usize,
}

/// Median witness per (width, treewidth) cell; absent cells are omitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Heatmap {
    pub method: Method,
    pub witness: WitnessKind,
    pub mitigated: bool,
    /// Sorted by `(n, treewidth)`.
    pub cells: Vec<HeatCell>,
}

impl Heatmap {
    pub fn get(&self, n: usize, treewidth: usize) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| c.n == n && c.treewidth == treewidth)
            .map(|c| c.median)
    }

    fn negative(&self) -> impl Iterator<Item = &HeatCell> {
        self.cells.iter().filter(|c| c.median < 0.0)
    }
}

pub fn heatmap_from_witnesses(
    witnesses: &[GraphWitness],
    method: Method,
    witness: WitnessKind,
    mitigated: bool,
) -> Heatmap {
    let mut cells: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for w in witnesses.iter().filter(|w| w.method == method) {
        let vals = w.values(witness, mitigated);
        if !vals.is_empty() {
            cells.entry((w.n, w.treewidth)).or_default().extend(vals);
        }
    }
    Heatmap {
        method,
        witness,
        mitigated,
        cells: cells
            .into_iter()
            .map(|((n, treewidth), v)| HeatCell {
                n,
                treewidth,
                median: median(&v).expect("cells are nonempty"),
                count: v.len(),
            })
            .collect(),
    }
}

pub fn median_heatmap(
    rs: &ResultSet,
    method: Method,
    witness: WitnessKind,
    mitigated: bool,
) -> Heatmap {
    heatmap_from_witnesses(&graph_witnesses(&rs.records), method, witness, mitigated)
}

/// Largest `n · treewidth` over cells with a negative median; 0 if none.
pub fn res_score(h: &Heatmap) -> usize {
    h.negative().map(|c| c.n * c.treewidth).max().unwrap_or(0)
}

/// Widest and densest negative cells, taken independently.
pub fn max_n_and_tw(h: &Heatmap) -> (usize, usize) {
    (
        h.negative().map(|c| c.n).max().unwrap_or(0),
        h.negative().map(|c| c.treewidth).max().unwrap_or(0),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodScore {
    pub res: usize,
    pub max_n: usize,
    pub max_tw: usize,
}

impl MethodScore {
    pub fn of(h: &Heatmap) -> Self {
        let (max_n, max_tw) = max_n_and_tw(h);
        MethodScore {
            res: res_score(h),
            max_n,
            max_tw,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scores {
    pub mitigated: bool,
    pub naive: Option<MethodScore>,
    pub unitary: Option<MethodScore>,
}

pub fn scores_from_witnesses(witnesses: &[GraphWitness], mitigated: bool) -> Scores {
    let score = |m: Method| {
        witnesses.iter().any(|w| w.method == m).then(|| {
            MethodScore::of(&heatmap_from_witnesses(
                witnesses,
                m,
                WitnessKind::Genuine,
                mitigated,
            ))
        })
    };
    Scores {
        mitigated,
        naive: score(Method::Naive),
        unitary: score(Method::Unitary),
    }
}

pub fn scores(rs: &ResultSet, mitigated: bool) -> Scores {
    scores_from_witnesses(&graph_witnesses(&rs.records), mitigated)
}

/// Tables computed from the records, stored next to the result set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Derived {
    pub schema: u32,
    pub witnesses: Vec<GraphWitness>,
    pub heatmaps: Vec<Heatmap>,
    pub scores: Scores,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mitigated_scores: Option<Scores>,
}

impl Derived {
    pub fn from_records(records: &[Record]) -> Self {
        let witnesses = graph_witnesses(records);
        let has_mitigated = witnesses.iter().any(|w| w.genuine_mitigated.is_some());
        let mut methods: Vec<Method> = witnesses.iter().map(|w| w.method).collect();
        methods.sort();
        methods.dedup();
        let mut heatmaps = Vec::new();
        for &m in &methods {
            for kind in [WitnessKind::Genuine, WitnessKind::Biseparable] {
                heatmaps.push(heatmap_from_witnesses(&witnesses, m, kind, false));
                if has_mitigated {
                    heatmaps.push(heatmap_from_witnesses(&witnesses, m, kind, true));
                }
            }
        }
        Derived {
            schema: super::results::SCHEMA_VERSION,
            scores: scores_from_witnesses(&witnesses, false),
            mitigated_scores: has_mitigated.then(|| scores_from_witnesses(&witnesses, true)),
            witnesses,
            heatmaps,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("derived tables serialize")
    }
}

/// Scores published for physical devices, kept as a parse-only fixture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportedScore {
    pub backend: String,
    pub qubits: usize,
    pub quantum_volume: usize,
    pub res_naive: usize,
    pub res_unitary: usize,
    pub res_naive_mitigated: usize,
    pub res_unitary_mitigated: usize,
}

pub fn reported_scores() -> Vec<ReportedScore> {
    serde_json::from_str(include_str!("../../fixtures/reported_scores.json"))
        .expect("fixture parses")
}
