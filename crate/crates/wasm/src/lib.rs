//! Browser bindings. Every export takes plain numbers and strings and returns
//! a JSON document; the page in `www/` renders it.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use resbench::circuit::{build_graph_state_circuit, Method};
use resbench::graph::{
    bundled_topology, connected_subsets, enumerate_orbit, induced_subgraph, local_complement,
    treewidth, Graph,
};
use resbench::rng::derive_seed;
use resbench::runner::{
    median_heatmap, run_benchmark_on, scores, HeatCell, MethodScore, RunConfig, TopologySource,
    WitnessKind,
};
use resbench::sim::{expectation_from_counts, sample_shots, NoiseModel};
use resbench::witness::{generators, genuine_witness};
use resbench::{Error, Result};

/// Orbits larger than this are cut off in the explorer.
const ORBIT_LIMIT: usize = 20_000;
/// Only the first few orbit members are sent to the page.
const ORBIT_PREVIEW: usize = 60;

#[derive(Serialize)]
pub struct GraphView {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub treewidth: usize,
    pub generators: Vec<String>,
}

impl GraphView {
    fn of(g: &Graph) -> Result<Self> {
        Ok(GraphView {
            n: g.n(),
            edges: g.edges(),
            treewidth: treewidth(g)?,
            generators: generators(g).iter().map(|p| p.to_string()).collect(),
        })
    }
}

#[derive(Serialize)]
pub struct OrbitView {
    pub qubits: Vec<usize>,
    pub base: GraphView,
    pub size: usize,
    pub truncated: bool,
    /// `(treewidth, members)` pairs.
    pub treewidths: Vec<(usize, usize)>,
    pub classes: Option<usize>,
    pub preview: Vec<GraphView>,
}

pub fn explore_orbit(topology: &str, qubits: &[usize]) -> Result<OrbitView> {
    let topo = TopologySource::Named(topology.into()).resolve()?;
    let g = induced_subgraph(&topo, qubits)?.graph;
    let orbit = enumerate_orbit(&g, ORBIT_LIMIT)?;
    let mut tw = std::collections::BTreeMap::new();
    for h in &orbit.graphs {
        *tw.entry(treewidth(h)?).or_insert(0) += 1;
    }
    let classes = (!orbit.truncated && g.n() <= resbench::graph::CANONICAL_LIMIT)
        .then(|| orbit.isomorphism_classes().map(|c| c.len()))
        .transpose()?;
    Ok(OrbitView {
        qubits: qubits.to_vec(),
        base: GraphView::of(&g)?,
        size: orbit.len(),
        truncated: orbit.truncated,
        treewidths: tw.into_iter().collect(),
        classes,
        preview: orbit
            .graphs
            .iter()
            .take(ORBIT_PREVIEW)
            .map(GraphView::of)
            .collect::<Result<_>>()?,
    })
}

pub fn lc_step(n: usize, edges: &[(usize, usize)], v: usize) -> Result<GraphView> {
    GraphView::of(&local_complement(&Graph::from_edges(n, edges)?, v)?)
}

#[derive(Serialize)]
pub struct WitnessPoint {
    pub p: f64,
    pub analytic: f64,
    pub sampled: f64,
}

/// Genuine witness of the `n`-vertex path graph state under white noise.
pub fn witness_curve(n: usize, shots: usize, steps: usize, seed: u64) -> Result<Vec<WitnessPoint>> {
    if !(2..=12).contains(&n) || steps < 2 {
        return Err(Error::InvalidConfig(
            "need 2 <= n <= 12 and at least 2 steps".into(),
        ));
    }
    let g = Graph::path(n);
    let circ = build_graph_state_circuit(&g)?;
    let gens = generators(&g);
    (0..steps)
        .map(|k| {
            let p = k as f64 / (steps - 1) as f64;
            let noise = NoiseModel::ideal(n).with_white_noise(p);
            let e = gens
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    let counts = sample_shots(
                        &circ.for_stabilizer(s)?,
                        &noise,
                        shots,
                        derive_seed(seed, &[k as u64, j as u64]),
                    )?;
                    expectation_from_counts(&counts, &s.support())
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(WitnessPoint {
                p,
                analytic: n as f64 * p - 1.0,
                sampled: genuine_witness(&e, n)?,
            })
        })
        .collect()
}

#[derive(Serialize)]
pub struct MethodView {
    pub method: Method,
    pub score: Option<MethodScore>,
    pub cells: Vec<HeatCell>,
}

#[derive(Serialize)]
pub struct BenchmarkView {
    pub subsets: Vec<Vec<usize>>,
    pub records: usize,
    pub methods: Vec<MethodView>,
}

/// One connected subset per size `2..=max_n`, uniform CNOT and readout
/// errors, both construction methods.
pub fn mini_benchmark(
    topology: &str,
    max_n: usize,
    cnot_err: f64,
    readout_err: f64,
    sequences: usize,
    shots: usize,
    seed: u64,
) -> Result<BenchmarkView> {
    let base = bundled_topology(topology)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown topology `{topology}`")))?;
    let topo = base.with_uniform_errors((readout_err, readout_err), cnot_err, 0.0);
    let subsets = (2..=max_n.min(topo.n_qubits))
        .map(|k| connected_subsets(&topo, k).map(|mut s| s.swap_remove(0)))
        .collect::<Result<Vec<_>>>()?;
    let mut cfg = RunConfig::new(TopologySource::Inline(topo.clone()), subsets.clone());
    cfg.shots = shots;
    cfg.seed = seed;
    cfg.sequences_per_graph = Some(sequences);
    let rs = run_benchmark_on(&cfg, &topo)?;
    let s = scores(&rs, false);
    let methods = [(Method::Naive, s.naive), (Method::Unitary, s.unitary)]
        .into_iter()
        .map(|(m, score)| MethodView {
            method: m,
            score,
            cells: median_heatmap(&rs, m, WitnessKind::Genuine, false).cells,
        })
        .collect();
    Ok(BenchmarkView {
        subsets,
        records: rs.records.len(),
        methods,
    })
}

fn to_js<T: Serialize>(r: Result<T>) -> std::result::Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad qubit `{t}`")))
        })
        .collect()
}

/// `qubits` is a comma-separated list of hardware qubits.
#[wasm_bindgen(js_name = exploreOrbit)]
pub fn explore_orbit_js(topology: &str, qubits: &str) -> std::result::Result<String, JsError> {
    to_js(parse_list(qubits).and_then(|q| explore_orbit(topology, &q)))
}

/// `edges` is a JSON array of `[a, b]` pairs.
#[wasm_bindgen(js_name = lcStep)]
pub fn lc_step_js(n: usize, edges: &str, v: usize) -> std::result::Result<String, JsError> {
    let edges: Vec<(usize, usize)> =
        serde_json::from_str(edges).map_err(|e| JsError::new(&e.to_string()))?;
    to_js(lc_step(n, &edges, v))
}

#[wasm_bindgen(js_name = witnessCurve)]
pub fn witness_curve_js(
    n: usize,
    shots: usize,
    steps: usize,
    seed: u32,
) -> std::result::Result<String, JsError> {
    to_js(witness_curve(n, shots, steps, seed as u64))
}

#[wasm_bindgen(js_name = miniBenchmark)]
pub fn mini_benchmark_js(
    topology: &str,
    max_n: usize,
    cnot_err: f64,
    readout_err: f64,
    sequences: usize,
    shots: usize,
    seed: u32,
) -> std::result::Result<String, JsError> {
    to_js(mini_benchmark(
        topology,
        max_n,
        cnot_err,
        readout_err,
        sequences,
        shots,
        seed as u64,
    ))
}
