use super::{route_cnots, Circuit, Gate, Method, Quarter};
use crate::error::{Error, Result};
use crate::graph::{apply_lc_sequence, induced_subgraph, Graph, HardwareTopology, LcSequence};

/// Local Clifford block realizing LC at `a` on the state of `g`:
/// `e^{-iπ/4 X_a}` followed by `e^{+iπ/4 Z_b}` on every neighbour `b`,
/// fenced by barriers.
pub fn lc_block(g: &Graph, a: usize) -> Result<Vec<Gate>> {
    if a >= g.n() {
        return Err(Error::VertexOutOfRange {
            vertex: a,
            n: g.n(),
        });
    }
    let mut gates = vec![Gate::Barrier, Gate::Rx(a, Quarter::Minus)];
    gates.extend(g.neighbors(a).map(|b| Gate::Rz(b, Quarter::Plus)));
    gates.push(Gate::Barrier);
    Ok(gates)
}

fn preparation(g: &Graph) -> Result<Circuit> {
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let n = g.n();
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(Gate::H(q))?;
    }
    c.push(Gate::Barrier)?;
    for (i, j) in g.edges() {
        c.push(Gate::H(j))?;
        c.push(Gate::Cnot(i, j))?;
        c.push(Gate::H(j))?;
    }
    c.meta.source_graph = Some(g.clone());
    c.meta.target_graph = Some(g.clone());
    Ok(c)
}

/// `|+⟩^⊗n` followed by `H·CNOT·H` on the target of every edge, in sorted
/// edge order, then a measurement of every qubit.
pub fn build_graph_state_circuit(g: &Graph) -> Result<Circuit> {
    let mut c = preparation(g)?;
    c.measure_all();
    Ok(c)
}

/// Prepares the LC-transformed graph directly from its own edges and routes
/// the resulting CNOTs on the device.
pub fn build_naive_circuit(
    topo: &HardwareTopology,
    qubits: &[usize],
    seq: &LcSequence,
) -> Result<Circuit> {
    let sub = induced_subgraph(topo, qubits)?;
    let target = apply_lc_sequence(&sub.graph, seq)?;
    let mut c = route_cnots(topo, &build_graph_state_circuit(&target)?, qubits)?;
    c.meta.method = Some(Method::Naive);
    c.meta.source_graph = Some(sub.graph);
    c.meta.target_graph = Some(target);
    c.meta.lc_seq = seq.clone();
    Ok(c)
}

/// Prepares the base graph and appends one local Clifford block per LC step.
/// The CNOT count never depends on `seq`.
pub fn build_unitary_circuit(
    topo: &HardwareTopology,
    qubits: &[usize],
    seq: &LcSequence,
) -> Result<Circuit> {
    let sub = induced_subgraph(topo, qubits)?;
    let mut logical = preparation(&sub.graph)?;
    let history = seq.graph_history(&sub.graph)?;
    for (&a, g) in seq.iter().zip(&history) {
        for gate in lc_block(g, a)? {
            logical.push(gate)?;
        }
    }
    logical.measure_all();
    let mut c = route_cnots(topo, &logical, qubits)?;
    c.meta.method = Some(Method::Unitary);
    c.meta.source_graph = Some(sub.graph);
    c.meta.target_graph = history.last().cloned();
    c.meta.lc_seq = seq.clone();
    Ok(c)
}
