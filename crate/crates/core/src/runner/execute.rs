use std::collections::BTreeMap;

use super::batch::plan_batches;
use super::config::{MitigatorSource, RunConfig, SimMode};
use super::results::{Record, ResultSet, RunMeta, SubsetSequences, SCHEMA_VERSION};
use crate::circuit::{build_naive_circuit, build_unitary_circuit, Circuit, Method};
use crate::error::{Error, Result};
use crate::graph::{
    induced_subgraph, sample_lc_sequences, treewidth, HardwareTopology, LcSequence,
};
use crate::mitigation::{calibrate, clamp_expectation, TensoredMitigator};
use crate::rng::derive_seed;
use crate::sim::{
    expectation_from_counts, sample_shots, NoiseModel, Pauli, PauliString, StabilizerState,
};
use crate::witness::{generators, stabilizer_set, transform_generators};

const TAG_SEQUENCES: u64 = 1;
const TAG_SHOTS: u64 = 2;
const TAG_CALIBRATION: u64 = 3;

fn method_tag(m: Method) -> u64 {
    match m {
        Method::Naive => 0,
        Method::Unitary => 1,
    }
}

/// All circuits of one prepared graph state.
struct Group {
    subset_index: usize,
    method: Method,
    seq_index: usize,
    seq: LcSequence,
    n: usize,
}

/// Seed of one stabilizer measurement, independent of batching.
pub fn record_seed(
    master: u64,
    subset_index: usize,
    method: Method,
    seq_index: usize,
    stabilizer: usize,
) -> u64 {
    derive_seed(
        master,
        &[
            TAG_SHOTS,
            subset_index as u64,
            method_tag(method),
            seq_index as u64,
            stabilizer as u64,
        ],
    )
}

/// Seconds since the epoch; 0 where the platform has no clock.
fn unix_now() -> u64 {
    #[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
    return 0;
    #[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Seed of the LC sequences drawn for one subset.
pub fn sequence_seed(master: u64, subset_index: usize) -> u64 {
    derive_seed(master, &[TAG_SEQUENCES, subset_index as u64])
}

/// Circuit and signed stabilizers for one graph state.
pub fn prepare_group(
    topo: &HardwareTopology,
    qubits: &[usize],
    method: Method,
    seq: &LcSequence,
) -> Result<(Circuit, Vec<PauliString>)> {
    match method {
        Method::Naive => {
            let c = build_naive_circuit(topo, qubits, seq)?;
            let target = c
                .meta
                .target_graph
                .clone()
                .expect("builder records the target");
            Ok((c, stabilizer_set(&target)))
        }
        Method::Unitary => {
            let c = build_unitary_circuit(topo, qubits, seq)?;
            let base = c
                .meta
                .source_graph
                .clone()
                .expect("builder records the source");
            let mut stabs = transform_generators(&generators(&base), &base, seq)?;
            stabs.push(PauliString::identity(qubits.len()));
            Ok((c, stabs))
        }
    }
}

/// Exact parity of the classical bits in `support` for a noiseless run of
/// `circ`.
fn exact_parity(circ: &Circuit, support: &[usize]) -> Result<f64> {
    let state = StabilizerState::from_circuit(circ)?;
    let wires = circ.measurement_map();
    let mut z = PauliString::identity(circ.width);
    for &b in support {
        z.set(wires[b].expect("every bit measured"), Pauli::Z);
    }
    Ok(state.expectation(&z)? as f64)
}

struct Context<'a> {
    cfg: &'a RunConfig,
    topo: &'a HardwareTopology,
    noises: Vec<NoiseModel>,
}

fn failed_group(ctx: &Context, g: &Group, batch: usize, err: &Error) -> Vec<Record> {
    let subset = &ctx.cfg.subsets[g.subset_index];
    (0..=g.n)
        .map(|j| Record {
            id: record_id(g, j),
            subset_index: g.subset_index,
            subset: subset.clone(),
            method: g.method,
            seq_index: g.seq_index,
            lc_seq: g.seq.clone(),
            graph_edges: Vec::new(),
            treewidth: 0,
            width: g.n,
            cnot_count: 0,
            stabilizer_index: j,
            stabilizer: PauliString::identity(g.n),
            weight: 0,
            batch,
            seed: record_seed(ctx.cfg.seed, g.subset_index, g.method, g.seq_index, j),
            counts: None,
            raw: None,
            mitigated: None,
            error: Some(err.to_string()),
        })
        .collect()
}

fn record_id(g: &Group, j: usize) -> String {
    format!("{}/{}/{}/{}", g.subset_index, g.method, g.seq_index, j)
}

fn run_group(
    ctx: &Context,
    g: &Group,
    batch: usize,
    mitigator: Option<&Result<TensoredMitigator>>,
) -> Vec<Record> {
    let qubits = &ctx.cfg.subsets[g.subset_index];
    let (circ, stabs) = match prepare_group(ctx.topo, qubits, g.method, &g.seq) {
        Ok(x) => x,
        Err(e) => return failed_group(ctx, g, batch, &e),
    };
    let target = circ
        .meta
        .target_graph
        .clone()
        .expect("builder records the target");
    let tw = match treewidth(&target) {
        Ok(t) => t,
        Err(e) => return failed_group(ctx, g, batch, &e),
    };
    let noise = &ctx.noises[g.subset_index];
    stabs
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let seed = record_seed(ctx.cfg.seed, g.subset_index, g.method, g.seq_index, j);
            let mut rec = Record {
                id: record_id(g, j),
                subset_index: g.subset_index,
                subset: qubits.clone(),
                method: g.method,
                seq_index: g.seq_index,
                lc_seq: g.seq.clone(),
                graph_edges: target.edges(),
                treewidth: tw,
                width: g.n,
                cnot_count: circ.cnot_count(),
                stabilizer_index: j,
                stabilizer: p.clone(),
                weight: p.weight(),
                batch,
                seed,
                counts: None,
                raw: None,
                mitigated: None,
                error: None,
            };
            if let Err(e) = measure(ctx, &circ, p, noise, seed, mitigator, &mut rec) {
                rec.error = Some(e.to_string());
            }
            rec
        })
        .collect()
}

fn measure(
    ctx: &Context,
    circ: &Circuit,
    p: &PauliString,
    noise: &NoiseModel,
    seed: u64,
    mitigator: Option<&Result<TensoredMitigator>>,
    rec: &mut Record,
) -> Result<()> {
    let measured = circ.for_stabilizer(&p.positive())?;
    let support = p.support();
    let sign = p.sign() as f64;
    match ctx.cfg.mode {
        SimMode::Exact => {
            let v = exact_parity(&measured, &support)? * sign;
            rec.raw = Some(v);
            if ctx.cfg.mitigate {
                rec.mitigated = Some(v);
            }
        }
        SimMode::Sampled => {
            let counts = sample_shots(&measured, noise, ctx.cfg.shots, seed)?;
            rec.raw = Some(expectation_from_counts(&counts, &support)? * sign);
            if let Some(m) = mitigator {
                let m = m
                    .as_ref()
                    .map_err(|e| Error::InvalidConfig(format!("mitigation: {e}")))?;
                let wires: Vec<usize> = measured
                    .measurement_map()
                    .into_iter()
                    .map(|w| w.expect("every bit measured"))
                    .collect();
                let v = m
                    .permuted(&wires)?
                    .mitigated_expectation(&counts, &support)?;
                rec.mitigated = Some(clamp_expectation(v * sign));
            }
            rec.counts = Some(counts);
        }
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn map_groups<F>(items: &[usize], f: F) -> Vec<Vec<Record>>
where
    F: Fn(usize) -> Vec<Record> + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(|&i| f(i)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_groups<F>(items: &[usize], f: F) -> Vec<Vec<Record>>
where
    F: Fn(usize) -> Vec<Record>,
{
    items.iter().map(|&i| f(i)).collect()
}

/// Runs every subset, sequence, method and stabilizer of `cfg` and collects
/// the records. Failures inside a graph group are recorded on its records
/// and never abort the run.
pub fn run_benchmark(cfg: &RunConfig) -> Result<ResultSet> {
    let topo = cfg.resolve_topology()?;
    run_benchmark_on(cfg, &topo)
}

pub fn run_benchmark_on(cfg: &RunConfig, topo: &HardwareTopology) -> Result<ResultSet> {
    cfg.validate(topo)?;
    let mut sequences = Vec::new();
    let mut groups = Vec::new();
    for (si, subset) in cfg.subsets.iter().enumerate() {
        let n = induced_subgraph(topo, subset)?.graph.n();
        let seed = sequence_seed(cfg.seed, si);
        let seqs = sample_lc_sequences(n, cfg.sequences_for(n), seed);
        for method in cfg.method.methods() {
            for (k, seq) in seqs.iter().enumerate() {
                groups.push(Group {
                    subset_index: si,
                    method,
                    seq_index: k,
                    seq: seq.clone(),
                    n,
                });
            }
        }
        sequences.push(SubsetSequences {
            subset: subset.clone(),
            seed,
            sequences: seqs,
        });
    }
    let sizes: Vec<usize> = groups.iter().map(|g| g.n + 1).collect();
    let batches = plan_batches(&sizes, cfg.max_per_batch)?;
    let ctx = Context {
        cfg,
        topo,
        noises: cfg
            .subsets
            .iter()
            .map(|s| NoiseModel::from_topology(topo, s).with_white_noise(cfg.white_noise))
            .collect(),
    };

    let mut by_group: Vec<Option<Vec<Record>>> = vec![None; groups.len()];
    for (b, members) in batches.iter().enumerate() {
        let mut mitigators: BTreeMap<usize, Result<TensoredMitigator>> = BTreeMap::new();
        if cfg.mitigate && cfg.mode == SimMode::Sampled {
            for &gi in members {
                let si = groups[gi].subset_index;
                mitigators.entry(si).or_insert_with(|| match cfg.mitigator {
                    MitigatorSource::Exact => {
                        TensoredMitigator::new(ctx.noises[si].readout.clone())
                    }
                    MitigatorSource::Calibrated => calibrate(
                        &ctx.noises[si],
                        cfg.shots,
                        derive_seed(cfg.seed, &[TAG_CALIBRATION, b as u64, si as u64]),
                    ),
                });
            }
        }
        let results = map_groups(members, |gi| {
            let g = &groups[gi];
            run_group(&ctx, g, b, mitigators.get(&g.subset_index))
        });
        for (&gi, recs) in members.iter().zip(results) {
            by_group[gi] = Some(recs);
        }
    }

    let created = unix_now();
    Ok(ResultSet {
        meta: RunMeta {
            schema: SCHEMA_VERSION,
            created,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: cfg.clone(),
            topology: topo.clone(),
            sequences,
            batches: batches
                .iter()
                .map(|m| m.iter().map(|&g| sizes[g]).sum())
                .collect(),
        },
        records: by_group
            .into_iter()
            .flat_map(|r| r.expect("every group ran"))
            .collect(),
    })
}
