//! Acceptance criteria 1–11. Runs as a plain binary so every criterion
//! prints one PASS/FAIL line; the process exits non-zero if any fails.

mod common;

use rand::Rng;
use resbench::circuit::{
    build_graph_state_circuit, build_naive_circuit, build_unitary_circuit, route_cnots, Circuit,
    Gate, Method,
};
use resbench::graph::{
    bundled_topologies, bundled_topology, connected_subsets, enumerate_orbit, sample_lc_sequences,
    treewidth, Graph, HardwareTopology,
};
use resbench::report::{correlation_matrix, pearson};
use resbench::rng::{derive_seed, stream};
use resbench::runner::{
    graph_witnesses, run_benchmark_on, scores, strip_timestamp, MethodChoice, MitigatorSource,
    ResultSet, RunConfig, SimMode, TopologySource,
};
use resbench::sim::{
    expectation_from_counts, sample_shots, DensityMatrix, NoiseModel, StabilizerState, StateVector,
};
use resbench::witness::{generators, genuine_witness, transform_generators};
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

const SHOTS: usize = 4096;
/// Sampled ideal expectations: |⟨g⟩ − 1| ≤ 4/√shots.
const IDEAL_SIGMAS: f64 = 4.0;
const IDEAL_BUDGET: Duration = Duration::from_secs(60);
/// Witness zero crossing: |p* − 1/n| ≤ 2/√shots.
const CROSSING_SIGMAS: f64 = 2.0;
const ANALYTIC_TOL: f64 = 1e-12;
const STATE_TOL: f64 = 1e-10;
const PAIRS_PER_N: usize = 20;
const EPS0: f64 = 0.08;
const EPS1: f64 = 0.03;
/// Mitigated expectations: |⟨g⟩ − 1| ≤ 5/√shots.
const MITIGATED_SIGMAS: f64 = 5.0;
const CNOT_SWEEP: [f64; 5] = [0.001, 0.005, 0.01, 0.02, 0.05];
const FULL_BUDGET: Duration = Duration::from_secs(300);
const PEARSON_TOL: f64 = 1e-10;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {{
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    }};
}

fn bound(sigmas: f64) -> f64 {
    sigmas / (SHOTS as f64).sqrt()
}

fn all_subsets(topo: &HardwareTopology, sizes: std::ops::RangeInclusive<usize>) -> Vec<Vec<usize>> {
    sizes
        .filter(|&k| k <= topo.n_qubits)
        .flat_map(|k| connected_subsets(topo, k).unwrap())
        .collect()
}

fn config(topo: &HardwareTopology, subsets: Vec<Vec<usize>>) -> RunConfig {
    RunConfig::new(TopologySource::Inline(topo.clone()), subsets)
}

fn ideal_pipeline() -> Outcome {
    let start = Instant::now();
    let (mut records, mut graphs) = (0, 0);
    for topo in bundled_topologies() {
        let topo = topo.noiseless();
        let subsets = all_subsets(&topo, 2..=6);
        for (mode, seqs) in [(SimMode::Exact, None), (SimMode::Sampled, Some(1))] {
            let mut cfg = config(&topo, subsets.clone());
            cfg.mode = mode;
            cfg.sequences_per_graph = seqs;
            cfg.shots = SHOTS;
            let rs = run_benchmark_on(&cfg, &topo).map_err(|e| e.to_string())?;
            for r in rs.records.iter().filter(|r| !r.is_identity()) {
                let raw = r
                    .raw
                    .ok_or_else(|| format!("{} failed: {:?}", r.id, r.error))?;
                match mode {
                    SimMode::Exact => ensure!(raw == 1.0, "{} {}: exact {raw}", topo.name, r.id),
                    SimMode::Sampled => {
                        ensure!(
                            (raw - 1.0).abs() <= bound(IDEAL_SIGMAS),
                            "{} {}: sampled {raw}",
                            topo.name,
                            r.id
                        )
                    }
                }
                records += 1;
            }
            for w in graph_witnesses(&rs.records) {
                ensure!(w.genuine == -1.0, "{}: genuine {}", topo.name, w.genuine);
                ensure!(
                    w.biseparable.iter().all(|&b| b == -1.0),
                    "{}: biseparable {:?}",
                    topo.name,
                    w.biseparable
                );
                graphs += 1;
            }
        }
    }
    let t = start.elapsed();
    ensure!(t < IDEAL_BUDGET, "took {t:?}");
    Ok(format!(
        "{records} generator records, {graphs} graph states, {:.1}s",
        t.as_secs_f64()
    ))
}

fn witness_threshold() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        let g = Graph::path(n);
        let circ = build_graph_state_circuit(&g).unwrap();
        let gens = generators(&g);
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            let rho =
                DensityMatrix::from_noisy_circuit(&circ, &NoiseModel::ideal(n).with_white_noise(p))
                    .unwrap();
            let e: Vec<f64> = gens.iter().map(|s| rho.expectation(s).unwrap()).collect();
            let w = genuine_witness(&e, n).unwrap();
            ensure!(
                (w - (n as f64 * p - 1.0)).abs() < ANALYTIC_TOL,
                "n={n} p={p}: analytic {w}"
            );
        }
        // Monte Carlo on a grid; the crossing is linearly interpolated.
        let step = 0.005;
        let mc = |k: usize| -> f64 {
            let noise = NoiseModel::ideal(n).with_white_noise(k as f64 * step);
            let e: Vec<f64> = gens
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    let c = circ.for_stabilizer(s).unwrap();
                    let seed = derive_seed(2, &[n as u64, k as u64, j as u64]);
                    expectation_from_counts(
                        &sample_shots(&c, &noise, SHOTS, seed).unwrap(),
                        &s.support(),
                    )
                    .unwrap()
                })
                .collect();
            genuine_witness(&e, n).unwrap()
        };
        let mut prev = mc(0);
        ensure!(prev < 0.0, "n={n}: noiseless witness {prev}");
        let crossing = (1..=(1.0 / step) as usize)
            .find_map(|k| {
                let w = mc(k);
                let hit = (w >= 0.0).then(|| step * (k as f64 - 1.0 + prev / (prev - w)));
                prev = w;
                hit
            })
            .ok_or(format!("n={n}: no crossing"))?;
        let err = (crossing - 1.0 / n as f64).abs();
        ensure!(
            err <= bound(CROSSING_SIGMAS),
            "n={n}: crossing at {crossing:.4}"
        );
        worst = worst.max(err);
    }
    Ok(format!(
        "max |p* - 1/n| = {worst:.4} (bound {:.4})",
        bound(CROSSING_SIGMAS)
    ))
}

/// Device whose coupling graph is `g`, so both builders work on `g` directly.
fn device_of(g: &Graph) -> HardwareTopology {
    HardwareTopology {
        name: "graph".into(),
        n_qubits: g.n(),
        couplers: g.edges(),
        readout_err: vec![(0.0, 0.0); g.n()],
        cnot_err: BTreeMap::new(),
        sq_err: vec![0.0; g.n()],
    }
}

fn random_connected<R: Rng>(rng: &mut R, n: usize) -> Graph {
    loop {
        if let Some(g) = common::graph_from_mask(n, rng.random()) {
            return g;
        }
    }
}

fn method_equivalence() -> Outcome {
    let mut rng = stream(3, &[]);
    let mut checked = 0;
    for n in 2..=4 {
        let seqs = sample_lc_sequences(n, PAIRS_PER_N, derive_seed(3, &[n as u64]));
        for seq in &seqs {
            let g = random_connected(&mut rng, n);
            let topo = device_of(&g);
            let qubits: Vec<usize> = (0..n).collect();
            let naive = build_naive_circuit(&topo, &qubits, seq).unwrap();
            let unitary = build_unitary_circuit(&topo, &qubits, seq).unwrap();
            let st = StabilizerState::from_circuit(&unitary).unwrap();
            for p in transform_generators(&generators(&g), &g, seq).unwrap() {
                ensure!(
                    st.expectation(&p).unwrap() == 1,
                    "{g:?} {seq:?}: {p} not +1"
                );
            }
            let a = StateVector::from_circuit(&unitary).unwrap();
            let b = StateVector::from_circuit(&naive)
                .unwrap()
                .relabeled(&naive.meta.final_layout)
                .unwrap();
            ensure!(
                a.equal_up_to_phase(&b, STATE_TOL),
                "{g:?} {seq:?}: states differ"
            );
            checked += 1;
        }
    }
    Ok(format!("{checked} (graph, sequence) pairs"))
}

fn orbit_closure() -> Outcome {
    for n in 3..=5 {
        let star = Graph::star(n);
        let orbit = enumerate_orbit(&star, 10_000).unwrap();
        ensure!(!orbit.truncated, "n={n}: truncated");
        let classes: BTreeSet<Graph> = orbit.isomorphism_classes().unwrap().into_iter().collect();
        let want: BTreeSet<Graph> = [
            star.canonical_form().unwrap(),
            Graph::complete(n).canonical_form().unwrap(),
        ]
        .into();
        ensure!(classes == want, "n={n}: classes {classes:?}");
        let tws: BTreeSet<usize> = orbit.graphs.iter().map(|g| treewidth(g).unwrap()).collect();
        ensure!(tws == [1, n - 1].into(), "n={n}: treewidths {tws:?}");
    }
    Ok("star_n ~ {star_n, K_n}, tw {1, n-1} for n = 3..5".into())
}

fn treewidth_oracle() -> Outcome {
    let mut count = 0;
    for n in 1..=6 {
        for g in common::all_connected(n) {
            let (dp, bf) = (treewidth(&g).unwrap(), common::brute_force_treewidth(&g));
            ensure!(dp == bf, "{g:?}: dp {dp} vs brute force {bf}");
            count += 1;
        }
    }
    for n in 2..=12 {
        ensure!(treewidth(&Graph::path(n)).unwrap() == 1, "path {n}");
        ensure!(treewidth(&Graph::star(n)).unwrap() == 1, "star {n}");
        ensure!(treewidth(&Graph::complete(n)).unwrap() == n - 1, "K{n}");
    }
    Ok(format!("{count} connected graphs with n <= 6"))
}

fn line(n: usize) -> HardwareTopology {
    HardwareTopology {
        name: "line".into(),
        n_qubits: n,
        couplers: (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        readout_err: vec![(0.0, 0.0); n],
        cnot_err: BTreeMap::new(),
        sq_err: vec![0.0; n],
    }
}

fn routing_arithmetic() -> Outcome {
    for d in 1..=10 {
        let topo = line(d + 1);
        let mut c = Circuit::new(d + 1);
        c.push(Gate::Cnot(0, d)).unwrap();
        let ident: Vec<usize> = (0..=d).collect();
        let routed = route_cnots(&topo, &c, &ident).unwrap();
        ensure!(
            routed.cnot_count() == 3 * (d - 1) + 1,
            "d={d}: {} CNOTs",
            routed.cnot_count()
        );
    }
    let mut rng = stream(6, &[]);
    let mut checked = 0;
    for n in 2..=4 {
        for g in common::all_connected(n) {
            let mut map: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                map.swap(i, rng.random_range(0..=i));
            }
            let logical = build_graph_state_circuit(&g).unwrap();
            let routed = route_cnots(&line(n), &logical, &map).unwrap();
            let want = StateVector::from_circuit(&logical).unwrap();
            let got = StateVector::from_circuit(&routed)
                .unwrap()
                .relabeled(&routed.meta.final_layout)
                .unwrap();
            ensure!(want.equal_up_to_phase(&got, STATE_TOL), "{g:?} via {map:?}");
            checked += 1;
        }
    }
    Ok(format!(
        "3(d-1)+1 for d = 1..10; {checked} routed graph states"
    ))
}

fn mitigation_round_trip() -> Outcome {
    let topo = bundled_topology("jakarta7")
        .unwrap()
        .with_uniform_errors((EPS0, EPS1), 0.0, 0.0);
    let subsets = all_subsets(&topo, 2..=6);
    let mut cfg = config(&topo, subsets);
    cfg.shots = SHOTS;
    cfg.mitigate = true;
    cfg.mitigator = MitigatorSource::Exact;
    let rs = run_benchmark_on(&cfg, &topo).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for r in rs.records.iter().filter(|r| !r.is_identity()) {
        let m = r
            .mitigated
            .ok_or_else(|| format!("{}: no mitigated value", r.id))?;
        worst = worst.max((m - 1.0).abs());
    }
    ensure!(
        worst <= bound(MITIGATED_SIGMAS),
        "max |mitigated - 1| = {worst:.4}"
    );
    let (raw, mit) = (scores(&rs, false), scores(&rs, true));
    for (m, a, b) in [
        ("naive", raw.naive, mit.naive),
        ("unitary", raw.unitary, mit.unitary),
    ] {
        let (a, b) = (a.unwrap().res, b.unwrap().res);
        ensure!(b >= a, "{m}: mitigated RES {b} < raw {a}");
    }
    Ok(format!(
        "max |mitigated - 1| = {worst:.4} (bound {:.4}); RES-N {} -> {}, RES-U {} -> {}",
        bound(MITIGATED_SIGMAS),
        raw.naive.unwrap().res,
        mit.naive.unwrap().res,
        raw.unitary.unwrap().res,
        mit.unitary.unwrap().res
    ))
}

fn res_monotonicity() -> Outcome {
    let base = bundled_topology("jakarta7").unwrap();
    let subsets = all_subsets(&base, 2..=7);
    let mut trace = Vec::new();
    for &p in &CNOT_SWEEP {
        let topo = base.with_uniform_errors((0.0, 0.0), p, 0.0);
        let mut cfg = config(&topo, subsets.clone());
        cfg.shots = SHOTS;
        let rs = run_benchmark_on(&cfg, &topo).map_err(|e| e.to_string())?;
        let s = scores(&rs, false);
        trace.push((p, s.naive.unwrap().res, s.unitary.unwrap().res));
    }
    for w in trace.windows(2) {
        ensure!(
            w[1].1 <= w[0].1 && w[1].2 <= w[0].2,
            "RES increased: {trace:?}"
        );
    }
    ensure!(trace.iter().all(|t| t.2 >= t.1), "RES-U < RES-N: {trace:?}");
    Ok(trace
        .iter()
        .map(|(p, n, u)| format!("p={p}: N {n} U {u}"))
        .collect::<Vec<_>>()
        .join(", "))
}

fn data_volume() -> Outcome {
    let topo = bundled_topology("toronto27").unwrap();
    for n in 2..=7 {
        let subset = connected_subsets(&topo, n).unwrap().swap_remove(0);
        let mut cfg = config(&topo, vec![subset]);
        cfg.mode = SimMode::Exact;
        cfg.method = MethodChoice::Both;
        let rs = run_benchmark_on(&cfg, &topo).map_err(|e| e.to_string())?;
        for m in [Method::Naive, Method::Unitary] {
            let count = rs.records.iter().filter(|r| r.method == m).count();
            ensure!(
                count == (1 << (n + 1)) * (n + 1),
                "n={n} {m}: {count} records"
            );
        }
    }
    Ok("2^(n+1)(n+1) records per method for n = 2..7".into())
}

fn determinism() -> Outcome {
    let topo = bundled_topology("jakarta7").unwrap();
    let mut cfg = config(&topo, all_subsets(&topo, 2..=7));
    cfg.shots = SHOTS;
    cfg.mitigate = true;
    cfg.seed = 10;
    let run = || -> Result<(ResultSet, Duration), String> {
        let t = Instant::now();
        let rs = run_benchmark_on(&cfg, &topo).map_err(|e| e.to_string())?;
        Ok((rs, t.elapsed()))
    };
    let (a, ta) = run()?;
    let (b, tb) = run()?;
    ensure!(
        ta < FULL_BUDGET && tb < FULL_BUDGET,
        "runs took {ta:?}, {tb:?}"
    );
    ensure!(a.records.iter().all(|r| r.is_ok()), "failed records");
    ensure!(
        strip_timestamp(&a.to_jsonl()) == strip_timestamp(&b.to_jsonl()),
        "result sets differ"
    );
    Ok(format!(
        "{} records, byte-identical; {:.1}s per run",
        a.records.len(),
        ta.as_secs_f64()
    ))
}

fn direct_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

fn statistics_oracle() -> Outcome {
    let mut rng = stream(11, &[]);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let len = rng.random_range(3..200);
        let slope: f64 = rng.random_range(-2.0..2.0);
        let x: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|v| slope * v + rng.random_range(-1.0..1.0))
            .collect();
        let r = pearson(&x, &y).map_err(|e| e.to_string())?.r;
        worst = worst.max((r - direct_pearson(&x, &y)).abs());
    }
    ensure!(worst <= PEARSON_TOL, "max deviation {worst:e}");

    // Expectation falling linearly with CNOT count.
    let topo = bundled_topology("jakarta7").unwrap().noiseless();
    let mut cfg = config(&topo, vec![vec![0, 1, 2]]);
    cfg.mode = SimMode::Exact;
    cfg.sequences_per_graph = Some(12);
    let mut rs = run_benchmark_on(&cfg, &topo).map_err(|e| e.to_string())?;
    rs.records.retain(|r| !r.is_identity());
    for (i, r) in rs.records.iter_mut().enumerate() {
        r.cnot_count = i;
        r.raw = Some(1.0 - 0.01 * i as f64);
    }
    let corr = correlation_matrix(&rs.records, false).map_err(|e| e.to_string())?;
    let r = corr
        .r_of("cnot_count", "expectation")
        .ok_or("no cnot/expectation cell")?;
    ensure!((r + 1.0).abs() < PEARSON_TOL, "synthetic r = {r}");
    Ok(format!("max |r - direct| = {worst:.1e}; synthetic r = {r}"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("ideal-pipeline exactness", ideal_pipeline),
        ("witness threshold law", witness_threshold),
        ("method equivalence", method_equivalence),
        ("star orbit closure", orbit_closure),
        ("treewidth oracle", treewidth_oracle),
        ("routing arithmetic", routing_arithmetic),
        ("mitigation round trip", mitigation_round_trip),
        ("RES monotonicity", res_monotonicity),
        ("data volume", data_volume),
        ("determinism and runtime", determinism),
        ("statistics oracle", statistics_oracle),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
