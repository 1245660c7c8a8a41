use std::collections::VecDeque;

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::graph::HardwareTopology;

/// Places logical qubit `i` on wire `i` (hardware qubit `hardware_map[i]`)
/// and makes every CNOT act on coupled wires. A CNOT between uncoupled wires
/// is preceded by SWAPs that walk the control along a shortest path toward
/// the target, preferring the lowest hardware index on ties. The moved layout
/// is kept for the rest of the circuit and recorded in `meta.final_layout`.
pub fn route_cnots(
    topo: &HardwareTopology,
    circ: &Circuit,
    hardware_map: &[usize],
) -> Result<Circuit> {
    let w = circ.width;
    if hardware_map.len() != w {
        return Err(Error::LengthMismatch {
            expected: w,
            actual: hardware_map.len(),
        });
    }
    for (i, &h) in hardware_map.iter().enumerate() {
        if h >= topo.n_qubits {
            return Err(Error::VertexOutOfRange {
                vertex: h,
                n: topo.n_qubits,
            });
        }
        if hardware_map[..i].contains(&h) {
            return Err(Error::InvalidConfig(format!(
                "hardware qubit {h} mapped twice"
            )));
        }
    }
    // Wire adjacency, each list ordered by hardware index.
    let adj: Vec<Vec<usize>> = (0..w)
        .map(|a| {
            let mut v: Vec<usize> = (0..w)
                .filter(|&b| b != a && topo.is_coupled(hardware_map[a], hardware_map[b]))
                .collect();
            v.sort_by_key(|&b| hardware_map[b]);
            v
        })
        .collect();

    let mut layout = circ.meta.final_layout.clone();
    if layout.len() != w {
        layout = (0..w).collect();
    }
    let mut out = Circuit::new(w);
    out.meta = circ.meta.clone();
    out.meta.hardware_map = hardware_map.to_vec();
    for gate in &circ.gates {
        if let Gate::Cnot(c, t) = *gate {
            let (mut wc, wt) = (layout[c], layout[t]);
            let dist = distances(&adj, wt);
            if dist[wc] == usize::MAX {
                return Err(Error::NoPath(hardware_map[wc], hardware_map[wt]));
            }
            while dist[wc] > 1 {
                let next = *adj[wc]
                    .iter()
                    .find(|&&b| dist[b] == dist[wc] - 1)
                    .expect("shortest path step");
                out.push(Gate::Swap(wc, next))?;
                for l in layout.iter_mut() {
                    if *l == wc {
                        *l = next;
                    } else if *l == next {
                        *l = wc;
                    }
                }
                wc = next;
            }
            out.push(Gate::Cnot(wc, wt))?;
        } else {
            match *gate {
                Gate::Measure { qubit, bit } => out.push(Gate::Measure {
                    qubit: layout[qubit],
                    bit,
                })?,
                _ => out.push(gate.map_qubits(|q| layout[q]))?,
            }
        }
    }
    out.meta.final_layout = layout;
    Ok(out)
}

fn distances(adj: &[Vec<usize>], from: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn path_topology(n: usize) -> HardwareTopology {
        HardwareTopology {
            name: format!("line{n}"),
            n_qubits: n,
            couplers: (0..n - 1).map(|i| (i, i + 1)).collect(),
            readout_err: vec![(0.0, 0.0); n],
            cnot_err: BTreeMap::new(),
            sq_err: vec![0.0; n],
        }
    }

    fn single_cnot(n: usize, c: usize, t: usize) -> Circuit {
        let mut circ = Circuit::new(n);
        circ.push(Gate::Cnot(c, t)).unwrap();
        circ
    }

    #[test]
    fn adjacent_cnot_untouched() {
        let topo = path_topology(3);
        let r = route_cnots(&topo, &single_cnot(3, 1, 2), &[0, 1, 2]).unwrap();
        assert_eq!(r.gates, [Gate::Cnot(1, 2)]);
    }

    #[test]
    fn distance_two() {
        let topo = path_topology(3);
        let r = route_cnots(&topo, &single_cnot(3, 0, 2), &[0, 1, 2]).unwrap();
        assert_eq!(r.gates, [Gate::Swap(0, 1), Gate::Cnot(1, 2)]);
        assert_eq!(r.cnot_count(), 4);
        assert_eq!(r.meta.final_layout, [1, 0, 2]);
    }

    #[test]
    fn distance_d_cost() {
        for d in 1..7 {
            let topo = path_topology(d + 1);
            let map: Vec<usize> = (0..=d).collect();
            let r = route_cnots(&topo, &single_cnot(d + 1, 0, d), &map).unwrap();
            assert_eq!(r.count(|g| matches!(g, Gate::Swap(..))), d - 1);
            assert_eq!(r.cnot_count(), 3 * (d - 1) + 1);
        }
    }

    #[test]
    fn measurements_follow_layout() {
        let topo = path_topology(3);
        let mut c = single_cnot(3, 0, 2);
        c.measure_all();
        let r = route_cnots(&topo, &c, &[0, 1, 2]).unwrap();
        assert_eq!(r.measurement_map(), [Some(1), Some(0), Some(2)]);
    }

    #[test]
    fn bad_maps() {
        let topo = path_topology(3);
        let c = single_cnot(2, 0, 1);
        assert!(route_cnots(&topo, &c, &[0]).is_err());
        assert!(route_cnots(&topo, &c, &[0, 0]).is_err());
        assert!(route_cnots(&topo, &c, &[0, 5]).is_err());
        assert!(matches!(
            route_cnots(&topo, &c, &[0, 2]),
            Err(Error::NoPath(0, 2))
        ));
    }
}
