//! Graph-state stabilizers and the entanglement witnesses built from them.

use crate::circuit::{lc_block, Gate};
use crate::error::{Error, Result};
use crate::graph::{Graph, LcSequence};
use crate::sim::{Pauli, PauliString};

/// `g_k = X_k ∏_{j ∈ N(k)} Z_j` for every vertex `k`.
pub fn generators(g: &Graph) -> Vec<PauliString> {
    (0..g.n())
        .map(|k| {
            let mut p = PauliString::single(g.n(), k, Pauli::X);
            for j in g.neighbors(k) {
                p.set(j, Pauli::Z);
            }
            p
        })
        .collect()
}

/// The generators followed by the all-identity string.
pub fn stabilizer_set(g: &Graph) -> Vec<PauliString> {
    let mut s = generators(g);
    s.push(PauliString::identity(g.n()));
    s
}

/// Conjugates `gens` by the local Cliffords that realize `seq` on the state
/// of `base`. The results stabilize the unitary-method state.
pub fn transform_generators(
    gens: &[PauliString],
    base: &Graph,
    seq: &LcSequence,
) -> Result<Vec<PauliString>> {
    let mut out = gens.to_vec();
    if let Some(p) = out.iter().find(|p| p.len() != base.n()) {
        return Err(Error::LengthMismatch {
            expected: base.n(),
            actual: p.len(),
        });
    }
    let history = seq.graph_history(base)?;
    for (&a, g) in seq.iter().zip(&history) {
        for gate in lc_block(g, a)? {
            for p in &mut out {
                p.conjugate(&gate);
            }
        }
    }
    Ok(out)
}

/// Rotations taking each non-identity letter of `p` to Z: X by H, Y by S†
/// then H.
pub fn measurement_basis(p: &PauliString) -> Vec<Gate> {
    let mut out = Vec::new();
    for q in 0..p.len() {
        match p.letter(q) {
            Pauli::X => out.push(Gate::H(q)),
            Pauli::Y => out.extend([Gate::Sdg(q), Gate::H(q)]),
            Pauli::Z | Pauli::I => {}
        }
    }
    out
}

/// Expectation of a signed stabilizer from the measured expectation of its
/// positive counterpart.
pub fn oriented(p: &PauliString, measured_positive: f64) -> f64 {
    measured_positive * p.sign() as f64
}

/// `(n − 1) − Σ ⟨g_k⟩`. Negative values certify genuine multipartite
/// entanglement.
pub fn genuine_witness(expectations: &[f64], n: usize) -> Result<f64> {
    if expectations.len() != n {
        return Err(Error::WrongArity {
            expected: n,
            actual: expectations.len(),
        });
    }
    Ok((n as f64 - 1.0) - expectations.iter().sum::<f64>())
}

/// `1 − ⟨g_i⟩ − ⟨g_j⟩` for an edge `(i, j)` of the prepared graph.
pub fn biseparable_witness(g: &Graph, i: usize, j: usize, e_i: f64, e_j: f64) -> Result<f64> {
    if i >= g.n() || j >= g.n() || !g.has_edge(i, j) {
        return Err(Error::NotAnEdge(i, j));
    }
    Ok(1.0 - e_i - e_j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Quarter;

    fn strs(ps: &[PauliString]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn generator_examples() {
        assert_eq!(strs(&generators(&Graph::path(3))), ["+XZI", "+ZXZ", "+IZX"]);
        assert_eq!(generators(&Graph::star(4))[0].to_string(), "+XZZZ");
        assert_eq!(strs(&generators(&Graph::empty(1).unwrap())), ["+X"]);
    }

    #[test]
    fn stabilizer_set_appends_identity() {
        let s = stabilizer_set(&Graph::path(3));
        assert_eq!(s.len(), 4);
        assert_eq!(s[3].to_string(), "+III");
        assert_eq!(stabilizer_set(&Graph::cycle(5)).len(), 6);
    }

    #[test]
    fn basis_examples() {
        assert_eq!(measurement_basis(&"XZI".parse().unwrap()), [Gate::H(0)]);
        assert_eq!(
            measurement_basis(&"IY".parse().unwrap()),
            [Gate::Sdg(1), Gate::H(1)]
        );
        assert!(measurement_basis(&"III".parse().unwrap()).is_empty());
    }

    #[test]
    fn basis_rotation_maps_to_z() {
        for s in ["XYZ", "YYI", "IXY"] {
            let p: PauliString = s.parse().unwrap();
            let mut q = p.clone();
            for g in measurement_basis(&p) {
                q.conjugate(&g);
            }
            assert!(!q.is_negative());
            for i in 0..3 {
                let want = if p.letter(i) == Pauli::I {
                    Pauli::I
                } else {
                    Pauli::Z
                };
                assert_eq!(q.letter(i), want);
            }
        }
    }

    #[test]
    fn witness_values() {
        assert_eq!(genuine_witness(&[1.0; 4], 4).unwrap(), -1.0);
        assert_eq!(genuine_witness(&[0.5; 4], 4).unwrap(), 1.0);
        assert!((genuine_witness(&[0.9, 0.8], 2).unwrap() + 0.7).abs() < 1e-15);
        assert!(matches!(
            genuine_witness(&[1.0], 2),
            Err(Error::WrongArity { .. })
        ));
        let g = Graph::path(3);
        assert_eq!(biseparable_witness(&g, 0, 1, 1.0, 1.0).unwrap(), -1.0);
        assert!((biseparable_witness(&g, 1, 2, 0.5, 0.4).unwrap() - 0.1).abs() < 1e-15);
        assert!(matches!(
            biseparable_witness(&g, 0, 2, 1.0, 1.0),
            Err(Error::NotAnEdge(0, 2))
        ));
    }

    #[test]
    fn two_qubit_witnesses_coincide() {
        let g = Graph::path(2);
        let e = [0.62, 0.64];
        assert_eq!(
            genuine_witness(&e, 2).unwrap(),
            biseparable_witness(&g, 0, 1, e[0], e[1]).unwrap()
        );
    }

    #[test]
    fn transform_star_center() {
        // LC at the center of a 3-star is one RX- on the center and RZ+ on both leaves.
        let g = Graph::star(3);
        let seq = LcSequence::from_raw(vec![0]);
        let got = transform_generators(&generators(&g), &g, &seq).unwrap();
        let mut want = generators(&g);
        for p in &mut want {
            p.conjugate(&Gate::Rx(0, Quarter::Minus));
            p.conjugate(&Gate::Rz(1, Quarter::Plus));
            p.conjugate(&Gate::Rz(2, Quarter::Plus));
        }
        assert_eq!(got, want);
        assert!(
            transform_generators(&generators(&g), &g, &LcSequence::identity())
                .unwrap()
                .eq(&generators(&g))
        );
    }

    #[test]
    fn orientation() {
        let p: PauliString = "-XZ".parse().unwrap();
        assert_eq!(oriented(&p, 0.9), -0.9);
        assert_eq!(oriented(&p.positive(), 0.9), 0.9);
    }
}
