use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::HardwareTopology;

/// Stochastic Pauli noise on circuit wires.
///
/// `cnot_depol` applies one of the 15 non-identity two-qubit Paulis, chosen
/// uniformly, with the given probability after each CNOT (three times per
/// SWAP). `sq_depol` applies one of X, Y, Z after each single-qubit gate.
/// `readout` flips measured bits. `white_noise` replaces the prepared state by
/// the maximally mixed state with the given probability, just before
/// measurement.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub cnot_depol: BTreeMap<(usize, usize), f64>,
    /// Used for CNOTs between wires absent from `cnot_depol`.
    pub default_cnot: f64,
    pub sq_depol: Vec<f64>,
    /// Per wire `(ε₀, ε₁)`.
    pub readout: Vec<(f64, f64)>,
    pub white_noise: f64,
}

impl NoiseModel {
    pub fn ideal(width: usize) -> Self {
        NoiseModel {
            cnot_depol: BTreeMap::new(),
            default_cnot: 0.0,
            sq_depol: vec![0.0; width],
            readout: vec![(0.0, 0.0); width],
            white_noise: 0.0,
        }
    }

    /// Noise on wires `0..qubits.len()` where wire `i` is hardware qubit
    /// `qubits[i]`.
    pub fn from_topology(topo: &HardwareTopology, qubits: &[usize]) -> Self {
        let mut cnot_depol = BTreeMap::new();
        for (i, &a) in qubits.iter().enumerate() {
            for (j, &b) in qubits.iter().enumerate().skip(i + 1) {
                if topo.is_coupled(a, b) {
                    cnot_depol.insert((i, j), topo.cnot_error(a, b));
                }
            }
        }
        NoiseModel {
            cnot_depol,
            default_cnot: 0.0,
            sq_depol: qubits.iter().map(|&q| topo.sq_err[q]).collect(),
            readout: qubits.iter().map(|&q| topo.readout_err[q]).collect(),
            white_noise: 0.0,
        }
    }

    pub fn width(&self) -> usize {
        self.readout.len()
    }

    pub fn with_readout(mut self, readout: Vec<(f64, f64)>) -> Self {
        self.readout = readout;
        self
    }

    pub fn with_white_noise(mut self, p: f64) -> Self {
        self.white_noise = p;
        self
    }

    pub fn cnot_prob(&self, a: usize, b: usize) -> f64 {
        self.cnot_depol
            .get(&(a.min(b), a.max(b)))
            .copied()
            .unwrap_or(self.default_cnot)
    }

    pub fn is_ideal(&self) -> bool {
        self.white_noise == 0.0
            && self.default_cnot == 0.0
            && self.cnot_depol.values().all(|&p| p == 0.0)
            && self.sq_depol.iter().all(|&p| p == 0.0)
            && self.readout.iter().all(|&(a, b)| a == 0.0 && b == 0.0)
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        if self.sq_depol.len() != width || self.readout.len() != width {
            return Err(Error::WidthMismatch {
                expected: width,
                actual: self.readout.len().min(self.sq_depol.len()),
            });
        }
        let probs = self
            .cnot_depol
            .values()
            .chain(&self.sq_depol)
            .chain(self.readout.iter().flat_map(|(a, b)| [a, b]))
            .chain([&self.default_cnot, &self.white_noise]);
        for &p in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!("{p} is not a probability")));
            }
        }
        Ok(())
    }
}
