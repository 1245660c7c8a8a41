//! Clifford simulation: Pauli strings, the stabilizer tableau, noisy shot
//! sampling and dense reference simulators.

mod dense;
mod noise;
mod pauli;
mod sampler;
mod tableau;

pub use dense::{
    dense_noisy_distribution, dense_oracle, parity_expectation, DensityMatrix, StateVector,
    DENSITY_LIMIT, STATE_VECTOR_LIMIT,
};
pub use noise::NoiseModel;
pub use pauli::{Pauli, PauliString};
pub use sampler::{expectation_from_counts, sample_shots, Counts};
pub use tableau::StabilizerState;

use crate::circuit::Circuit;
use crate::error::Result;

/// Exact stabilizer expectation: ±1 if ±p stabilizes the state, else 0.
pub fn expectation_exact(state: &StabilizerState, p: &PauliString) -> Result<i8> {
    state.expectation(p)
}

/// Exact expectation of `p` on the noiseless state prepared by `circ`.
pub fn circuit_expectation(circ: &Circuit, p: &PauliString) -> Result<i8> {
    StabilizerState::from_circuit(circ)?.expectation(p)
}
