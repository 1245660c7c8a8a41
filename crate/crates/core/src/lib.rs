//! Graph-state entanglement benchmark: local-complementation orbits, Clifford
//! circuit construction and simulation, witnesses, readout mitigation and the
//! robust entanglement score.

pub mod circuit;
pub mod error;
pub mod graph;
pub mod mitigation;
pub mod report;
pub mod rng;
pub mod runner;
pub mod sim;
pub mod witness;

pub use error::{Error, Result};
