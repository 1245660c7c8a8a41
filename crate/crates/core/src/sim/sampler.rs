//! Monte-Carlo shot sampling by Pauli-frame propagation.
//!
//! The noiseless circuit is simulated once on the tableau, which yields the
//! affine space of computational-basis outcomes. Each shot then draws a
//! uniformly random point of that space and XORs in the X-part of a Pauli
//! frame accumulated from the noise events, propagated through the remaining
//! gates. This is exact for Pauli channels followed by terminal Z
//! measurements.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

use super::{NoiseModel, StabilizerState};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::rng;

const BLOCK: usize = 1024;
const MAX_SAMPLED_WIDTH: usize = 64;

/// Bitstring histogram. Keys have one character per classical bit, bit 0
/// leftmost.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Counts(pub BTreeMap<String, u64>);

impl Counts {
    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn width(&self) -> Option<usize> {
        self.0.keys().next().map(String::len)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, key: &str) -> u64 {
        self.0.get(key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    fn from_packed(width: usize, packed: HashMap<u64, u64>) -> Self {
        Counts(
            packed
                .into_iter()
                .map(|(bits, c)| {
                    let s = (0..width)
                        .map(|b| if bits >> b & 1 == 1 { '1' } else { '0' })
                        .collect();
                    (s, c)
                })
                .collect(),
        )
    }
}

impl<S: Into<String>> FromIterator<(S, u64)> for Counts {
    fn from_iter<T: IntoIterator<Item = (S, u64)>>(iter: T) -> Self {
        let mut m = BTreeMap::new();
        for (k, v) in iter {
            *m.entry(k.into()).or_insert(0) += v;
        }
        Counts(m)
    }
}

/// Parity expectation `Σ (−1)^{parity on support} · count / total`.
pub fn expectation_from_counts(counts: &Counts, support: &[usize]) -> Result<f64> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::EmptyCounts);
    }
    let mut acc: i64 = 0;
    for (bits, c) in counts.iter() {
        let bytes = bits.as_bytes();
        let mut odd = false;
        for &b in support {
            let ch = *bytes.get(b).ok_or(Error::WidthMismatch {
                expected: b + 1,
                actual: bytes.len(),
            })?;
            odd ^= ch == b'1';
        }
        acc += if odd { -(c as i64) } else { c as i64 };
    }
    Ok(acc as f64 / total as f64)
}

#[derive(Clone, Copy)]
enum FrameOp {
    H(u32),
    Phase(u32),
    XFromZ(u32),
    Cnot(u32, u32),
    Swap(u32, u32),
    Depol1 { q: u32, p: f64 },
    Depol2 { a: u32, b: u32, p: f64 },
    White(f64),
}

struct Program {
    ops: Vec<FrameOp>,
    reference: u64,
    directions: Vec<u64>,
    /// `(wire, bit, ε₀, ε₁)`
    reads: Vec<(u32, u32, f64, f64)>,
    width_mask: u64,
    bits: usize,
}

fn compile(circ: &Circuit, noise: &NoiseModel) -> Result<Program> {
    let w = circ.width;
    if w > MAX_SAMPLED_WIDTH {
        return Err(Error::TooLarge {
            what: "sampled circuit",
            size: w,
            limit: MAX_SAMPLED_WIDTH,
        });
    }
    noise.validate(w)?;
    let unitary = circ.unitary_part();
    let tail = &circ.gates[unitary.len()..];
    if unitary.iter().any(|g| matches!(g, Gate::Measure { .. })) {
        return Err(Error::InvalidConfig("measurements must be terminal".into()));
    }
    let mut measured = vec![false; w];
    let mut reads = Vec::with_capacity(tail.len());
    for g in tail {
        if let Gate::Measure { qubit, bit } = *g {
            if qubit >= w || bit >= w || measured[bit] {
                return Err(Error::InvalidConfig(format!("bad measurement {g}")));
            }
            measured[bit] = true;
            let (e0, e1) = noise.readout[qubit];
            reads.push((qubit as u32, bit as u32, e0, e1));
        }
    }
    if measured.iter().any(|m| !m) {
        return Err(Error::InvalidConfig(
            "circuit does not measure every bit".into(),
        ));
    }

    let state = StabilizerState::from_circuit(circ)?;
    let (reference, directions) = state.outcome_space();

    let mut ops = Vec::with_capacity(unitary.len() * 2);
    for g in unitary {
        match *g {
            Gate::H(q) => ops.push(FrameOp::H(q as u32)),
            Gate::S(q) | Gate::Sdg(q) | Gate::Rz(q, _) => ops.push(FrameOp::Phase(q as u32)),
            Gate::Rx(q, _) => ops.push(FrameOp::XFromZ(q as u32)),
            Gate::Cnot(c, t) => ops.push(FrameOp::Cnot(c as u32, t as u32)),
            Gate::Swap(a, b) => ops.push(FrameOp::Swap(a as u32, b as u32)),
            Gate::Barrier | Gate::Measure { .. } => {}
        }
        match *g {
            _ if g.is_single_qubit_unitary() => {
                let q = g.qubits()[0];
                let p = noise.sq_depol[q];
                if p > 0.0 {
                    ops.push(FrameOp::Depol1 { q: q as u32, p });
                }
            }
            Gate::Cnot(a, b) | Gate::Swap(a, b) => {
                let p = noise.cnot_prob(a, b);
                let reps = if matches!(g, Gate::Swap(..)) { 3 } else { 1 };
                if p > 0.0 {
                    for _ in 0..reps {
                        ops.push(FrameOp::Depol2 {
                            a: a as u32,
                            b: b as u32,
                            p,
                        });
                    }
                }
            }
            _ => {}
        }
    }
    if noise.white_noise > 0.0 {
        ops.push(FrameOp::White(noise.white_noise));
    }
    let width_mask = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
    Ok(Program {
        ops,
        reference: reference[0],
        directions: directions.into_iter().map(|d| d[0]).collect(),
        reads,
        width_mask,
        bits: w,
    })
}

#[inline]
fn pauli_bits(k: u32) -> (u64, u64) {
    // 0 = I, 1 = X, 2 = Y, 3 = Z
    ((k == 1 || k == 2) as u64, (k == 2 || k == 3) as u64)
}

impl Program {
    fn shot<R: Rng>(&self, rng: &mut R) -> u64 {
        let (mut fx, mut fz) = (0u64, 0u64);
        for op in &self.ops {
            match *op {
                FrameOp::H(q) => {
                    let (bx, bz) = (fx >> q & 1, fz >> q & 1);
                    fx ^= (bx ^ bz) << q;
                    fz ^= (bx ^ bz) << q;
                }
                FrameOp::Phase(q) => fz ^= fx & (1 << q),
                FrameOp::XFromZ(q) => fx ^= fz & (1 << q),
                FrameOp::Cnot(c, t) => {
                    fx ^= (fx >> c & 1) << t;
                    fz ^= (fz >> t & 1) << c;
                }
                FrameOp::Swap(a, b) => {
                    for f in [&mut fx, &mut fz] {
                        let d = (*f >> a ^ *f >> b) & 1;
                        *f ^= (d << a) | (d << b);
                    }
                }
                FrameOp::Depol1 { q, p } => {
                    let u: f64 = rng.random();
                    if u < p {
                        let k = ((u / p * 3.0) as u32).min(2) + 1;
                        let (x, z) = pauli_bits(k);
                        fx ^= x << q;
                        fz ^= z << q;
                    }
                }
                FrameOp::Depol2 { a, b, p } => {
                    let u: f64 = rng.random();
                    if u < p {
                        let k = ((u / p * 15.0) as u32).min(14) + 1;
                        let (xa, za) = pauli_bits(k % 4);
                        let (xb, zb) = pauli_bits(k / 4);
                        fx ^= (xa << a) | (xb << b);
                        fz ^= (za << a) | (zb << b);
                    }
                }
                FrameOp::White(p) => {
                    let u: f64 = rng.random();
                    if u < p {
                        fx ^= rng.random::<u64>() & self.width_mask;
                        fz ^= rng.random::<u64>() & self.width_mask;
                    }
                }
            }
        }
        let mut wires = self.reference ^ fx;
        if !self.directions.is_empty() {
            let r: u64 = rng.random();
            for (i, d) in self.directions.iter().enumerate() {
                if r >> i & 1 == 1 {
                    wires ^= d;
                }
            }
        }
        let mut out = 0u64;
        for &(wire, bit, e0, e1) in &self.reads {
            let mut v = wires >> wire & 1 == 1;
            let e = if v { e1 } else { e0 };
            if e > 0.0 && rng.random::<f64>() < e {
                v = !v;
            }
            out |= (v as u64) << bit;
        }
        out
    }

    fn block(&self, seed: u64, block: usize, shots: usize) -> HashMap<u64, u64> {
        let mut rng = rng::stream(seed, &[block as u64]);
        let mut m = HashMap::new();
        for _ in 0..shots {
            *m.entry(self.shot(&mut rng)).or_insert(0) += 1;
        }
        m
    }
}

/// Sample `shots` noisy executions of `circ`. Shots are split into fixed
/// blocks with independent RNG streams, so the result depends only on
/// `seed`, never on thread scheduling.
pub fn sample_shots(circ: &Circuit, noise: &NoiseModel, shots: usize, seed: u64) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::InvalidConfig("shots must be at least 1".into()));
    }
    let program = compile(circ, noise)?;
    let blocks: Vec<(usize, usize)> = (0..shots.div_ceil(BLOCK))
        .map(|b| (b, BLOCK.min(shots - b * BLOCK)))
        .collect();
    let run = |&(b, n): &(usize, usize)| program.block(seed, b, n);
    #[cfg(feature = "parallel")]
    let parts: Vec<HashMap<u64, u64>> = {
        use rayon::prelude::*;
        blocks.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<HashMap<u64, u64>> = blocks.iter().map(run).collect();
    let mut merged: HashMap<u64, u64> = HashMap::new();
    for part in parts {
        for (k, v) in part {
            *merged.entry(k).or_insert(0) += v;
        }
    }
    Ok(Counts::from_packed(program.bits, merged))
}
