//! Dense reference simulators: a state vector for pure evolution and a
//! density matrix for the noisy channels. Both are exponential and intended
//! for cross-checking the tableau and the frame sampler on small registers.

use num_complex::Complex64 as C;
use std::f64::consts::FRAC_1_SQRT_2;

use super::{NoiseModel, Pauli, PauliString};
use crate::circuit::{Circuit, Gate, Quarter};
use crate::error::{Error, Result};

pub const STATE_VECTOR_LIMIT: usize = 12;
pub const DENSITY_LIMIT: usize = 6;

type Mat2 = [[C; 2]; 2];

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);
const I: C = C::new(0.0, 1.0);

fn gate_matrix(gate: &Gate) -> Option<Mat2> {
    let r = C::new(FRAC_1_SQRT_2, 0.0);
    let ri = C::new(0.0, FRAC_1_SQRT_2);
    let w = C::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    Some(match *gate {
        Gate::H(_) => [[r, r], [r, -r]],
        Gate::S(_) => [[ONE, ZERO], [ZERO, I]],
        Gate::Sdg(_) => [[ONE, ZERO], [ZERO, -I]],
        Gate::Rx(_, Quarter::Minus) => [[r, -ri], [-ri, r]],
        Gate::Rx(_, Quarter::Plus) => [[r, ri], [ri, r]],
        Gate::Rz(_, Quarter::Plus) => [[w, ZERO], [ZERO, w.conj()]],
        Gate::Rz(_, Quarter::Minus) => [[w.conj(), ZERO], [ZERO, w]],
        _ => return None,
    })
}

fn pauli_matrix(p: Pauli) -> Mat2 {
    match p {
        Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
        Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
        Pauli::Y => [[ZERO, -I], [I, ZERO]],
        Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

fn conj(m: Mat2) -> Mat2 {
    m.map(|row| row.map(|c| c.conj()))
}

fn apply_1q(v: &mut [C], bit: usize, u: &Mat2) {
    let mask = 1usize << bit;
    for i in 0..v.len() {
        if i & mask == 0 {
            let (a, b) = (v[i], v[i | mask]);
            v[i] = u[0][0] * a + u[0][1] * b;
            v[i | mask] = u[1][0] * a + u[1][1] * b;
        }
    }
}

fn apply_cnot(v: &mut [C], c: usize, t: usize) {
    let (cm, tm) = (1usize << c, 1usize << t);
    for i in 0..v.len() {
        if i & cm != 0 && i & tm == 0 {
            v.swap(i, i | tm);
        }
    }
}

fn apply_swap(v: &mut [C], a: usize, b: usize) {
    let (am, bm) = (1usize << a, 1usize << b);
    for i in 0..v.len() {
        if i & am != 0 && i & bm == 0 {
            v.swap(i, i ^ am ^ bm);
        }
    }
}

fn check_size(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::TooLarge {
            what,
            size: n,
            limit,
        });
    }
    Ok(())
}

/// Pure state on `n` qubits; qubit `q` is bit `q` of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C>,
}

impl StateVector {
    pub fn zero(n: usize) -> Result<Self> {
        check_size("state vector", n, STATE_VECTOR_LIMIT)?;
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Ok(StateVector { n, amps })
    }

    /// Runs the gates before the terminal measurement block.
    pub fn from_circuit(circ: &Circuit) -> Result<Self> {
        let mut s = StateVector::zero(circ.width)?;
        for g in circ.unitary_part() {
            s.apply(g)?;
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amps
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        if let Some(&q) = gate.qubits().iter().find(|&&q| q >= self.n) {
            return Err(Error::VertexOutOfRange {
                vertex: q,
                n: self.n,
            });
        }
        match *gate {
            Gate::Cnot(c, t) => apply_cnot(&mut self.amps, c, t),
            Gate::Swap(a, b) => apply_swap(&mut self.amps, a, b),
            Gate::Barrier => {}
            Gate::Measure { .. } => {
                return Err(Error::InvalidConfig(
                    "measurement in unitary evolution".into(),
                ))
            }
            _ => {
                let u = gate_matrix(gate).expect("single-qubit gate");
                apply_1q(&mut self.amps, gate.qubits()[0], &u);
            }
        }
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩`, including the sign of `p`.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: p.len(),
            });
        }
        let mut v = self.amps.clone();
        for q in 0..self.n {
            let l = p.letter(q);
            if l != Pauli::I {
                apply_1q(&mut v, q, &pauli_matrix(l));
            }
        }
        let e: C = self.amps.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
        Ok(e.re * p.sign() as f64)
    }

    /// Relabels qubits so that new qubit `q` is old qubit `map[q]`.
    pub fn relabeled(&self, map: &[usize]) -> Result<Self> {
        if map.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: map.len(),
            });
        }
        let mut amps = vec![ZERO; self.amps.len()];
        for (old, &a) in self.amps.iter().enumerate() {
            let new = map
                .iter()
                .enumerate()
                .fold(0usize, |acc, (q, &m)| acc | ((old >> m & 1) << q));
            amps[new] = a;
        }
        Ok(StateVector { n: self.n, amps })
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<C>()
            .norm()
    }

    /// Whether `other = e^{iφ} self` for some φ, entrywise within `tol`.
    pub fn equal_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        if self.n != other.n {
            return false;
        }
        let (k, a) = self
            .amps
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
            .expect("nonempty");
        if other.amps[k].norm() < 1e-12 {
            return false;
        }
        let phase = other.amps[k] / *a;
        let phase = phase / phase.norm();
        self.amps
            .iter()
            .zip(&other.amps)
            .all(|(a, b)| (b - phase * a).norm() <= tol)
    }
}

/// Mixed state on `n` qubits stored as a flat `2n`-qubit vector: bits
/// `0..n` index the column, bits `n..2n` the row.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    n: usize,
    rho: Vec<C>,
}

impl DensityMatrix {
    pub fn zero(n: usize) -> Result<Self> {
        check_size("density matrix", n, DENSITY_LIMIT)?;
        let mut rho = vec![ZERO; 1 << (2 * n)];
        rho[0] = ONE;
        Ok(DensityMatrix { n, rho })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn unitary(&mut self, gate: &Gate) {
        let n = self.n;
        match *gate {
            Gate::Cnot(c, t) => {
                apply_cnot(&mut self.rho, c + n, t + n);
                apply_cnot(&mut self.rho, c, t);
            }
            Gate::Swap(a, b) => {
                apply_swap(&mut self.rho, a + n, b + n);
                apply_swap(&mut self.rho, a, b);
            }
            Gate::Barrier | Gate::Measure { .. } => {}
            _ => {
                let u = gate_matrix(gate).expect("single-qubit gate");
                let q = gate.qubits()[0];
                apply_1q(&mut self.rho, q + n, &u);
                apply_1q(&mut self.rho, q, &conj(u));
            }
        }
    }

    fn pauli_conjugated(&self, letters: &[(usize, Pauli)]) -> Vec<C> {
        let mut v = self.rho.clone();
        for &(q, l) in letters {
            let m = pauli_matrix(l);
            apply_1q(&mut v, q + self.n, &m);
            apply_1q(&mut v, q, &conj(m));
        }
        v
    }

    /// Applies each non-identity Pauli on `qubits` with probability
    /// `p / (4^k − 1)`.
    pub fn depolarize(&mut self, qubits: &[usize], p: f64) {
        if p == 0.0 {
            return;
        }
        const LETTERS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        let k = qubits.len() as u32;
        let terms = 4usize.pow(k) - 1;
        let mut acc: Vec<C> = self.rho.iter().map(|c| c * (1.0 - p)).collect();
        for idx in 1..=terms {
            let letters: Vec<(usize, Pauli)> = qubits
                .iter()
                .enumerate()
                .map(|(i, &q)| (q, LETTERS[idx >> (2 * i) & 3]))
                .collect();
            let w = p / terms as f64;
            for (a, b) in acc.iter_mut().zip(self.pauli_conjugated(&letters)) {
                *a += b * w;
            }
        }
        self.rho = acc;
    }

    /// `ρ → (1−p)ρ + p·I/2ⁿ`.
    pub fn white_noise(&mut self, p: f64) {
        let dim = 1usize << self.n;
        for c in &mut self.rho {
            *c *= 1.0 - p;
        }
        for i in 0..dim {
            self.rho[(i << self.n) | i] += C::new(p / dim as f64, 0.0);
        }
    }

    /// Computational-basis probabilities, indexed by basis state.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..1usize << self.n)
            .map(|i| self.rho[(i << self.n) | i].re)
            .collect()
    }

    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: p.len(),
            });
        }
        let letters: Vec<(usize, Pauli)> = (0..self.n)
            .map(|q| (q, p.letter(q)))
            .filter(|&(_, l)| l != Pauli::I)
            .collect();
        // Tr(Pρ): apply P on the row side only and take the trace.
        let mut v = self.rho.clone();
        for &(q, l) in &letters {
            apply_1q(&mut v, q + self.n, &pauli_matrix(l));
        }
        let tr: C = (0..1usize << self.n).map(|i| v[(i << self.n) | i]).sum();
        Ok(tr.re * p.sign() as f64)
    }

    /// Evolves `|0…0⟩` through the unitary part of `circ` under `noise`,
    /// inserting channels where the frame sampler inserts Pauli events.
    pub fn from_noisy_circuit(circ: &Circuit, noise: &NoiseModel) -> Result<Self> {
        noise.validate(circ.width)?;
        let mut rho = DensityMatrix::zero(circ.width)?;
        for g in circ.unitary_part() {
            rho.unitary(g);
            match *g {
                _ if g.is_single_qubit_unitary() => {
                    let q = g.qubits()[0];
                    rho.depolarize(&[q], noise.sq_depol[q]);
                }
                Gate::Cnot(a, b) => rho.depolarize(&[a, b], noise.cnot_prob(a, b)),
                Gate::Swap(a, b) => {
                    for _ in 0..3 {
                        rho.depolarize(&[a, b], noise.cnot_prob(a, b));
                    }
                }
                _ => {}
            }
        }
        if noise.white_noise > 0.0 {
            rho.white_noise(noise.white_noise);
        }
        Ok(rho)
    }
}

/// Exact noiseless `⟨ψ|P|ψ⟩` for the state prepared by `circ`.
pub fn dense_oracle(circ: &Circuit, p: &PauliString) -> Result<f64> {
    StateVector::from_circuit(circ)?.expectation(p)
}

/// Exact distribution of the classical register of `circ` under `noise`,
/// readout flips included. Index bit `b` is classical bit `b`.
pub fn dense_noisy_distribution(circ: &Circuit, noise: &NoiseModel) -> Result<Vec<f64>> {
    let rho = DensityMatrix::from_noisy_circuit(circ, noise)?;
    let wires = rho.diagonal();
    let map = circ.measurement_map();
    let mut dist = vec![0.0; 1 << map.len()];
    for (basis, &pr) in wires.iter().enumerate() {
        let mut out = 0usize;
        for (bit, w) in map.iter().enumerate() {
            let w = w.ok_or_else(|| Error::InvalidConfig(format!("bit {bit} never measured")))?;
            out |= (basis >> w & 1) << bit;
        }
        dist[out] += pr;
    }
    for (bit, w) in map.iter().enumerate() {
        let (e0, e1) = noise.readout[w.expect("checked above")];
        let mask = 1usize << bit;
        for i in 0..dist.len() {
            if i & mask == 0 {
                let (p0, p1) = (dist[i], dist[i | mask]);
                dist[i] = (1.0 - e0) * p0 + e1 * p1;
                dist[i | mask] = e0 * p0 + (1.0 - e1) * p1;
            }
        }
    }
    Ok(dist)
}

/// Parity expectation over `support` for a distribution indexed by packed
/// bits.
pub fn parity_expectation(dist: &[f64], support: &[usize]) -> f64 {
    let mask: usize = support.iter().map(|&b| 1usize << b).sum();
    dist.iter()
        .enumerate()
        .map(|(i, &p)| {
            if (i & mask).count_ones() % 2 == 1 {
                -p
            } else {
                p
            }
        })
        .sum()
}
