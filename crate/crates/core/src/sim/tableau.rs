//! Aaronson–Gottesman stabilizer tableau with destabilizers.

use rand::Rng;

use super::PauliString;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// `rows[0..n]` are destabilizers, `rows[n..2n]` stabilizers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerState {
    n: usize,
    rows: Vec<PauliString>,
}

impl StabilizerState {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Self {
        let mut rows = Vec::with_capacity(2 * n);
        for q in 0..n {
            rows.push(PauliString::single(n, q, super::Pauli::X));
        }
        for q in 0..n {
            rows.push(PauliString::single(n, q, super::Pauli::Z));
        }
        StabilizerState { n, rows }
    }

    /// Run the unitary part of `circ` (measurements are skipped) on `|0…0⟩`.
    pub fn from_circuit(circ: &Circuit) -> Result<Self> {
        let mut s = StabilizerState::zero(circ.width);
        for g in circ.unitary_part() {
            s.apply_gate(g)?;
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.rows[self.n..]
    }

    pub fn destabilizers(&self) -> &[PauliString] {
        &self.rows[..self.n]
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        if let Some(&q) = gate.qubits().iter().find(|&&q| q >= self.n) {
            return Err(Error::VertexOutOfRange {
                vertex: q,
                n: self.n,
            });
        }
        if matches!(gate, Gate::Measure { .. }) {
            return Err(Error::InvalidConfig(
                "use measure() for mid-circuit measurement".into(),
            ));
        }
        for row in &mut self.rows {
            row.conjugate(gate);
        }
        Ok(())
    }

    /// Exact `⟨ψ|p|ψ⟩ ∈ {-1, 0, +1}`.
    pub fn expectation(&self, p: &PauliString) -> Result<i8> {
        if p.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: p.len(),
            });
        }
        if self.stabilizers().iter().any(|s| !s.commutes_with(p)) {
            return Ok(0);
        }
        // p = ±∏ stab_i over i whose destabilizer anticommutes with p
        let mut acc = PauliString::identity(self.n);
        for i in 0..self.n {
            if !self.rows[i].commutes_with(p) {
                acc.mul_left_commuting(&self.rows[self.n + i]);
            }
        }
        debug_assert!(acc.same_letters(p));
        Ok(if acc.is_negative() == p.is_negative() {
            1
        } else {
            -1
        })
    }

    /// Projective Z measurement of qubit `q`. `forced` fixes the outcome when
    /// it is random; otherwise it is drawn from `rng`.
    pub fn measure<R: Rng>(&mut self, q: usize, forced: Option<bool>, rng: &mut R) -> bool {
        let n = self.n;
        let zq = PauliString::single(n, q, super::Pauli::Z);
        let pivot = (n..2 * n).find(|&i| !self.rows[i].commutes_with(&zq));
        match pivot {
            Some(p) => {
                let pivot_row = self.rows[p].clone();
                for i in 0..2 * n {
                    if i != p && !self.rows[i].commutes_with(&zq) {
                        let phase = self.rows[i].mul_left_phase(&pivot_row);
                        self.rows[i].negative = phase == 2;
                    }
                }
                let outcome = forced.unwrap_or_else(|| rng.random());
                self.rows[p - n] = pivot_row;
                let mut new = zq;
                new.negative = outcome;
                self.rows[p] = new;
                outcome
            }
            None => self.expectation(&zq).expect("length matches") == -1,
        }
    }

    /// One computational-basis outcome with every random bit set to 0, and
    /// the X-parts of the stabilizer rows. Outcomes of a Z-basis measurement
    /// of all qubits are uniform over `reference ⊕ span(directions)`.
    pub(crate) fn outcome_space(&self) -> (Vec<u64>, Vec<Vec<u64>>) {
        let mut scratch = self.clone();
        let mut rng = crate::rng::rng_from_seed(0);
        let words = self.n.div_ceil(64).max(1);
        let mut reference = vec![0u64; words];
        for q in 0..self.n {
            if scratch.measure(q, Some(false), &mut rng) {
                reference[q / 64] |= 1 << (q % 64);
            }
        }
        let directions = self
            .stabilizers()
            .iter()
            .map(|s| s.x.clone())
            .filter(|x| x.iter().any(|&w| w != 0))
            .collect();
        (reference, directions)
    }
}
