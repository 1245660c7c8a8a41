//! Tensored readout-error mitigation with one 2×2 assignment matrix per
//! qubit.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::circuit::{Circuit, Gate, Quarter};
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::sim::{sample_shots, Counts, NoiseModel};

const SINGULAR_DET: f64 = 1e-9;
/// Widest register for which a dense quasi-distribution is materialized.
pub const DENSE_MITIGATION_LIMIT: usize = 24;

/// Per-qubit `(ε₀, ε₁)`: `ε₀ = P(read 1 | 0)`, `ε₁ = P(read 0 | 1)`.
/// The assignment matrix of qubit `q` is `[[1−ε₀, ε₁], [ε₀, 1−ε₁]]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct TensoredMitigator {
    eps: Vec<(f64, f64)>,
}

impl TryFrom<Vec<(f64, f64)>> for TensoredMitigator {
    type Error = Error;

    fn try_from(eps: Vec<(f64, f64)>) -> Result<Self> {
        TensoredMitigator::new(eps)
    }
}

impl From<TensoredMitigator> for Vec<(f64, f64)> {
    fn from(m: TensoredMitigator) -> Self {
        m.eps
    }
}

impl TensoredMitigator {
    pub fn new(eps: Vec<(f64, f64)>) -> Result<Self> {
        for (q, &(e0, e1)) in eps.iter().enumerate() {
            if !(0.0..=1.0).contains(&e0) || !(0.0..=1.0).contains(&e1) {
                return Err(Error::InvalidConfig(format!(
                    "readout error ({e0}, {e1}) of qubit {q} is not a probability"
                )));
            }
            let det = 1.0 - e0 - e1;
            if det.abs() < SINGULAR_DET {
                return Err(Error::SingularCalibration { qubit: q, det });
            }
        }
        Ok(TensoredMitigator { eps })
    }

    pub fn identity(n: usize) -> Self {
        TensoredMitigator {
            eps: vec![(0.0, 0.0); n],
        }
    }

    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps.is_empty()
    }

    pub fn errors(&self) -> &[(f64, f64)] {
        &self.eps
    }

    /// Assignment matrix of qubit `q`, row = read value, column = true value.
    pub fn assignment(&self, q: usize) -> [[f64; 2]; 2] {
        let (e0, e1) = self.eps[q];
        [[1.0 - e0, e1], [e0, 1.0 - e1]]
    }

    /// Mitigator for classical bits where bit `b` was read from the qubit
    /// at `wires[b]` of this mitigator.
    pub fn permuted(&self, wires: &[usize]) -> Result<Self> {
        wires
            .iter()
            .map(|&w| {
                self.eps.get(w).copied().ok_or(Error::VertexOutOfRange {
                    vertex: w,
                    n: self.eps.len(),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(|eps| TensoredMitigator { eps })
    }

    fn inverse(&self, q: usize) -> [[f64; 2]; 2] {
        let (e0, e1) = self.eps[q];
        let det = 1.0 - e0 - e1;
        [[(1.0 - e1) / det, -e1 / det], [-e0 / det, (1.0 - e0) / det]]
    }

    fn check_width(&self, counts: &Counts) -> Result<u64> {
        let total = counts.total();
        if total == 0 {
            return Err(Error::EmptyCounts);
        }
        for (k, _) in counts.iter() {
            if k.len() != self.eps.len() {
                return Err(Error::WidthMismatch {
                    expected: self.eps.len(),
                    actual: k.len(),
                });
            }
        }
        Ok(total)
    }

    /// `⊗_q A_q⁻¹` applied to the empirical distribution, one qubit at a
    /// time. Entries may be negative; they sum to one.
    pub fn mitigate_counts(&self, counts: &Counts) -> Result<BTreeMap<String, f64>> {
        let total = self.check_width(counts)?;
        let n = self.eps.len();
        if n > DENSE_MITIGATION_LIMIT {
            return Err(Error::TooLarge {
                what: "dense mitigation",
                size: n,
                limit: DENSE_MITIGATION_LIMIT,
            });
        }
        let mut dist = vec![0.0f64; 1 << n];
        for (k, c) in counts.iter() {
            let idx = k
                .bytes()
                .enumerate()
                .fold(0usize, |acc, (b, ch)| acc | (((ch == b'1') as usize) << b));
            dist[idx] += c as f64 / total as f64;
        }
        for q in 0..n {
            let inv = self.inverse(q);
            let mask = 1usize << q;
            for i in 0..dist.len() {
                if i & mask == 0 {
                    let (p0, p1) = (dist[i], dist[i | mask]);
                    dist[i] = inv[0][0] * p0 + inv[0][1] * p1;
                    dist[i | mask] = inv[1][0] * p0 + inv[1][1] * p1;
                }
            }
        }
        Ok(dist
            .into_iter()
            .enumerate()
            .filter(|&(_, p)| p != 0.0)
            .map(|(i, p)| {
                (
                    (0..n)
                        .map(|b| if i >> b & 1 == 1 { '1' } else { '0' })
                        .collect(),
                    p,
                )
            })
            .collect())
    }

    /// Mitigated parity expectation over `support`, computed shot by shot
    /// without forming the quasi-distribution. With zero errors this is
    /// bit-identical to the raw parity expectation.
    pub fn mitigated_expectation(&self, counts: &Counts, support: &[usize]) -> Result<f64> {
        let total = self.check_width(counts)?;
        if let Some(&b) = support.iter().find(|&&b| b >= self.eps.len()) {
            return Err(Error::VertexOutOfRange {
                vertex: b,
                n: self.eps.len(),
            });
        }
        // Σ_b A_q⁻¹[b][r]·(−1)^b for read value r.
        let factors: Vec<[f64; 2]> = support
            .iter()
            .map(|&q| {
                let (e0, e1) = self.eps[q];
                let det = 1.0 - e0 - e1;
                [(1.0 - e1 + e0) / det, -(1.0 - e0 + e1) / det]
            })
            .collect();
        let mut acc = 0.0;
        for (k, c) in counts.iter() {
            let bytes = k.as_bytes();
            let w: f64 = support
                .iter()
                .zip(&factors)
                .map(|(&q, f)| f[(bytes[q] == b'1') as usize])
                .product();
            acc += c as f64 * w;
        }
        Ok(acc / total as f64)
    }
}

/// Clamps to the physical range `[−1, 1]`.
pub fn clamp_expectation(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// `|0…0⟩` and `|1…1⟩` calibration circuits on `n` wires.
pub fn calibration_circuits(n: usize) -> [Circuit; 2] {
    let mut zeros = Circuit::new(n);
    zeros.measure_all();
    let mut ones = Circuit::new(n);
    for q in 0..n {
        // Two quarter turns about X flip the qubit.
        ones.gates.push(Gate::Rx(q, Quarter::Minus));
        ones.gates.push(Gate::Rx(q, Quarter::Minus));
    }
    ones.measure_all();
    [zeros, ones]
}

/// Estimates per-qubit readout errors by running both calibration circuits
/// through `noise`.
pub fn calibrate(noise: &NoiseModel, shots: usize, seed: u64) -> Result<TensoredMitigator> {
    let n = noise.width();
    let [zeros, ones] = calibration_circuits(n);
    let c0 = sample_shots(&zeros, noise, shots, derive_seed(seed, &[0]))?;
    let c1 = sample_shots(&ones, noise, shots, derive_seed(seed, &[1]))?;
    let marginal = |counts: &Counts, q: usize, value: u8| -> f64 {
        let hits: u64 = counts
            .iter()
            .filter(|(k, _)| k.as_bytes()[q] == value)
            .map(|(_, c)| c)
            .sum();
        hits as f64 / counts.total() as f64
    };
    let eps = (0..n)
        .map(|q| (marginal(&c0, q, b'1'), marginal(&c1, q, b'0')))
        .collect();
    TensoredMitigator::new(eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::expectation_from_counts;

    fn counts(pairs: &[(&str, u64)]) -> Counts {
        pairs.iter().map(|&(k, v)| (k, v)).collect()
    }

    #[test]
    fn identity_is_noop() {
        let m = TensoredMitigator::identity(2);
        let c = counts(&[("00", 3), ("11", 1)]);
        let q = m.mitigate_counts(&c).unwrap();
        assert_eq!(q["00"], 0.75);
        assert_eq!(q["11"], 0.25);
        assert_eq!(q.len(), 2);
        for s in [&[0usize, 1][..], &[0], &[]] {
            assert_eq!(
                m.mitigated_expectation(&c, s).unwrap().to_bits(),
                expectation_from_counts(&c, s).unwrap().to_bits()
            );
        }
    }

    #[test]
    fn single_qubit_inverse() {
        let m = TensoredMitigator::new(vec![(0.1, 0.1)]).unwrap();
        let q = m.mitigate_counts(&counts(&[("0", 90), ("1", 10)])).unwrap();
        assert!((q["0"] - 1.0).abs() < 1e-12);
        assert!(q.get("1").map_or(0.0, |p| *p).abs() < 1e-12);
    }

    #[test]
    fn singular_and_invalid() {
        assert!(matches!(
            TensoredMitigator::new(vec![(0.0, 0.0), (0.5, 0.5)]),
            Err(Error::SingularCalibration { qubit: 1, .. })
        ));
        assert!(TensoredMitigator::new(vec![(1.2, 0.0)]).is_err());
        let m = TensoredMitigator::identity(2);
        assert!(matches!(
            m.mitigate_counts(&counts(&[("0", 1)])),
            Err(Error::WidthMismatch { .. })
        ));
        assert!(matches!(
            m.mitigate_counts(&Counts::default()),
            Err(Error::EmptyCounts)
        ));
    }

    #[test]
    fn clamp() {
        assert_eq!(clamp_expectation(1.03), 1.0);
        assert_eq!(clamp_expectation(0.5), 0.5);
        assert_eq!(clamp_expectation(-1.2), -1.0);
    }

    #[test]
    fn json_is_list_of_pairs() {
        let m = TensoredMitigator::new(vec![(0.02, 0.03), (0.0, 0.1)]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[0.02,0.03],[0.0,0.1]]");
        assert_eq!(serde_json::from_str::<TensoredMitigator>(&s).unwrap(), m);
        assert!(serde_json::from_str::<TensoredMitigator>("[[0.5,0.5]]").is_err());
    }

    #[test]
    fn calibration_without_noise_is_identity() {
        let m = calibrate(&NoiseModel::ideal(3), 500, 1).unwrap();
        assert_eq!(m, TensoredMitigator::identity(3));
    }

    #[test]
    fn calibration_recovers_injected_errors() {
        let noise = NoiseModel::ideal(2).with_readout(vec![(0.1, 0.05), (0.02, 0.2)]);
        let shots = 100_000;
        let m = calibrate(&noise, shots, 7).unwrap();
        for (got, want) in m.errors().iter().zip(&noise.readout) {
            for (g, w) in [(got.0, want.0), (got.1, want.1)] {
                let sigma = (w * (1.0 - w) / shots as f64).sqrt();
                assert!((g - w).abs() < 3.0 * sigma, "{g} vs {w}");
            }
        }
    }

    #[test]
    fn dense_and_factorized_routes_agree() {
        let m = TensoredMitigator::new(vec![(0.08, 0.03), (0.1, 0.2), (0.01, 0.04)]).unwrap();
        let c = counts(&[
            ("000", 40),
            ("011", 25),
            ("101", 20),
            ("110", 9),
            ("111", 6),
        ]);
        let q = m.mitigate_counts(&c).unwrap();
        assert!((q.values().sum::<f64>() - 1.0).abs() < 1e-12);
        for support in [vec![0], vec![1, 2], vec![0, 1, 2], vec![]] {
            let dense: f64 = q
                .iter()
                .map(|(k, p)| {
                    let odd = support.iter().filter(|&&b| k.as_bytes()[b] == b'1').count() % 2 == 1;
                    if odd {
                        -p
                    } else {
                        *p
                    }
                })
                .sum();
            let fact = m.mitigated_expectation(&c, &support).unwrap();
            assert!(
                (dense - fact).abs() < 1e-12,
                "{support:?}: {dense} vs {fact}"
            );
        }
    }

    #[test]
    fn permutation_follows_wires() {
        let m = TensoredMitigator::new(vec![(0.1, 0.0), (0.2, 0.0)]).unwrap();
        assert_eq!(
            m.permuted(&[1, 0]).unwrap().errors(),
            [(0.2, 0.0), (0.1, 0.0)]
        );
        assert!(m.permuted(&[2]).is_err());
    }
}
