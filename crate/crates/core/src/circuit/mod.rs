//! Clifford circuits for graph-state preparation and stabilizer measurement.

mod build;
mod route;

pub use build::{build_graph_state_circuit, build_naive_circuit, build_unitary_circuit, lc_block};
pub use route::route_cnots;

use serde::{Deserialize, Serialize};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, LcSequence};
use crate::sim::PauliString;

/// Sign of the exponent of a quarter-turn rotation: `Plus` is
/// `e^{+iπ/4 σ}`, `Minus` is `e^{-iπ/4 σ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quarter {
    Plus,
    Minus,
}

impl Quarter {
    fn symbol(self) -> char {
        match self {
            Quarter::Plus => '+',
            Quarter::Minus => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    /// `e^{±iπ/4 X}`.
    Rx(usize, Quarter),
    /// `e^{±iπ/4 Z}`.
    Rz(usize, Quarter),
    Cnot(usize, usize),
    Swap(usize, usize),
    Barrier,
    Measure {
        qubit: usize,
        bit: usize,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::Rx(q, _) | Gate::Rz(q, _) => vec![q],
            Gate::Cnot(a, b) | Gate::Swap(a, b) => vec![a, b],
            Gate::Measure { qubit, .. } => vec![qubit],
            Gate::Barrier => vec![],
        }
    }

    pub fn is_single_qubit_unitary(&self) -> bool {
        matches!(
            self,
            Gate::H(_) | Gate::S(_) | Gate::Sdg(_) | Gate::Rx(..) | Gate::Rz(..)
        )
    }

    /// Relabel qubit operands through `f`; classical bits are untouched.
    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(f(q)),
            Gate::S(q) => Gate::S(f(q)),
            Gate::Sdg(q) => Gate::Sdg(f(q)),
            Gate::Rx(q, s) => Gate::Rx(f(q), s),
            Gate::Rz(q, s) => Gate::Rz(f(q), s),
            Gate::Cnot(a, b) => Gate::Cnot(f(a), f(b)),
            Gate::Swap(a, b) => Gate::Swap(f(a), f(b)),
            Gate::Barrier => Gate::Barrier,
            Gate::Measure { qubit, bit } => Gate::Measure {
                qubit: f(qubit),
                bit,
            },
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "h {q}"),
            Gate::S(q) => write!(f, "s {q}"),
            Gate::Sdg(q) => write!(f, "sdg {q}"),
            Gate::Rx(q, s) => write!(f, "rx{} {q}", s.symbol()),
            Gate::Rz(q, s) => write!(f, "rz{} {q}", s.symbol()),
            Gate::Cnot(c, t) => write!(f, "cx {c} {t}"),
            Gate::Swap(a, b) => write!(f, "swap {a} {b}"),
            Gate::Barrier => write!(f, "barrier"),
            Gate::Measure { qubit, bit } => write!(f, "measure {qubit} -> {bit}"),
        }
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(line: &str) -> Result<Gate> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |i: usize| -> Result<usize> {
            toks.get(i)
                .ok_or_else(|| Error::Parse(format!("missing operand in `{line}`")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad operand in `{line}`")))
        };
        let name = *toks
            .first()
            .ok_or_else(|| Error::Parse("empty gate line".into()))?;
        let arity = match name {
            "barrier" => 1,
            "cx" | "swap" => 3,
            "measure" => 4,
            _ => 2,
        };
        let gate = match name {
            "h" => Gate::H(num(1)?),
            "s" => Gate::S(num(1)?),
            "sdg" => Gate::Sdg(num(1)?),
            "rx+" => Gate::Rx(num(1)?, Quarter::Plus),
            "rx-" => Gate::Rx(num(1)?, Quarter::Minus),
            "rz+" => Gate::Rz(num(1)?, Quarter::Plus),
            "rz-" => Gate::Rz(num(1)?, Quarter::Minus),
            "cx" => Gate::Cnot(num(1)?, num(2)?),
            "swap" => Gate::Swap(num(1)?, num(2)?),
            "barrier" => Gate::Barrier,
            "measure" => {
                if toks.get(2) != Some(&"->") {
                    return Err(Error::Parse(format!(
                        "expected `measure q -> b`, got `{line}`"
                    )));
                }
                Gate::Measure {
                    qubit: num(1)?,
                    bit: num(3)?,
                }
            }
            other => return Err(Error::NonCliffordGate(other.to_string())),
        };
        if toks.len() != arity {
            return Err(Error::Parse(format!("wrong operand count in `{line}`")));
        }
        Ok(gate)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Unitary,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Unitary => "unitary",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "naive" => Ok(Method::Naive),
            "unitary" => Ok(Method::Unitary),
            _ => Err(Error::Parse(format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CircuitMeta {
    pub method: Option<Method>,
    /// Graph whose state the circuit was derived from (the induced subgraph).
    pub source_graph: Option<Graph>,
    /// Graph whose state the circuit prepares.
    pub target_graph: Option<Graph>,
    pub lc_seq: LcSequence,
    /// `hardware_map[slot]` is the hardware qubit of circuit wire `slot`.
    pub hardware_map: Vec<usize>,
    /// `final_layout[logical]` is the wire holding logical qubit after routing.
    pub final_layout: Vec<usize>,
}

/// An ordered list of Clifford gates on `width` wires.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub width: usize,
    pub gates: Vec<Gate>,
    pub meta: CircuitMeta,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Circuit {
            width,
            gates: Vec::new(),
            meta: CircuitMeta {
                final_layout: (0..width).collect(),
                ..CircuitMeta::default()
            },
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&q) = gate.qubits().iter().find(|&&q| q >= self.width) {
            return Err(Error::VertexOutOfRange {
                vertex: q,
                n: self.width,
            });
        }
        if let Gate::Cnot(a, b) | Gate::Swap(a, b) = gate {
            if a == b {
                return Err(Error::InvalidEdge(a, b));
            }
        }
        if let Gate::Measure { bit, .. } = gate {
            if bit >= self.width {
                return Err(Error::VertexOutOfRange {
                    vertex: bit,
                    n: self.width,
                });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// CNOT count with each SWAP charged as three CNOTs.
    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .map(|g| match g {
                Gate::Cnot(..) => 1,
                Gate::Swap(..) => 3,
                _ => 0,
            })
            .sum()
    }

    pub fn count(&self, pred: impl Fn(&Gate) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(g)).count()
    }

    /// Append `measure q -> q` on every wire.
    pub fn measure_all(&mut self) {
        for q in 0..self.width {
            self.gates.push(Gate::Measure { qubit: q, bit: q });
        }
    }

    /// `measured_by[bit] = wire`, for circuits that measure every bit once.
    pub fn measurement_map(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.width];
        for g in &self.gates {
            if let Gate::Measure { qubit, bit } = *g {
                out[bit] = Some(qubit);
            }
        }
        out
    }

    /// Index of the first gate of the trailing measurement block.
    fn measurement_start(&self) -> usize {
        let mut i = self.gates.len();
        while i > 0 && matches!(self.gates[i - 1], Gate::Measure { .. }) {
            i -= 1;
        }
        i
    }

    /// Unitary prefix (everything before the trailing measurements).
    pub fn unitary_part(&self) -> &[Gate] {
        &self.gates[..self.measurement_start()]
    }

    /// Copy of this circuit that measures `p` instead of the computational
    /// basis: basis changes are inserted before the trailing measurement block,
    /// on the wire that feeds each classical bit. The sign of `p` is ignored.
    pub fn for_stabilizer(&self, p: &PauliString) -> Result<Circuit> {
        if p.len() != self.width {
            return Err(Error::LengthMismatch {
                expected: self.width,
                actual: p.len(),
            });
        }
        let wires = self.measurement_map();
        let start = self.measurement_start();
        let mut gates: Vec<Gate> = self.gates[..start].to_vec();
        let rotations = crate::witness::measurement_basis(p);
        if !rotations.is_empty() {
            gates.push(Gate::Barrier);
        }
        for g in rotations {
            let wire = |bit: usize| wires[bit].expect("every bit measured");
            gates.push(g.map_qubits(wire));
        }
        gates.extend_from_slice(&self.gates[start..]);
        Ok(Circuit {
            width: self.width,
            gates,
            meta: self.meta.clone(),
        })
    }

    /// Plain-text dump, one gate per line, preceded by `width N`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        writeln!(s, "width {}", self.width).unwrap();
        for g in &self.gates {
            writeln!(s, "{g}").unwrap();
        }
        s
    }

    /// Parse a dump produced by [`Circuit::dump`]. Blank lines and `#`
    /// comments are ignored.
    pub fn parse_dump(text: &str) -> Result<Circuit> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty dump".into()))?;
        let width = header
            .strip_prefix("width ")
            .and_then(|w| w.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header `{header}`")))?;
        let mut c = Circuit::new(width);
        for line in lines {
            c.push(line.parse()?)?;
        }
        Ok(c)
    }
}
