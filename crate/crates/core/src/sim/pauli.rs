use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::circuit::{Gate, Quarter};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Hermitian Pauli string `±P₀⊗P₁⊗…` in binary symplectic form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    pub(crate) x: Vec<u64>,
    pub(crate) z: Vec<u64>,
    pub(crate) negative: bool,
}

#[inline]
fn words(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            x: vec![0; words(n)],
            z: vec![0; words(n)],
            negative: false,
        }
    }

    pub fn from_letters(letters: &[Pauli], negative: bool) -> Self {
        let mut p = PauliString::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set(q, l);
        }
        p.negative = negative;
        p
    }

    /// Single-qubit Pauli `letter` on qubit `q` of an `n`-qubit register.
    pub fn single(n: usize, q: usize, letter: Pauli) -> Self {
        let mut p = PauliString::identity(n);
        p.set(q, letter);
        p
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.negative = !p.negative;
        p
    }

    /// Same letters with phase `+1`.
    pub fn positive(&self) -> Self {
        let mut p = self.clone();
        p.negative = false;
        p
    }

    #[inline]
    fn xbit(&self, q: usize) -> bool {
        self.x[q / 64] >> (q % 64) & 1 == 1
    }

    #[inline]
    fn zbit(&self, q: usize) -> bool {
        self.z[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn letter(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.xbit(q), self.zbit(q))
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    pub fn set(&mut self, q: usize, letter: Pauli) {
        let (x, z) = letter.bits();
        let (w, b) = (q / 64, q % 64);
        self.x[w] = (self.x[w] & !(1 << b)) | ((x as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((z as u64) << b);
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// Positions of non-identity letters, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&q| self.xbit(q) || self.zbit(q))
            .collect()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let mut parity = 0u32;
        for w in 0..self.x.len() {
            parity ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones() & 1;
        }
        parity == 0
    }

    pub(crate) fn same_letters(&self, other: &PauliString) -> bool {
        self.x == other.x && self.z == other.z
    }

    /// Replace `self` by `other · self` and return the power of `i` picked up
    /// (mod 4) *before* folding in the two signs. Callers that multiply
    /// commuting strings use [`PauliString::mul_left_commuting`].
    pub(crate) fn mul_left_phase(&mut self, other: &PauliString) -> u32 {
        let mut plus = 0u32;
        let mut minus = 0u32;
        for w in 0..self.x.len() {
            let (x1, z1, x2, z2) = (other.x[w], other.z[w], self.x[w], self.z[w]);
            let (px, py, pz) = (x1 & !z1, x1 & z1, !x1 & z1);
            let (qx, qy, qz) = (x2 & !z2, x2 & z2, !x2 & z2);
            plus += ((px & qy) | (py & qz) | (pz & qx)).count_ones();
            minus += ((px & qz) | (py & qx) | (pz & qy)).count_ones();
            self.x[w] ^= x1;
            self.z[w] ^= z1;
        }
        let signs = 2 * (self.negative as u32 + other.negative as u32);
        (signs as i64 + plus as i64 - minus as i64).rem_euclid(4) as u32
    }

    /// `self ← other · self` for commuting strings (the product stays
    /// Hermitian).
    pub(crate) fn mul_left_commuting(&mut self, other: &PauliString) {
        let phase = self.mul_left_phase(other);
        debug_assert!(phase.is_multiple_of(2), "product of anticommuting Paulis");
        self.negative = phase == 2;
    }

    /// Conjugate in place: `P ← U P U†` for the Clifford `gate`.
    /// Measurements and barriers leave `P` unchanged.
    pub fn conjugate(&mut self, gate: &Gate) {
        match *gate {
            Gate::H(q) => self.h(q),
            Gate::S(q) => self.s(q),
            Gate::Sdg(q) => self.sdg(q),
            Gate::Rx(q, Quarter::Minus) => {
                self.h(q);
                self.s(q);
                self.h(q);
            }
            Gate::Rx(q, Quarter::Plus) => {
                self.h(q);
                self.sdg(q);
                self.h(q);
            }
            Gate::Rz(q, Quarter::Plus) => self.sdg(q),
            Gate::Rz(q, Quarter::Minus) => self.s(q),
            Gate::Cnot(c, t) => self.cnot(c, t),
            Gate::Swap(a, b) => {
                let (pa, pb) = (self.letter(a), self.letter(b));
                self.set(a, pb);
                self.set(b, pa);
            }
            Gate::Barrier | Gate::Measure { .. } => {}
        }
    }

    fn h(&mut self, q: usize) {
        let (x, z) = (self.xbit(q), self.zbit(q));
        self.negative ^= x && z;
        self.set(q, Pauli::from_bits(z, x));
    }

    fn s(&mut self, q: usize) {
        let (x, z) = (self.xbit(q), self.zbit(q));
        self.negative ^= x && z;
        self.set(q, Pauli::from_bits(x, z ^ x));
    }

    fn sdg(&mut self, q: usize) {
        let (x, z) = (self.xbit(q), self.zbit(q));
        self.negative ^= x && !z;
        self.set(q, Pauli::from_bits(x, z ^ x));
    }

    fn cnot(&mut self, c: usize, t: usize) {
        let (xc, zc, xt, zt) = (self.xbit(c), self.zbit(c), self.xbit(t), self.zbit(t));
        self.negative ^= xc && zt && !(xt ^ zc);
        self.set(t, Pauli::from_bits(xt ^ xc, zt));
        self.set(c, Pauli::from_bits(xc, zc ^ zt));
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts an optional leading `+`/`-` followed by letters `IXYZ`.
    fn from_str(s: &str) -> Result<Self> {
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let letters = body
            .chars()
            .map(|c| match c {
                'I' | '_' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(Error::Parse(format!("bad Pauli letter `{c}` in `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        Ok(PauliString::from_letters(&letters, negative))
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn parse_display_weight() {
        let a = p("-XIZY");
        assert_eq!(a.to_string(), "-XIZY");
        assert_eq!(a.weight(), 3);
        assert_eq!(a.support(), vec![0, 2, 3]);
        assert_eq!(p("ZXZ").to_string(), "+ZXZ");
        assert!(p("+III").support().is_empty());
        assert!("XQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn commutation() {
        assert!(p("XX").commutes_with(&p("ZZ")));
        assert!(!p("XI").commutes_with(&p("ZI")));
        assert!(p("XZ").commutes_with(&p("ZX")));
    }

    #[test]
    fn products_track_sign() {
        // (XX)(ZZ) = -YY
        let mut a = p("ZZ");
        a.mul_left_commuting(&p("XX"));
        assert_eq!(a.to_string(), "-YY");
        // (XZ)(ZX) = (XZ)(ZX) = (-iY)(iY) = YY
        let mut b = p("ZX");
        b.mul_left_commuting(&p("XZ"));
        assert_eq!(b.to_string(), "+YY");
        let mut c = p("-XZ");
        c.mul_left_commuting(&p("-XZ"));
        assert_eq!(c.to_string(), "+II");
    }

    #[test]
    fn single_qubit_conjugation_table() {
        let cases = [
            (Gate::H(0), "X", "+Z"),
            (Gate::H(0), "Y", "-Y"),
            (Gate::S(0), "X", "+Y"),
            (Gate::S(0), "Y", "-X"),
            (Gate::Sdg(0), "X", "-Y"),
            (Gate::Sdg(0), "Y", "+X"),
            (Gate::Rx(0, Quarter::Minus), "Z", "-Y"),
            (Gate::Rx(0, Quarter::Minus), "Y", "+Z"),
            (Gate::Rx(0, Quarter::Plus), "Z", "+Y"),
            (Gate::Rx(0, Quarter::Plus), "Y", "-Z"),
            (Gate::Rz(0, Quarter::Plus), "X", "-Y"),
            (Gate::Rz(0, Quarter::Minus), "X", "+Y"),
            (Gate::Rx(0, Quarter::Minus), "X", "+X"),
            (Gate::Rz(0, Quarter::Plus), "Z", "+Z"),
        ];
        for (g, before, after) in cases {
            let mut q = p(before);
            q.conjugate(&g);
            assert_eq!(q.to_string(), after, "{g} on {before}");
        }
    }

    #[test]
    fn cnot_conjugation_table() {
        let cases = [
            ("XI", "+XX"),
            ("IX", "+IX"),
            ("ZI", "+ZI"),
            ("IZ", "+ZZ"),
            ("YI", "+YX"),
            ("IY", "+ZY"),
            ("YY", "-XZ"),
        ];
        for (before, after) in cases {
            let mut q = p(before);
            q.conjugate(&Gate::Cnot(0, 1));
            assert_eq!(q.to_string(), after, "CNOT on {before}");
        }
    }

    #[test]
    fn wide_strings_use_multiple_words() {
        let mut a = PauliString::identity(130);
        a.set(129, Pauli::Y);
        a.set(3, Pauli::X);
        assert_eq!(a.weight(), 2);
        assert_eq!(a.support(), vec![3, 129]);
        a.conjugate(&Gate::Swap(3, 129));
        assert_eq!(a.letter(3), Pauli::Y);
        assert_eq!(a.letter(129), Pauli::X);
    }
}
