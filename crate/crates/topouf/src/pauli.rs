//! Binary symplectic representation of n-qubit Pauli operators.
//!
//! A Pauli is stored as a pair of bit masks (x, z); Y on qubit j means both
//! masks are set at j. Global phases are ignored throughout: they never
//! affect syndromes or logical-failure classification.

use serde::{Deserialize, Serialize};

/// Fixed-length bit vector backed by u64 words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut b = Bits::zeros(len);
        for i in indices {
            b.set(i, true);
        }
        b
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    pub fn xor_assign(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the overlap |self AND other|, the workhorse of symplectic products.
    pub fn and_parity(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + bit)
                }
            })
        })
    }
}

impl Serialize for Bits {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter_ones())
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        // Serialized as a sparse index list; length is the max index + 1,
        // which is enough for the debug-dump use cases.
        let indices: Vec<usize> = Vec::deserialize(d)?;
        let len = indices.iter().max().map_or(0, |m| m + 1);
        Ok(Bits::from_indices(len, indices))
    }
}

/// One of the three nontrivial single-qubit Paulis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliKind {
    X,
    Y,
    Z,
}

impl PauliKind {
    pub const ALL: [PauliKind; 3] = [PauliKind::X, PauliKind::Y, PauliKind::Z];

    #[inline]
    pub fn has_x(self) -> bool {
        matches!(self, PauliKind::X | PauliKind::Y)
    }

    #[inline]
    pub fn has_z(self) -> bool {
        matches!(self, PauliKind::Z | PauliKind::Y)
    }
}

/// An n-qubit Pauli operator, phase ignored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliOp {
    pub x_mask: Bits,
    pub z_mask: Bits,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        PauliOp {
            x_mask: Bits::zeros(n),
            z_mask: Bits::zeros(n),
        }
    }

    pub fn single(n: usize, qubit: usize, kind: PauliKind) -> Self {
        let mut p = PauliOp::identity(n);
        p.apply(qubit, kind);
        p
    }

    pub fn from_components<I: IntoIterator<Item = (usize, PauliKind)>>(
        n: usize,
        components: I,
    ) -> Self {
        let mut p = PauliOp::identity(n);
        for (q, kind) in components {
            p.apply(q, kind);
        }
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.x_mask.len()
    }

    /// Multiplies `kind` on qubit `q` into this operator (group product, mod phase).
    pub fn apply(&mut self, q: usize, kind: PauliKind) {
        if kind.has_x() {
            self.x_mask.flip(q);
        }
        if kind.has_z() {
            self.z_mask.flip(q);
        }
    }

    /// Component on qubit `q`, or None for identity.
    pub fn component(&self, q: usize) -> Option<PauliKind> {
        match (self.x_mask.get(q), self.z_mask.get(q)) {
            (false, false) => None,
            (true, false) => Some(PauliKind::X),
            (true, true) => Some(PauliKind::Y),
            (false, true) => Some(PauliKind::Z),
        }
    }

    pub fn weight(&self) -> usize {
        let mut w = 0usize;
        for i in 0..self.x_mask.words.len() {
            w += (self.x_mask.words[i] | self.z_mask.words[i]).count_ones() as usize;
        }
        w
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.num_qubits())
            .filter(|&q| self.x_mask.get(q) || self.z_mask.get(q))
            .collect()
    }

    /// Group product up to phase: component-wise XOR of the two mask pairs.
    pub fn mul_assign(&mut self, other: &PauliOp) {
        self.x_mask.xor_assign(&other.x_mask);
        self.z_mask.xor_assign(&other.z_mask);
    }

    pub fn product(&self, other: &PauliOp) -> PauliOp {
        let mut p = self.clone();
        p.mul_assign(other);
        p
    }

    /// Symplectic commutation: true iff the operators commute.
    pub fn commutes_with(&self, other: &PauliOp) -> bool {
        !(self.x_mask.and_parity(&other.z_mask) ^ self.z_mask.and_parity(&other.x_mask))
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask.is_zero() && self.z_mask.is_zero()
    }
}
