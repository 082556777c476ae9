use std::collections::BTreeSet;

use bitvec::prelude::*;

/// Moduli up to this size use a dense bitset.
pub const DENSE_LIMIT: u64 = 1 << 16;

/// A set of residues modulo `q`.
///
/// Dense bitset for `q ≤ 2¹⁶`, ordered set above; both behave identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSet {
    q: u64,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Dense(BitVec),
    Sparse(BTreeSet<u64>),
}

impl ResidueSet {
    pub fn empty(q: u64) -> Self {
        assert!(q >= 1, "modulus must be positive");
        let repr = if q <= DENSE_LIMIT {
            Repr::Dense(bitvec![0; q as usize])
        } else {
            Repr::Sparse(BTreeSet::new())
        };
        ResidueSet { q, repr }
    }

    /// Every residue mod `q`.
    pub fn full(q: u64) -> Self {
        let mut s = Self::empty(q);
        match &mut s.repr {
            Repr::Dense(bits) => bits.fill(true),
            Repr::Sparse(set) => set.extend(0..q),
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = u64>>(q: u64, items: I) -> Self {
        let mut s = Self::empty(q);
        for r in items {
            s.insert(r);
        }
        s
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Inserts `r mod q`.
    pub fn insert(&mut self, r: u64) {
        let r = r % self.q;
        match &mut self.repr {
            Repr::Dense(bits) => bits.set(r as usize, true),
            Repr::Sparse(set) => {
                set.insert(r);
            }
        }
    }

    /// Membership of the class of an arbitrary integer.
    pub fn contains(&self, n: i64) -> bool {
        let r = n.rem_euclid(self.q as i64) as u64;
        self.contains_residue(r)
    }

    pub fn contains_residue(&self, r: u64) -> bool {
        match &self.repr {
            Repr::Dense(bits) => bits[(r % self.q) as usize],
            Repr::Sparse(set) => set.contains(&(r % self.q)),
        }
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Dense(bits) => bits.count_ones(),
            Repr::Sparse(set) => set.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Residues in increasing order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match &self.repr {
            Repr::Dense(bits) => Box::new(bits.iter_ones().map(|i| i as u64)),
            Repr::Sparse(set) => Box::new(set.iter().copied()),
        }
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// Image under reduction to a divisor `d | q`.
    pub fn project(&self, d: u64) -> ResidueSet {
        assert!(d >= 1 && self.q.is_multiple_of(d), "{d} does not divide {}", self.q);
        ResidueSet::from_iter(d, self.iter().map(|r| r % d))
    }

    /// Full preimage in `ℤ/mℤ` for a multiple `m` of `q`.
    pub fn lift(&self, m: u64) -> ResidueSet {
        assert!(m.is_multiple_of(self.q), "{m} is not a multiple of {}", self.q);
        let k = m / self.q;
        ResidueSet::from_iter(m, self.iter().flat_map(|r| (0..k).map(move |j| r + j * self.q)))
    }
}
