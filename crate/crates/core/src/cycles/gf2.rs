//! Incremental Gaussian elimination over GF(2).

use std::collections::BTreeMap;

use super::CycleVector;

/// Dense bit row over the member universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(bits: usize) -> Self {
        BitRow {
            words: vec![0; bits.div_ceil(64)],
        }
    }

    pub fn from_indices(bits: usize, indices: &[usize]) -> Self {
        let mut row = BitRow::zeros(bits);
        for &i in indices {
            row.flip(i);
        }
        row
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the highest set bit.
    pub fn leading(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Echelon table keyed by leading bit. Each stored row has a distinct
/// leading bit, so reducing a candidate touches each pivot at most once.
#[derive(Debug, Clone)]
pub struct IndependenceTable {
    bits: usize,
    pivots: BTreeMap<usize, BitRow>,
}

impl IndependenceTable {
    pub fn new(bits: usize) -> Self {
        IndependenceTable {
            bits,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, mut row: BitRow) -> BitRow {
        while let Some(lead) = row.leading() {
            match self.pivots.get(&lead) {
                Some(p) => row.xor_assign(p),
                None => break,
            }
        }
        row
    }

    /// True iff `members` is outside the span of the stored rows.
    pub fn is_independent(&self, members: &[usize]) -> bool {
        !self.reduce(BitRow::from_indices(self.bits, members)).is_zero()
    }

    /// Insert the row if independent; returns whether it was inserted.
    pub fn insert(&mut self, members: &[usize]) -> bool {
        let row = self.reduce(BitRow::from_indices(self.bits, members));
        match row.leading() {
            Some(lead) => {
                self.pivots.insert(lead, row);
                true
            }
            None => false,
        }
    }
}

/// True iff `candidate` is not in the GF(2) span of `basis`.
pub fn is_independent(basis: &[CycleVector], candidate: &CycleVector) -> bool {
    let bits = basis
        .iter()
        .chain(std::iter::once(candidate))
        .flat_map(|c| c.members().last().copied())
        .max()
        .map_or(0, |m| m + 1);
    let mut table = IndependenceTable::new(bits);
    for c in basis {
        table.insert(c.members());
    }
    table.is_independent(candidate.members())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_bit_across_words() {
        let r = BitRow::from_indices(130, &[3, 70, 129]);
        assert_eq!(r.leading(), Some(129));
        assert_eq!(r.count_ones(), 3);
        assert!(r.get(70) && !r.get(71));
    }

    #[test]
    fn sum_is_dependent() {
        let mut t = IndependenceTable::new(5);
        assert!(t.insert(&[0, 1, 2]));
        assert!(t.insert(&[2, 3, 4]));
        assert!(!t.is_independent(&[0, 1, 3, 4]));
        assert!(t.is_independent(&[0, 4]));
        assert!(!t.insert(&[]));
        assert_eq!(t.rank(), 2);
    }
}
