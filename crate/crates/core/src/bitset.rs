//! Fixed-universe index sets packed into `u64` words.
//!
//! Extents, intents and incidence rows are all sets of small indices, and
//! every derivation operator reduces to word-wise AND, so the whole crate
//! stands on this type.

use std::cmp::Ordering;
use std::fmt;

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    universe: usize,
    words: Vec<u64>,
}

impl BitSet {
    /// The empty set over a universe of `universe` indices.
    pub fn empty(universe: usize) -> Self {
        BitSet { universe, words: vec![0; universe.div_ceil(WORD_BITS)] }
    }

    /// The full set `{0, 1, .., universe-1}`.
    pub fn full(universe: usize) -> Self {
        let mut set = BitSet { universe, words: vec![!0u64; universe.div_ceil(WORD_BITS)] };
        set.mask_tail();
        set
    }

    /// Builds a set from explicit indices. Panics on an index outside the
    /// universe; callers validate untrusted indices first.
    pub fn from_indices(universe: usize, indices: &[usize]) -> Self {
        let mut set = Self::empty(universe);
        for &i in indices {
            set.insert(i);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Number of elements in the set.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "index {i} outside universe {}", self.universe);
        self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.universe {
            self.words[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn and(&self, other: &BitSet) -> BitSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn or(&self, other: &BitSet) -> BitSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    /// True when `self ⊆ other`.
    pub fn is_subset(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Smallest element of `self \ other`, if any.
    pub fn difference_min(&self, other: &BitSet) -> Option<usize> {
        debug_assert_eq!(self.universe, other.universe);
        for (w, (a, b)) in self.words.iter().zip(&other.words).enumerate() {
            let d = a & !b;
            if d != 0 {
                return Some(w * WORD_BITS + d.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn min_element(&self) -> Option<usize> {
        for (w, &a) in self.words.iter().enumerate() {
            if a != 0 {
                return Some(w * WORD_BITS + a.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Canonical enumeration order on subsets: sets are compared at the
    /// smallest index where they differ, and the set containing that index
    /// is the greater one. Equivalent to reading characteristic vectors as
    /// binary numbers with index 0 as the most significant digit.
    pub fn lectic_cmp(&self, other: &BitSet) -> Ordering {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter().zip(&other.words) {
            let d = a ^ b;
            if d != 0 {
                let bit = d.trailing_zeros();
                return if (b >> bit) & 1 == 1 { Ordering::Less } else { Ordering::Greater };
            }
        }
        Ordering::Equal
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { set: self, word_idx: 0, current: self.words.first().copied().unwrap_or(0) }
    }

    /// Elements as a plain vector, mostly for tests and display.
    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn mask_tail(&mut self) {
        let used = self.universe % WORD_BITS;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
    }
}

pub struct Iter<'a> {
    set: &'a BitSet,
    word_idx: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.set.words.len() {
                return None;
            }
            self.current = self.set.words[self.word_idx];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word_idx * WORD_BITS + bit)
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
