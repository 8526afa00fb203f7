//! Dynamic-width bitsets over 1-indexed vertex labels.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};
use smallvec::SmallVec;

const WORD: usize = 64;

/// A finite set of vertices `{1, 2, ...}` stored as a bitmask.
///
/// Vertex `v` lives at bit `v - 1`. Trailing zero words are always trimmed, so
/// two equal sets have identical storage and `Hash`/`Eq` are structural. Sets
/// over at most 128 vertices never touch the heap.
///
/// The ordering is lexicographic on the ascending element lists, so
/// `{1,2} < {1,2,5} < {1,3} < {2}`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: SmallVec<[u64; 2]>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        let mut words: SmallVec<[u64; 2]> = SmallVec::new();
        let whole = n / WORD;
        let rest = n % WORD;
        words.resize(whole, u64::MAX);
        if rest > 0 {
            words.push((1u64 << rest) - 1);
        }
        Self { words }
    }

    /// `{lo, ..., hi}`; empty when `lo > hi`.
    pub fn range(lo: usize, hi: usize) -> Self {
        debug_assert!(lo >= 1);
        if lo > hi {
            return Self::new();
        }
        Self::full(hi).difference(&Self::full(lo - 1))
    }

    /// Builds a set from 1-indexed labels. Label `0` panics; duplicates collapse.
    pub fn from_slice(vertices: &[usize]) -> Self {
        vertices.iter().copied().collect()
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v >= 1, "vertex labels are 1-indexed");
        let (w, b) = ((v - 1) / WORD, (v - 1) % WORD);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if v == 0 {
            return false;
        }
        let (w, b) = ((v - 1) / WORD, (v - 1) % WORD);
        if w >= self.words.len() || self.words[w] & (1 << b) == 0 {
            return false;
        }
        self.words[w] &= !(1 << b);
        self.trim();
        true
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        if v == 0 {
            return false;
        }
        let (w, b) = ((v - 1) / WORD, (v - 1) % WORD);
        w < self.words.len() && self.words[w] & (1 << b) != 0
    }

    /// Copy with `v` added.
    pub fn with(&self, v: usize) -> Self {
        let mut s = self.clone();
        s.insert(v);
        s
    }

    /// Copy with `v` removed.
    pub fn without(&self, v: usize) -> Self {
        let mut s = self.clone();
        s.remove(v);
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize + 1)
    }

    pub fn last(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * WORD + (WORD - last.leading_zeros() as usize))
    }

    /// Removes and returns the smallest element.
    pub fn pop_first(&mut self) -> Option<usize> {
        let v = self.first()?;
        self.remove(v);
        Some(v)
    }

    pub fn union(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, o) in words.iter_mut().zip(short.words.iter()) {
            *w |= o;
        }
        Self { words }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = Self {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a & b)
                .collect(),
        };
        s.trim();
        s
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (w, o) in s.words.iter_mut().zip(other.words.iter()) {
            *w &= !o;
        }
        s.trim();
        s
    }

    /// `[n] \ self`.
    pub fn complement(&self, n: usize) -> Self {
        Self::full(n).difference(self)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.len() <= other.words.len()
            && self
                .words
                .iter()
                .zip(other.words.iter())
                .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    /// Number of elements strictly below `v`.
    pub fn rank_of(&self, v: usize) -> usize {
        let (w, b) = ((v - 1) / WORD, (v - 1) % WORD);
        let mut r: usize = self
            .words
            .iter()
            .take(w)
            .map(|x| x.count_ones() as usize)
            .sum();
        if w < self.words.len() {
            r += (self.words[w] & ((1u64 << b) - 1)).count_ones() as usize;
        }
        r
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// True iff every element lies in `{1..n}`.
    pub fn within(&self, n: usize) -> bool {
        self.last().is_none_or(|m| m <= n)
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + b + 1);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Self::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        // m = min of the symmetric difference; the shared prefix is everything below m.
        let sym = self.difference(other).union(&other.difference(self));
        let m = sym.first().expect("sets differ");
        let (has, lacks) = if self.contains(m) {
            (Ordering::Less, Ordering::Greater)
        } else {
            (Ordering::Greater, Ordering::Less)
        };
        let owner_lacking = if self.contains(m) { other } else { self };
        // The set lacking m is smaller only if it has nothing above m (it is a prefix).
        if owner_lacking.last().is_some_and(|x| x > m) {
            has
        } else {
            lacks
        }
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_ops() {
        let mut s = VertexSet::from_slice(&[3, 1, 70]);
        assert_eq!(s.to_vec(), vec![1, 3, 70]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.first(), Some(1));
        assert_eq!(s.last(), Some(70));
        assert!(s.remove(70));
        assert_eq!(s, VertexSet::from_slice(&[1, 3]));
        assert_eq!(VertexSet::full(3).to_vec(), vec![1, 2, 3]);
        assert_eq!(VertexSet::full(64).len(), 64);
        assert_eq!(VertexSet::full(65).last(), Some(65));
        assert_eq!(VertexSet::range(4, 6).to_vec(), vec![4, 5, 6]);
        assert!(VertexSet::range(5, 4).is_empty());
        assert_eq!(VertexSet::from_slice(&[2, 5, 9]).rank_of(9), 2);
        assert_eq!(
            VertexSet::from_slice(&[1, 2]).complement(4).to_vec(),
            vec![3, 4]
        );
    }

    #[test]
    fn lexicographic_order() {
        let s = |v: &[usize]| VertexSet::from_slice(v);
        assert!(s(&[1, 2]) < s(&[1, 2, 5]));
        assert!(s(&[1, 2, 5]) < s(&[1, 3]));
        assert!(s(&[1, 3]) < s(&[2]));
        assert!(s(&[]) < s(&[1]));
        assert!(s(&[2, 3]) > s(&[1, 9]));
    }

    proptest! {
        #[test]
        fn order_matches_sorted_lists(a in proptest::collection::btree_set(1usize..140, 0..8),
                                      b in proptest::collection::btree_set(1usize..140, 0..8)) {
            let av: Vec<usize> = a.iter().copied().collect();
            let bv: Vec<usize> = b.iter().copied().collect();
            let sa = VertexSet::from_slice(&av);
            let sb = VertexSet::from_slice(&bv);
            prop_assert_eq!(sa.cmp(&sb), av.cmp(&bv));
            prop_assert_eq!(sa.to_vec(), av);
            prop_assert_eq!(sa.is_subset(&sb), a.is_subset(&b));
            let uni: Vec<usize> = a.union(&b).copied().collect();
            prop_assert_eq!(sa.union(&sb).to_vec(), uni);
            let inter: Vec<usize> = a.intersection(&b).copied().collect();
            prop_assert_eq!(sa.intersection(&sb).to_vec(), inter);
        }
    }
}
