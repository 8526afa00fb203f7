//! Block words: a compact description of faces of `Δ_k^t(W_n)` that avoid
//! vertex 1, by splitting the complement into `k` short runs.
//!
//! A word has anchors `1 = i_0 < i_1 < ... < i_{k-1}` with `i_j >= i_{j-1} + 3`
//! and `i_{k-1} <= n - 2`, and for each anchor an offset set `I_j ⊆ {0,1,2}`
//! containing 0. The block `B_j` is `{i_j + t : t ∈ I_j}`, and the word stands
//! for the face `[n] \ (B_0 ∪ ... ∪ B_{k-1})`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::set::VertexSet;

/// Offset sets as bitmasks over `{0,1,2}`; bit 0 is always set.
const OFFSET_MASKS: [u8; 4] = [0b001, 0b011, 0b101, 0b111];

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockWord {
    n: usize,
    anchors: Vec<usize>,
    offsets: Vec<u8>,
}

impl BlockWord {
    /// Builds a word from anchors and offset lists, checking every invariant.
    pub fn new(n: usize, blocks: &[(usize, &[u8])]) -> Result<Self> {
        let mut anchors = Vec::with_capacity(blocks.len());
        let mut offsets = Vec::with_capacity(blocks.len());
        for &(anchor, offs) in blocks {
            let mut mask = 0u8;
            for &t in offs {
                if t > 2 {
                    return Err(Error::InvalidBlockWord(format!(
                        "offset {t} outside {{0,1,2}}"
                    )));
                }
                mask |= 1 << t;
            }
            anchors.push(anchor);
            offsets.push(mask);
        }
        let w = Self {
            n,
            anchors,
            offsets,
        };
        w.validate()?;
        Ok(w)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidBlockWord(msg));
        if self.anchors.is_empty() {
            return bad("a word needs at least one block".into());
        }
        if self.anchors[0] != 1 {
            return bad(format!("first anchor is {}, not 1", self.anchors[0]));
        }
        for j in 1..self.anchors.len() {
            if self.anchors[j] < self.anchors[j - 1] + 3 {
                return bad(format!(
                    "anchors {} and {} are closer than 3",
                    self.anchors[j - 1],
                    self.anchors[j]
                ));
            }
        }
        let last = *self.anchors.last().expect("nonempty");
        if last + 2 > self.n {
            return bad(format!(
                "last anchor {last} exceeds n - 2 = {}",
                self.n as isize - 2
            ));
        }
        for (&a, &m) in self.anchors.iter().zip(&self.offsets) {
            if m & 1 == 0 || m > 0b111 {
                return bad(format!(
                    "offsets at anchor {a} must contain 0 and lie in {{0,1,2}}"
                ));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of blocks.
    pub fn k(&self) -> usize {
        self.anchors.len()
    }

    pub fn anchors(&self) -> &[usize] {
        &self.anchors
    }

    /// Offsets of block `j`, ascending.
    pub fn offsets(&self, j: usize) -> Vec<u8> {
        (0..3).filter(|t| self.offsets[j] >> t & 1 == 1).collect()
    }

    /// Block `j` as a vertex set.
    pub fn block(&self, j: usize) -> VertexSet {
        self.offsets(j)
            .into_iter()
            .map(|t| self.anchors[j] + t as usize)
            .collect()
    }

    fn covered(&self) -> VertexSet {
        (0..self.k()).fold(VertexSet::new(), |acc, j| acc.union(&self.block(j)))
    }
}

/// The face `[n] \ (B_0 ∪ ... ∪ B_{k-1})`.
pub fn decode(w: &BlockWord) -> Result<VertexSet> {
    w.validate()?;
    Ok(w.covered().complement(w.n))
}

/// Greedy inverse of [`decode`]: anchors are taken left to right as the
/// smallest complement element not yet covered. `None` when `1 ∈ s`, when the
/// complement does not split into exactly `k` blocks, or when the result
/// breaks a word invariant.
pub fn encode(s: &VertexSet, n: usize, k: usize) -> Option<BlockWord> {
    if s.contains(1) || !s.within(n) {
        return None;
    }
    let mut rest = s.complement(n);
    let mut anchors = Vec::new();
    let mut offsets = Vec::new();
    while let Some(a) = rest.first() {
        let mut mask = 0u8;
        for t in 0..3 {
            if rest.remove(a + t) {
                mask |= 1 << t;
            }
        }
        anchors.push(a);
        offsets.push(mask);
        if anchors.len() > k {
            return None;
        }
    }
    let w = BlockWord {
        n,
        anchors,
        offsets,
    };
    (w.k() == k && w.validate().is_ok()).then_some(w)
}

/// All words with `k` blocks on `[n]`, in lexicographic order of
/// `(anchors, offsets)`.
pub fn all_words(n: usize, k: usize) -> Vec<BlockWord> {
    let mut out = Vec::new();
    for anchors in anchor_tuples(n, k) {
        push_offset_choices(n, &anchors, &mut Vec::new(), &mut out);
    }
    out
}

fn anchor_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let lo = cur.last().map_or(1, |&a| a + 3);
        let hi = n.saturating_sub(2);
        // room for the remaining anchors, 3 apart
        let remaining = k - cur.len() - 1;
        for a in lo..=hi.saturating_sub(3 * remaining) {
            if cur.is_empty() && a != 1 {
                break;
            }
            cur.push(a);
            rec(n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 && n >= 3 {
        rec(n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn push_offset_choices(n: usize, anchors: &[usize], cur: &mut Vec<u8>, out: &mut Vec<BlockWord>) {
    let j = cur.len();
    if j == anchors.len() {
        out.push(BlockWord {
            n,
            anchors: anchors.to_vec(),
            offsets: cur.clone(),
        });
        return;
    }
    for m in OFFSET_MASKS {
        let top = anchors[j] + (7 - m.leading_zeros() as usize);
        if top > n {
            continue;
        }
        cur.push(m);
        push_offset_choices(n, anchors, cur, out);
        cur.pop();
    }
}

/// Faces `σ` of `Δ_k^t(W_n)` with `1 ∉ σ` and `σ ∪ {1}` not a face, generated
/// from block words and kept when the two face conditions hold.
pub fn enumerate_m1_unmatched(g: &Graph, k: usize) -> Result<Vec<(BlockWord, VertexSet)>> {
    if !g.is_squared_cycle() {
        return Err(Error::NotSquaredCycle);
    }
    let n = g.n();
    if n < 3 * k || k == 0 {
        return Err(Error::VoidComplex);
    }
    let tuples = anchor_tuples(n, k);
    let found: Vec<Vec<(BlockWord, VertexSet)>> = tuples
        .par_iter()
        .map(|anchors| {
            let mut words = Vec::new();
            push_offset_choices(n, anchors, &mut Vec::new(), &mut words);
            words
                .into_iter()
                .filter_map(|w| {
                    let covered = w.covered();
                    let in_complex = g.has_independent_set(&covered, k);
                    let with_one_absent = !g.has_independent_set(&covered.without(1), k);
                    (in_complex && with_one_absent).then(|| {
                        let sigma = covered.complement(n);
                        (w, sigma)
                    })
                })
                .collect()
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

impl fmt::Display for BlockWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b")?;
        for j in 0..self.k() {
            let digits: String = self
                .offsets(j)
                .iter()
                .map(|t| char::from(b'0' + t))
                .collect();
            write!(f, "({}:{digits})", self.anchors[j])?;
        }
        write!(f, "@n={}", self.n)
    }
}

impl FromStr for BlockWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed block word `{s}`"));
        let body = s.trim().strip_prefix('b').ok_or_else(bad)?;
        let (blocks, n) = body.split_once("@n=").ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let mut parsed: Vec<(usize, Vec<u8>)> = Vec::new();
        for chunk in blocks.split(')').filter(|c| !c.is_empty()) {
            let inner = chunk.strip_prefix('(').ok_or_else(bad)?;
            let (anchor, digits) = inner.split_once(':').ok_or_else(bad)?;
            let anchor: usize = anchor.parse().map_err(|_| bad())?;
            let offs = digits
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
                .collect::<Result<Vec<u8>>>()?;
            parsed.push((anchor, offs));
        }
        let refs: Vec<(usize, &[u8])> = parsed.iter().map(|(a, o)| (*a, o.as_slice())).collect();
        BlockWord::new(n, &refs)
    }
}

impl Serialize for BlockWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Block {
            anchor: usize,
            offsets: Vec<u8>,
        }
        let blocks: Vec<Block> = (0..self.k())
            .map(|j| Block {
                anchor: self.anchors[j],
                offsets: self.offsets(j),
            })
            .collect();
        let mut st = s.serialize_struct("BlockWord", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("blocks", &blocks)?;
        st.serialize_field("word", &self.to_string())?;
        st.end()
    }
}
