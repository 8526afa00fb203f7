//! Simplicial complexes stored as facet antichains.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::set::VertexSet;

/// Largest ground set the 2^n subset scan of [`SimplicialComplex::alexander_dual`] accepts.
pub const MAX_SCAN_GROUND: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// No faces at all, not even the empty face.
    Void,
    /// Exactly one face, the empty one.
    Empty,
    Nonempty,
}

/// A simplicial complex on the ground set `{1..n}`, given by its facets.
///
/// Faces are implicit: a set is a face iff it lies inside some facet. The void
/// complex has no facets; the empty complex has the single facet `{}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    n: usize,
    facets: Vec<VertexSet>,
}

impl SimplicialComplex {
    /// Builds a complex from arbitrary generating faces; non-maximal ones are dropped.
    pub fn from_facets<I: IntoIterator<Item = VertexSet>>(n: usize, generators: I) -> Result<Self> {
        let mut gens: Vec<VertexSet> = generators.into_iter().collect();
        for g in &gens {
            if let Some(m) = g.last().filter(|&m| m > n) {
                return Err(Error::VertexOutOfRange { vertex: m, n });
            }
        }
        gens.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        gens.dedup();
        let mut facets: Vec<VertexSet> = Vec::with_capacity(gens.len());
        for g in gens {
            if !facets.iter().any(|f| g.is_subset(f)) {
                facets.push(g);
            }
        }
        facets.sort();
        Ok(Self::from_antichain(n, facets))
    }

    /// Trusted constructor: `facets` must already be a sorted antichain.
    pub(crate) fn from_antichain(n: usize, facets: Vec<VertexSet>) -> Self {
        let c = Self { n, facets };
        debug_assert!(c.is_antichain(), "facets must form an antichain");
        debug_assert!(
            c.facets.windows(2).all(|w| w[0] < w[1]),
            "facets must be sorted"
        );
        c
    }

    pub fn void(n: usize) -> Self {
        Self { n, facets: vec![] }
    }

    /// The complex `{{}}`.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            facets: vec![VertexSet::new()],
        }
    }

    /// The full simplex on `{1..n}`.
    pub fn simplex(n: usize) -> Self {
        Self {
            n,
            facets: vec![VertexSet::full(n)],
        }
    }

    /// All proper faces of the simplex on `{1..n}`.
    pub fn simplex_boundary(n: usize) -> Self {
        let full = VertexSet::full(n);
        let mut facets: Vec<VertexSet> = (1..=n).map(|v| full.without(v)).collect();
        facets.sort();
        Self::from_antichain(n, facets)
    }

    /// The total `k`-cut complex: facets are complements of size-`k` independent sets of `g`.
    pub fn total_cut(g: &Graph, k: usize) -> Self {
        let n = g.n();
        let mut facets: Vec<VertexSet> = g.independent_sets(k).map(|s| s.complement(n)).collect();
        facets.sort();
        Self::from_antichain(n, facets)
    }

    /// Direct construction of the Alexander dual of `total_cut(g, k)`: the maximal
    /// vertex sets whose induced subgraph has no independent set of size `k`.
    ///
    /// Enumeration is Bron–Kerbosch without pivoting over the hereditary
    /// property "independence number <= k - 1".
    pub fn dual_of_total_cut(g: &Graph, k: usize) -> Result<Self> {
        Self::dual_of_total_cut_within(g, k, &Budget::unlimited())
    }

    /// [`dual_of_total_cut`](Self::dual_of_total_cut) under a time budget.
    pub fn dual_of_total_cut_within(g: &Graph, k: usize, budget: &Budget) -> Result<Self> {
        if k == 0 || !g.has_independent_set(&g.vertices(), k) {
            let alpha = g.independence_number();
            return Err(Error::KTooLarge { k, alpha });
        }
        if k == 1 {
            return Ok(Self::empty(g.n()));
        }
        let mut facets = Vec::new();
        let candidates: Vec<usize> = (1..=g.n()).collect();
        hereditary_maximal(
            g,
            k,
            VertexSet::new(),
            candidates,
            Vec::new(),
            &mut facets,
            budget,
        )?;
        facets.sort();
        Ok(Self::from_antichain(g.n(), facets))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn facets(&self) -> &[VertexSet] {
        &self.facets
    }

    pub fn kind(&self) -> Kind {
        match self.facets.as_slice() {
            [] => Kind::Void,
            [f] if f.is_empty() => Kind::Empty,
            _ => Kind::Nonempty,
        }
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn is_full_simplex(&self) -> bool {
        self.facets.len() == 1 && self.facets[0] == VertexSet::full(self.n)
    }

    /// `None` for the void complex, `Some(-1)` for the empty complex.
    pub fn dim(&self) -> Option<isize> {
        self.facets.iter().map(|f| f.len() as isize - 1).max()
    }

    pub fn is_pure(&self) -> bool {
        self.facets.windows(2).all(|w| w[0].len() == w[1].len())
    }

    fn is_antichain(&self) -> bool {
        self.facets.iter().enumerate().all(|(i, a)| {
            self.facets
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !a.is_subset(b))
        })
    }

    pub fn is_face(&self, s: &VertexSet) -> bool {
        self.facets.iter().any(|f| s.is_subset(f))
    }

    /// Faces grouped by dimension: entry `i` holds the faces of dimension
    /// `i - 1` (so index 0 is `[{}]`), each group lexicographically sorted.
    pub fn faces_by_dim(&self) -> Vec<Vec<VertexSet>> {
        self.faces_by_dim_within(&Budget::unlimited())
            .expect("an unlimited budget never expires")
    }

    /// [`faces_by_dim`](Self::faces_by_dim) under a time budget.
    pub fn faces_by_dim_within(&self, budget: &Budget) -> Result<Vec<Vec<VertexSet>>> {
        let Some(top) = self.dim() else {
            return Ok(Vec::new());
        };
        let mut ticks = 0u32;
        let levels = (top + 2) as usize;
        let mut out: Vec<Vec<VertexSet>> = vec![Vec::new(); levels];
        let mut above: Vec<VertexSet> = Vec::new();
        for size in (0..levels).rev() {
            let mut seen: HashSet<VertexSet> = self
                .facets
                .iter()
                .filter(|f| f.len() == size)
                .cloned()
                .collect();
            for sigma in &above {
                budget.tick(&mut ticks)?;
                for v in sigma {
                    seen.insert(sigma.without(v));
                }
            }
            let mut level: Vec<VertexSet> = seen.into_iter().collect();
            level.sort();
            above = level.clone();
            out[size] = level;
        }
        Ok(out)
    }

    /// Faces of dimension `d` (cardinality `d + 1`), lexicographically.
    pub fn faces_of_dim(&self, d: isize) -> Vec<VertexSet> {
        if d < -1 || self.dim().is_none_or(|top| d > top) {
            return Vec::new();
        }
        let size = (d + 1) as usize;
        let mut seen: HashSet<VertexSet> = HashSet::new();
        for f in self.facets.iter().filter(|f| f.len() >= size) {
            let elems = f.to_vec();
            for_each_subset(&elems, size, |s| {
                seen.insert(s);
            });
        }
        let mut out: Vec<VertexSet> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// `(f_{-1}, f_0, ..., f_dim)`.
    pub fn f_vector(&self) -> Result<Vec<usize>> {
        if self.is_void() {
            return Err(Error::VoidComplex);
        }
        Ok(self.faces_by_dim().iter().map(Vec::len).collect())
    }

    /// `sum_i (-1)^i f_i` over `i >= -1`.
    pub fn reduced_euler_characteristic(&self) -> Result<i64> {
        Ok(self
            .f_vector()?
            .iter()
            .enumerate()
            .map(|(i, &f)| if i % 2 == 0 { -(f as i64) } else { f as i64 })
            .sum())
    }

    /// Upper bound on the number of faces, used for route selection.
    pub fn estimated_face_count(&self) -> f64 {
        let total: f64 = self.facets.iter().map(|f| 2f64.powi(f.len() as i32)).sum();
        total.min(2f64.powi(self.n as i32))
    }

    /// `{τ : τ ∩ s = ∅, τ ∪ s ∈ Δ}`.
    pub fn link(&self, s: &VertexSet) -> Self {
        let mut facets: Vec<VertexSet> = self
            .facets
            .iter()
            .filter(|f| s.is_subset(f))
            .map(|f| f.difference(s))
            .collect();
        facets.sort();
        Self::from_antichain(self.n, facets)
    }

    /// `{τ : τ ∪ s ∈ Δ}`.
    pub fn star(&self, s: &VertexSet) -> Self {
        let facets: Vec<VertexSet> = self
            .facets
            .iter()
            .filter(|f| s.is_subset(f))
            .cloned()
            .collect();
        Self::from_antichain(self.n, facets)
    }

    /// `{τ ∈ Δ : s ⊄ τ}`.
    pub fn deletion(&self, s: &VertexSet) -> Self {
        let gens = self.facets.iter().flat_map(|f| {
            if s.is_subset(f) {
                s.iter().map(|v| f.without(v)).collect::<Vec<_>>()
            } else {
                vec![f.clone()]
            }
        });
        Self::from_facets(self.n, gens.collect::<Vec<_>>()).expect("subsets stay in range")
    }

    /// Combinatorial Alexander dual `{σ ⊆ [n] : [n] \ σ ∉ Δ}` by scanning all subsets.
    pub fn alexander_dual(&self) -> Result<Self> {
        if self.is_void() {
            return Err(Error::VoidComplex);
        }
        if self.is_full_simplex() {
            return Err(Error::FullSimplex);
        }
        if self.n > MAX_SCAN_GROUND {
            return Err(Error::TooLarge(format!(
                "alexander_dual scans 2^{} subsets; use dual_of_total_cut",
                self.n
            )));
        }
        let n = self.n;
        let full = VertexSet::full(n);
        // σ is a dual face iff its complement is a non-face; facets are the
        // complements of the minimal non-faces.
        let mut minimal_nonfaces = Vec::new();
        for mask in 0u64..(1u64 << n) {
            let s: VertexSet = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| i + 1)
                .collect();
            if !self.is_face(&s) && s.iter().all(|v| self.is_face(&s.without(v))) {
                minimal_nonfaces.push(full.difference(&s));
            }
        }
        minimal_nonfaces.sort();
        Ok(Self::from_antichain(n, minimal_nonfaces))
    }

    pub fn to_facet_file(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.facets.len());
        for f in &self.facets {
            let line: Vec<String> = f.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses a header `n f` followed by `f` facet lines of 1-indexed vertices.
    /// A blank facet line denotes the empty face.
    pub fn parse_facet_file(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad header `{header}`")))
            })
            .collect::<Result<_>>()?;
        let [n, f] = nums[..] else {
            return Err(Error::Parse(format!("bad header `{header}`")));
        };
        let mut facets = Vec::with_capacity(f);
        for i in 0..f {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {f} facets, found {i}")))?;
            let mut s = VertexSet::new();
            for t in line.split_whitespace() {
                let v: usize = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad vertex `{t}`")))?;
                if v == 0 || v > n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                s.insert(v);
            }
            facets.push(s);
        }
        Self::from_facets(n, facets)
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("n", &self.n)
            .field("kind", &self.kind())
            .field("facets", &self.facets)
            .finish()
    }
}

impl Serialize for SimplicialComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SimplicialComplex", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("facets", &self.facets)?;
        st.serialize_field("kind", &self.kind())?;
        st.end()
    }
}

fn for_each_subset(elems: &[usize], size: usize, mut f: impl FnMut(VertexSet)) {
    fn rec(
        elems: &[usize],
        size: usize,
        start: usize,
        cur: &mut VertexSet,
        f: &mut dyn FnMut(VertexSet),
    ) {
        if cur.len() == size {
            f(cur.clone());
            return;
        }
        let need = size - cur.len();
        for i in start..elems.len() {
            if elems.len() - i < need {
                break;
            }
            cur.insert(elems[i]);
            rec(elems, size, i + 1, cur, f);
            cur.remove(elems[i]);
        }
    }
    let mut cur = VertexSet::new();
    rec(elems, size, 0, &mut cur, &mut f);
}

/// Whether `s ∪ {v}` still has no independent set of size `k`, given that `s` has none.
fn extends(g: &Graph, k: usize, s: &VertexSet, v: usize) -> bool {
    let far = s.difference(g.neighbors(v)).without(v);
    !g.has_independent_set(&far, k - 1)
}

fn hereditary_maximal(
    g: &Graph,
    k: usize,
    current: VertexSet,
    candidates: Vec<usize>,
    excluded: Vec<usize>,
    out: &mut Vec<VertexSet>,
    budget: &Budget,
) -> Result<()> {
    budget.check()?;
    if candidates.is_empty() && excluded.is_empty() {
        out.push(current);
        return Ok(());
    }
    let mut excluded = excluded;
    for (i, &v) in candidates.iter().enumerate() {
        let next = current.with(v);
        let next_candidates: Vec<usize> = candidates[i + 1..]
            .iter()
            .copied()
            .filter(|&u| extends(g, k, &next, u))
            .collect();
        let next_excluded: Vec<usize> = excluded
            .iter()
            .copied()
            .filter(|&u| extends(g, k, &next, u))
            .collect();
        hereditary_maximal(g, k, next, next_candidates, next_excluded, out, budget)?;
        excluded.push(v);
    }
    Ok(())
}
