//! Element matchings on face posets and their acyclicity certificates.
//!
//! Faces include the empty face (dimension `-1`). An element matching for a
//! vertex `x` pairs every remaining face `σ ∌ x` with `σ ∪ {x}` when both are
//! still present; running these for a sequence of vertices, removing matched
//! faces after each step, yields an acyclic matching. Pairing is forced, so
//! the result depends only on the vertex order.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::budget::Budget;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::set::VertexSet;

/// A set of cover pairs `(lower, upper)` with `upper = lower ∪ {x}`, no face
/// used twice.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<(VertexSet, VertexSet)>,
}

impl Matching {
    /// Validates the cover and disjointness conditions.
    pub fn from_pairs(pairs: Vec<(VertexSet, VertexSet)>) -> Result<Self> {
        let mut used = HashSet::new();
        for (lo, up) in &pairs {
            if up.len() != lo.len() + 1 || !lo.is_subset(up) {
                return Err(Error::MalformedMatching(format!(
                    "{lo} -> {up} is not a cover"
                )));
            }
            for f in [lo, up] {
                if !used.insert(f.clone()) {
                    return Err(Error::MalformedMatching(format!("face {f} used twice")));
                }
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(VertexSet, VertexSet)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// A matching on a complex together with its unmatched faces.
#[derive(Clone, Debug)]
pub struct MatchingResult {
    complex: SimplicialComplex,
    order: Vec<usize>,
    matching: Matching,
    critical: Vec<VertexSet>,
    counts: BTreeMap<isize, usize>,
    face_count: usize,
}

impl MatchingResult {
    /// Wraps an arbitrary matching on `c`; critical cells are the faces of `c`
    /// outside every pair. Pairs must consist of faces of `c`.
    pub fn from_matching(c: &SimplicialComplex, matching: Matching) -> Result<Self> {
        if c.is_void() {
            return Err(Error::VoidComplex);
        }
        let mut paired = HashSet::new();
        for (lo, up) in matching.pairs() {
            if !c.is_face(up) {
                return Err(Error::MalformedMatching(format!("{up} is not a face")));
            }
            paired.insert(lo.clone());
            paired.insert(up.clone());
        }
        let faces: Vec<VertexSet> = c.faces_by_dim().into_iter().flatten().collect();
        let face_count = faces.len();
        let critical = faces.into_iter().filter(|f| !paired.contains(f)).collect();
        Ok(Self::assemble(
            c.clone(),
            Vec::new(),
            matching,
            critical,
            face_count,
        ))
    }

    fn assemble(
        complex: SimplicialComplex,
        order: Vec<usize>,
        matching: Matching,
        mut critical: Vec<VertexSet>,
        face_count: usize,
    ) -> Self {
        critical.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut counts = BTreeMap::new();
        for f in &critical {
            *counts.entry(f.len() as isize - 1).or_insert(0) += 1;
        }
        Self {
            complex,
            order,
            matching,
            critical,
            counts,
            face_count,
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// Vertex order used to build the matching (empty for hand-built ones).
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn matching(&self) -> &Matching {
        &self.matching
    }

    /// Unmatched faces, by dimension then lexicographically.
    pub fn critical(&self) -> &[VertexSet] {
        &self.critical
    }

    /// Critical cell count per dimension (dimensions with none are omitted).
    pub fn counts(&self) -> &BTreeMap<isize, usize> {
        &self.counts
    }

    pub fn count(&self, d: isize) -> usize {
        self.counts.get(&d).copied().unwrap_or(0)
    }

    /// Total number of faces of the complex, the empty face included.
    pub fn face_count(&self) -> usize {
        self.face_count
    }

    pub fn empty_face_paired(&self) -> bool {
        self.critical.first().is_none_or(|f| !f.is_empty())
    }
}

/// Runs the element matchings for `vertices` in order on `c`.
pub fn element_matching_sequence(
    c: &SimplicialComplex,
    vertices: &[usize],
) -> Result<MatchingResult> {
    element_matching_sequence_within(c, vertices, &Budget::unlimited())
}

/// [`element_matching_sequence`] under a time budget.
pub fn element_matching_sequence_within(
    c: &SimplicialComplex,
    vertices: &[usize],
    budget: &Budget,
) -> Result<MatchingResult> {
    if c.is_void() {
        return Err(Error::VoidComplex);
    }
    let mut seen = HashSet::new();
    for &v in vertices {
        if v == 0 || v > c.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: c.n(),
            });
        }
        if !seen.insert(v) {
            return Err(Error::DuplicateVertex(v));
        }
    }

    let faces: Vec<VertexSet> = c
        .faces_by_dim_within(budget)?
        .into_iter()
        .flatten()
        .collect();
    let index: HashMap<&VertexSet, usize> = faces.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut alive = vec![true; faces.len()];
    let mut pairs = Vec::new();
    let mut ticks = 0u32;
    for &x in vertices {
        for i in 0..faces.len() {
            budget.tick(&mut ticks)?;
            if !alive[i] || faces[i].contains(x) {
                continue;
            }
            let up = faces[i].with(x);
            if let Some(&j) = index.get(&up) {
                if alive[j] {
                    alive[i] = false;
                    alive[j] = false;
                    pairs.push((faces[i].clone(), up));
                }
            }
        }
    }
    let critical = faces
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(f, _)| f.clone())
        .collect();
    Ok(MatchingResult::assemble(
        c.clone(),
        vertices.to_vec(),
        Matching { pairs },
        critical,
        faces.len(),
    ))
}

/// Checks that the modified Hasse diagram (matched covers oriented up, all
/// other covers down) has no directed cycle.
///
/// Every edge joins consecutive dimensions, and a face entered by an upward
/// edge is matched downward, so it can only leave downward. A cycle therefore
/// never spans more than two adjacent dimensions, and each such pair of
/// levels is searched separately.
pub fn verify_acyclic(r: &MatchingResult) -> Result<bool> {
    verify_acyclic_within(r, &Budget::unlimited())
}

/// [`verify_acyclic`] under a time budget.
pub fn verify_acyclic_within(r: &MatchingResult, budget: &Budget) -> Result<bool> {
    let c = r.complex();
    if c.is_void() {
        return Err(Error::VoidComplex);
    }
    let mut up_of: HashMap<&VertexSet, &VertexSet> = HashMap::new();
    let mut used: HashSet<&VertexSet> = HashSet::new();
    for (lo, up) in r.matching().pairs() {
        if up.len() != lo.len() + 1 || !lo.is_subset(up) {
            return Err(Error::MalformedMatching(format!(
                "{lo} -> {up} is not a cover"
            )));
        }
        if !used.insert(lo) || !used.insert(up) {
            return Err(Error::MalformedMatching(format!(
                "pair {lo} -> {up} reuses a face"
            )));
        }
        if !c.is_face(up) {
            return Err(Error::MalformedMatching(format!("{up} is not a face")));
        }
        up_of.insert(lo, up);
    }

    // faces by size, enumerated straight from the facets
    let mut by_size: Vec<HashSet<VertexSet>> =
        vec![HashSet::new(); c.facets().iter().map(VertexSet::len).max().unwrap_or(0) + 1];
    for facet in c.facets() {
        let elems = facet.to_vec();
        if elems.len() >= 40 {
            return Err(Error::TooLarge(format!(
                "facet of size {} is too large to expand",
                elems.len()
            )));
        }
        for mask in 0u64..(1u64 << elems.len()) {
            let s: VertexSet = (0..elems.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| elems[b])
                .collect();
            by_size[s.len()].insert(s);
        }
    }

    for size in 0..by_size.len().saturating_sub(1) {
        budget.check()?;
        let lower: Vec<&VertexSet> = by_size[size].iter().collect();
        let upper: Vec<&VertexSet> = by_size[size + 1].iter().collect();
        let lower_id: HashMap<&VertexSet, usize> =
            lower.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let offset = lower.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); lower.len() + upper.len()];
        for (j, tau) in upper.iter().enumerate() {
            for v in tau.iter() {
                let sigma = tau.without(v);
                let i = lower_id[&sigma];
                if up_of.get(&sigma).is_some_and(|u| u == tau) {
                    adj[i].push(offset + j);
                } else {
                    adj[offset + j].push(i);
                }
            }
        }
        if has_cycle(&adj) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Iterative Tarjan; a cycle exists iff some strongly connected component has
/// more than one node (there are no self-loops).
fn has_cycle(adj: &[Vec<usize>]) -> bool {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < adj[v].len() {
                let w = adj[v][top.1];
                top.1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut size = 0;
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    size += 1;
                    if w == v {
                        break;
                    }
                }
                if size > 1 {
                    return true;
                }
            }
        }
    }
    false
}

/// What the critical cells of a certified acyclic matching imply.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum HomotopySummary {
    /// No critical cells at all.
    Contractible,
    /// `∅` paired and all critical cells in dimension `dim`.
    Wedge { dim: isize, count: usize },
    /// No homotopy claim; per-dimension critical counts only.
    Counts { counts: BTreeMap<isize, usize> },
}

impl fmt::Display for HomotopySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Contractible => write!(f, "contractible"),
            Self::Wedge { dim, count } => write!(f, "sphere d={dim} x{count}"),
            Self::Counts { counts } => {
                let parts: Vec<String> = counts.iter().map(|(d, c)| format!("{d}:{c}")).collect();
                write!(f, "counts {}", parts.join(" "))
            }
        }
    }
}

/// Certifies acyclicity, then summarizes the critical cells.
pub fn homotopy_summary(r: &MatchingResult) -> Result<HomotopySummary> {
    homotopy_summary_within(r, &Budget::unlimited())
}

/// [`homotopy_summary`] under a time budget.
pub fn homotopy_summary_within(r: &MatchingResult, budget: &Budget) -> Result<HomotopySummary> {
    if !verify_acyclic_within(r, budget)? {
        return Err(Error::NotAcyclic);
    }
    Ok(summarize(r))
}

fn summarize(r: &MatchingResult) -> HomotopySummary {
    if r.critical().is_empty() {
        return HomotopySummary::Contractible;
    }
    if r.empty_face_paired() && r.counts().len() == 1 {
        let (&dim, &count) = r.counts().iter().next().expect("one dimension");
        return HomotopySummary::Wedge { dim, count };
    }
    HomotopySummary::Counts {
        counts: r.counts().clone(),
    }
}

/// Faces left unmatched by the single element matching for `v`: `v ∉ σ`,
/// `σ ∈ c`, `σ ∪ {v} ∉ c`. Lexicographic order.
pub fn unmatched_after_first(c: &SimplicialComplex, v: usize) -> impl Iterator<Item = VertexSet> {
    let mut out: Vec<VertexSet> = c
        .faces_by_dim()
        .into_iter()
        .flatten()
        .filter(|s| !s.contains(v) && !c.is_face(&s.with(v)))
        .collect();
    out.sort();
    out.into_iter()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::homology::reduced_homology;
    use proptest::prelude::*;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::from_slice(v)
    }

    fn w(n: usize, k: usize) -> SimplicialComplex {
        SimplicialComplex::total_cut(&Graph::squared_cycle(n).unwrap(), k)
    }

    fn all_subsets(n: usize) -> impl Iterator<Item = VertexSet> {
        (0u64..1 << n).map(move |m| (1..=n).filter(|v| m >> (v - 1) & 1 == 1).collect())
    }

    /// Transitive closure by repeated squaring of the reachability relation.
    fn cyclic_by_closure(r: &MatchingResult) -> bool {
        let faces: Vec<VertexSet> = r.complex().faces_by_dim().into_iter().flatten().collect();
        let id: HashMap<&VertexSet, usize> =
            faces.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let n = faces.len();
        let mut reach = vec![vec![false; n]; n];
        let matched: HashSet<(VertexSet, VertexSet)> =
            r.matching().pairs().iter().cloned().collect();
        for tau in &faces {
            for v in tau.iter() {
                let sigma = tau.without(v);
                if matched.contains(&(sigma.clone(), tau.clone())) {
                    reach[id[&sigma]][id[tau]] = true;
                } else {
                    reach[id[tau]][id[&sigma]] = true;
                }
            }
        }
        for k in 0..n {
            let via = reach[k].clone();
            for row in reach.iter_mut().filter(|row| row[k]) {
                for (r, &v) in row.iter_mut().zip(&via) {
                    *r |= v;
                }
            }
        }
        (0..n).any(|i| reach[i][i])
    }

    #[test]
    fn cone_point_pairs_everything() {
        let s = SimplicialComplex::simplex(3);
        let r = element_matching_sequence(&s, &[1]).unwrap();
        assert_eq!(r.matching().len(), 4);
        assert!(r.critical().is_empty());
        assert_eq!(homotopy_summary(&r).unwrap(), HomotopySummary::Contractible);
        assert_eq!(unmatched_after_first(&s, 2).count(), 0);
    }

    #[test]
    fn bad_orders() {
        let s = SimplicialComplex::simplex(3);
        assert_eq!(
            element_matching_sequence(&s, &[1, 1]).unwrap_err(),
            Error::DuplicateVertex(1)
        );
        assert!(matches!(
            element_matching_sequence(&s, &[4]),
            Err(Error::VertexOutOfRange { vertex: 4, n: 3 })
        ));
        assert!(element_matching_sequence(&SimplicialComplex::void(3), &[1]).is_err());
    }

    #[test]
    fn w11_single_critical_cell() {
        let r = element_matching_sequence(&w(11, 3), &(1..=10).collect::<Vec<_>>()).unwrap();
        assert_eq!(r.critical(), &[set(&[2, 3, 5, 7, 9, 11])]);
        assert!(r.empty_face_paired());
        assert!(verify_acyclic(&r).unwrap());
        let s = homotopy_summary(&r).unwrap();
        assert_eq!(s, HomotopySummary::Wedge { dim: 5, count: 1 });
        assert_eq!(s.to_string(), "sphere d=5 x1");
    }

    #[test]
    fn w13_k4_prefix_order() {
        let r = element_matching_sequence(&w(13, 4), &[1, 2, 3, 4, 5, 6, 7]).unwrap();
        assert_eq!(r.critical(), &[set(&[2, 3, 5, 7])]);
        assert!(verify_acyclic(&r).unwrap());
    }

    #[test]
    fn w_k3_critical_cells() {
        for n in 11..=13 {
            let order: Vec<usize> = (1..n).collect();
            let r = element_matching_sequence(&w(n, 3), &order).unwrap();
            let expected = VertexSet::full(n).difference(&set(&[1, n - 7, n - 5, n - 3, n - 1]));
            assert_eq!(r.critical(), &[expected], "n={n}");
            assert!(verify_acyclic(&r).unwrap());
        }
    }

    #[test]
    fn square_boundary_matchings() {
        let sq = SimplicialComplex::from_facets(
            4,
            [set(&[1, 2]), set(&[2, 3]), set(&[3, 4]), set(&[1, 4])],
        )
        .unwrap();
        // face reuse is rejected up front
        assert!(
            Matching::from_pairs(vec![(set(&[1]), set(&[1, 2])), (set(&[2]), set(&[1, 2]))])
                .is_err()
        );
        let round = Matching::from_pairs(vec![
            (set(&[1]), set(&[1, 2])),
            (set(&[2]), set(&[2, 3])),
            (set(&[3]), set(&[3, 4])),
            (set(&[4]), set(&[1, 4])),
        ])
        .unwrap();
        let r = MatchingResult::from_matching(&sq, round).unwrap();
        assert_eq!(verify_acyclic(&r).unwrap(), !cyclic_by_closure(&r));
        assert!(!verify_acyclic(&r).unwrap());
        assert_eq!(homotopy_summary(&r).unwrap_err(), Error::NotAcyclic);

        let open = Matching::from_pairs(vec![(set(&[1]), set(&[1, 2])), (set(&[2]), set(&[2, 3]))])
            .unwrap();
        let r = MatchingResult::from_matching(&sq, open).unwrap();
        assert_eq!(verify_acyclic(&r).unwrap(), !cyclic_by_closure(&r));

        let r = MatchingResult::from_matching(&sq, Matching::default()).unwrap();
        assert!(verify_acyclic(&r).unwrap());
        assert_eq!(r.critical().len(), 9);
    }

    #[test]
    fn malformed_pairs() {
        assert!(Matching::from_pairs(vec![(set(&[1]), set(&[2, 3]))]).is_err());
        assert!(Matching::from_pairs(vec![(set(&[1]), set(&[1, 2, 3]))]).is_err());
        let s = SimplicialComplex::simplex_boundary(3);
        let m = Matching::from_pairs(vec![(set(&[1, 2]), set(&[1, 2, 3]))]).unwrap();
        assert!(MatchingResult::from_matching(&s, m).is_err());
    }

    #[test]
    fn unmatched_after_first_matches_brute_force() {
        let c = w(9, 3);
        let brute: Vec<VertexSet> = {
            let mut v: Vec<VertexSet> = all_subsets(9)
                .filter(|s| !s.contains(1) && c.is_face(s) && !c.is_face(&s.with(1)))
                .collect();
            v.sort();
            v
        };
        assert_eq!(unmatched_after_first(&c, 1).collect::<Vec<_>>(), brute);
        let r = element_matching_sequence(&c, &[1]).unwrap();
        let mut crit = r.critical().to_vec();
        crit.sort();
        assert_eq!(crit, brute);
    }

    #[test]
    fn example_face_in_w14() {
        let c = w(14, 4);
        assert!(unmatched_after_first(&c, 1).any(|s| s == set(&[2, 6, 8, 10, 13, 14])));
    }

    #[test]
    fn small_sequences_agree_with_closure_oracle() {
        for n in 5..=8 {
            for k in 1..=2 {
                let c = SimplicialComplex::total_cut(&Graph::cycle(n).unwrap(), k);
                for len in 0..=3 {
                    let order: Vec<usize> = (1..=len).collect();
                    let r = element_matching_sequence(&c, &order).unwrap();
                    assert!(!cyclic_by_closure(&r));
                    assert!(verify_acyclic(&r).unwrap());
                }
            }
        }
    }

    fn random_graph(n: usize, bits: u64) -> Graph {
        let mut edges = Vec::new();
        let mut b = 0;
        for u in 1..=n {
            for v in u + 1..=n {
                if bits >> (b % 64) & 1 == 1 {
                    edges.push((u, v));
                }
                b += 1;
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn random_orders_are_acyclic_and_bound_homology(
            n in 3usize..=9,
            bits in any::<u64>(),
            k in 1usize..=3,
            order in Just((1usize..=9).collect::<Vec<_>>()).prop_shuffle(),
            len in 0usize..=9,
        ) {
            let g = random_graph(n, bits);
            let c = SimplicialComplex::total_cut(&g, k);
            prop_assume!(!c.is_void());
            let order: Vec<usize> = order.into_iter().filter(|&v| v <= n).take(len).collect();
            let r = element_matching_sequence(&c, &order).unwrap();
            prop_assert!(verify_acyclic(&r).unwrap());
            prop_assert_eq!(r.face_count(), 2 * r.matching().len() + r.critical().len());
            let h = reduced_homology(&c).unwrap();
            for (d, grp) in h.groups() {
                prop_assert!(r.count(d) >= grp.betti);
            }
            let again = element_matching_sequence(&c, &order).unwrap();
            prop_assert_eq!(again.matching(), r.matching());
        }
    }
}
