//! Simple graphs on `{1..n}`, cycle-power generators and independent sets.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::set::VertexSet;

/// An immutable simple graph on the vertices `1..=n`.
///
/// Adjacency is one bitmask row per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<VertexSet>,
}

impl Graph {
    fn empty(n: usize) -> Self {
        Self {
            n,
            rows: vec![VertexSet::new(); n],
        }
    }

    fn link(&mut self, u: usize, v: usize) {
        self.rows[u - 1].insert(v);
        self.rows[v - 1].insert(u);
    }

    /// The `p`-th power of the `n`-cycle: `i ~ j` iff their circular distance is in `1..=p`.
    pub fn cycle_power(n: usize, p: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!(
                "cycle power needs n >= 3, got {n}"
            )));
        }
        if p < 1 {
            return Err(Error::InvalidGraph("cycle power needs p >= 1".into()));
        }
        let mut g = Self::empty(n);
        for i in 1..=n {
            for d in 1..=p.min(n / 2) {
                let j = (i - 1 + d) % n + 1;
                g.link(i, j);
            }
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::cycle_power(n, 1)
    }

    /// `W_n`, the square of the `n`-cycle.
    pub fn squared_cycle(n: usize) -> Result<Self> {
        Self::cycle_power(n, 2)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 1..=n {
            for v in u + 1..=n {
                g.link(u, v);
            }
        }
        g
    }

    /// Symmetric closure of `edges`; repeated edges collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            for w in [u, v] {
                if w < 1 || w > n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            g.link(u, v);
        }
        Ok(g)
    }

    /// Parses the edge-list text format: a header `n m`, then `m` lines `u v`.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut nums = text.split_whitespace().map(|t| {
            t.parse::<usize>()
                .map_err(|e| Error::Parse(format!("`{t}`: {e}")))
        });
        let mut next = |what: &str| {
            nums.next()
                .unwrap_or_else(|| Err(Error::Parse(format!("missing {what}"))))
        };
        let n = next("vertex count")?;
        let m = next("edge count")?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            edges.push((next("edge endpoint")?, next("edge endpoint")?));
        }
        if nums.next().is_some() {
            return Err(Error::Parse("trailing data after edge list".into()));
        }
        Self::from_edges(n, &edges)
    }

    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.rows[v - 1]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        u >= 1 && u <= self.n && self.rows[u - 1].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v - 1].len()
    }

    /// Edges `(u, v)` with `u < v`, lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..=self.n)
            .flat_map(|u| {
                self.rows[u - 1]
                    .iter()
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| self.rows[v - 1].is_disjoint(s))
    }

    /// Size-`k` independent sets in lexicographic order.
    pub fn independent_sets(&self, k: usize) -> IndependentSets<'_> {
        self.independent_sets_within(&self.vertices(), k)
    }

    /// Size-`k` independent sets contained in `pool`, in lexicographic order.
    pub fn independent_sets_within(&self, pool: &VertexSet, k: usize) -> IndependentSets<'_> {
        IndependentSets {
            graph: self,
            k,
            chosen: Vec::with_capacity(k),
            stack: vec![pool.clone()],
            emitted_empty: false,
        }
    }

    /// Whether `pool` contains an independent set of size `k`.
    pub fn has_independent_set(&self, pool: &VertexSet, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if pool.len() < k || self.clique_cover_bound(pool) < k {
            return false;
        }
        let mut rest = pool.clone();
        while let Some(v) = rest.pop_first() {
            if rest.len() + 1 < k {
                return false;
            }
            if self.has_independent_set(&rest.difference(&self.rows[v - 1]), k - 1) {
                return true;
            }
        }
        false
    }

    /// Number of cliques in a greedy clique cover of `pool`; an upper bound on
    /// the independence number of the induced subgraph.
    pub fn clique_cover_bound(&self, pool: &VertexSet) -> usize {
        let mut cliques: Vec<VertexSet> = Vec::new();
        for v in pool {
            match cliques.iter_mut().find(|c| c.is_subset(&self.rows[v - 1])) {
                Some(c) => {
                    c.insert(v);
                }
                None => cliques.push(VertexSet::from_slice(&[v])),
            }
        }
        cliques.len()
    }

    pub fn independence_number(&self) -> usize {
        self.independence_number_within(&self.vertices())
    }

    /// Maximum independent set size inside `pool` (branch and bound).
    pub fn independence_number_within(&self, pool: &VertexSet) -> usize {
        let mut best = 0;
        self.mis_branch(pool.clone(), 0, &mut best);
        best
    }

    fn mis_branch(&self, pool: VertexSet, taken: usize, best: &mut usize) {
        if taken + pool.len() <= *best {
            return;
        }
        // A vertex of degree <= 1 inside the pool is always in some maximum set.
        if let Some(v) = pool
            .iter()
            .find(|&v| self.rows[v - 1].intersection(&pool).len() <= 1)
        {
            return self.mis_branch(
                pool.difference(&self.rows[v - 1]).without(v),
                taken + 1,
                best,
            );
        }
        if pool.is_empty() {
            *best = (*best).max(taken);
            return;
        }
        if taken + self.clique_cover_bound(&pool) <= *best {
            return;
        }
        let v = pool
            .iter()
            .max_by_key(|&v| self.rows[v - 1].intersection(&pool).len())
            .expect("pool nonempty");
        self.mis_branch(
            pool.difference(&self.rows[v - 1]).without(v),
            taken + 1,
            best,
        );
        self.mis_branch(pool.without(v), taken, best);
    }

    /// True iff `self` equals `cycle_power(n, 2)`.
    pub fn is_squared_cycle(&self) -> bool {
        self.n >= 3 && Self::squared_cycle(self.n).is_ok_and(|w| &w == self)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

/// Lexicographic backtracking over independent sets of a fixed size.
pub struct IndependentSets<'g> {
    graph: &'g Graph,
    k: usize,
    chosen: Vec<usize>,
    // stack[d] = candidates still to try at depth d; always chosen.len() + 1 frames.
    stack: Vec<VertexSet>,
    emitted_empty: bool,
}

impl Iterator for IndependentSets<'_> {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        if self.k == 0 {
            if self.emitted_empty {
                return None;
            }
            self.emitted_empty = true;
            return Some(VertexSet::new());
        }
        loop {
            let top = self.stack.last_mut()?;
            if self.chosen.len() + top.len() < self.k {
                self.stack.pop();
                self.chosen.pop();
                continue;
            }
            let v = top.pop_first().expect("nonempty by the size check");
            if self.chosen.len() + 1 == self.k {
                let mut out: VertexSet = self.chosen.iter().copied().collect();
                out.insert(v);
                return Some(out);
            }
            let next = top.difference(self.graph.neighbors(v));
            self.chosen.push(v);
            self.stack.push(next);
        }
    }
}

/// Graph generator addressed by a string such as `cyclepow:9:3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Cycle(usize),
    CyclePower(usize, usize),
    SquaredCycle(usize),
    Complete(usize),
    File(String),
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            Self::Cycle(n) => Graph::cycle(*n),
            Self::CyclePower(n, p) => Graph::cycle_power(*n, *p),
            Self::SquaredCycle(n) => Graph::squared_cycle(*n),
            Self::Complete(n) if *n >= 1 => Ok(Graph::complete(*n)),
            Self::Complete(_) => Err(Error::InvalidGraph("complete graph needs n >= 1".into())),
            Self::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("{path}: {e}")))?;
                Graph::parse_edge_list(&text)
            }
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadSpec(s.to_string());
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        if kind == "file" {
            return if rest.is_empty() {
                Err(bad())
            } else {
                Ok(Self::File(rest.to_string()))
            };
        }
        let nums = rest
            .split(':')
            .map(|t| t.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        match (kind, nums.as_slice()) {
            ("cycle", [n]) => Ok(Self::Cycle(*n)),
            ("cyclepow", [n, p]) => Ok(Self::CyclePower(*n, *p)),
            ("squaredcycle", [n]) => Ok(Self::SquaredCycle(*n)),
            ("complete", [n]) => Ok(Self::Complete(*n)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Cycle(n) => write!(f, "cycle:{n}"),
            Self::CyclePower(n, p) => write!(f, "cyclepow:{n}:{p}"),
            Self::SquaredCycle(n) => write!(f, "squaredcycle:{n}"),
            Self::Complete(n) => write!(f, "complete:{n}"),
            Self::File(p) => write!(f, "file:{p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::from_slice(v)
    }

    /// Brute force over all subsets; independent of the backtracking path.
    fn brute_independent(g: &Graph, k: usize) -> Vec<Vec<usize>> {
        let n = g.n();
        let mut adj = vec![vec![false; n + 1]; n + 1];
        for (u, v) in g.edges() {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        let mut out = Vec::new();
        for mask in 0u64..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let vs: Vec<usize> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| i + 1)
                .collect();
            let ok = vs.iter().all(|&u| vs.iter().all(|&v| u == v || !adj[u][v]));
            if ok {
                out.push(vs);
            }
        }
        out.sort();
        out
    }

    fn brute_alpha(g: &Graph) -> usize {
        (0..=g.n())
            .rev()
            .find(|&k| !brute_independent(g, k).is_empty())
            .unwrap()
    }

    #[test]
    fn cycle_power_examples() {
        let k5 = Graph::cycle_power(5, 2).unwrap();
        assert_eq!(k5.edge_count(), 10);
        assert_eq!(k5, Graph::complete(5));
        let c6 = Graph::cycle_power(6, 1).unwrap();
        assert!((1..=6).all(|v| c6.degree(v) == 2));
        let w9 = Graph::squared_cycle(9).unwrap();
        for i in 1..=9usize {
            let expect: VertexSet = [1, 2, 7, 8].iter().map(|d| (i - 1 + d) % 9 + 1).collect();
            assert_eq!(w9.neighbors(i), &expect);
        }
        assert!(Graph::cycle_power(2, 1).is_err());
        assert!(Graph::cycle_power(5, 0).is_err());
        // 2p + 1 >= n collapses to the complete graph
        assert_eq!(Graph::cycle_power(7, 3).unwrap(), Graph::complete(7));
        assert_eq!(Graph::cycle_power(6, 3).unwrap(), Graph::complete(6));
    }

    #[test]
    fn complete_and_edge_lists() {
        assert_eq!(Graph::complete(1).edge_count(), 0);
        assert_eq!(Graph::complete(4).edge_count(), 6);
        assert_eq!(Graph::from_edges(3, &[(1, 2)]).unwrap().edge_count(), 1);
        assert_eq!(
            Graph::from_edges(3, &[(1, 2), (2, 1)])
                .unwrap()
                .edge_count(),
            1
        );
        assert_eq!(Graph::from_edges(3, &[(1, 1)]), Err(Error::SelfLoop(1)));
        assert!(matches!(
            Graph::from_edges(3, &[(1, 4)]),
            Err(Error::VertexOutOfRange { vertex: 4, n: 3 })
        ));
        let g = Graph::parse_edge_list("4 2\n1 2\n3 4\n").unwrap();
        assert_eq!(g.edges(), vec![(1, 2), (3, 4)]);
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(Graph::parse_edge_list("3 2\n1 2\n").is_err());
    }

    #[test]
    fn independence_examples() {
        let w9 = Graph::squared_cycle(9).unwrap();
        assert!(w9.is_independent(&set(&[1, 4, 7])));
        assert!(!w9.is_independent(&set(&[1, 2, 4])));
        assert!(w9.is_independent(&set(&[])));
        assert!(w9.is_independent(&set(&[5])));
        let sets: Vec<_> = w9.independent_sets(3).collect();
        assert_eq!(
            sets,
            vec![set(&[1, 4, 7]), set(&[2, 5, 8]), set(&[3, 6, 9])]
        );
        assert_eq!(Graph::complete(5).independent_sets(2).count(), 0);
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(
            c5.independent_sets(2).count(),
            brute_independent(&c5, 2).len()
        );
        assert_eq!(c5.independent_sets(2).count(), 5);
        assert_eq!(
            w9.independent_sets(0).collect::<Vec<_>>(),
            vec![VertexSet::new()]
        );
    }

    #[test]
    fn independence_numbers() {
        let w9 = Graph::squared_cycle(9).unwrap();
        assert_eq!(brute_alpha(&w9), 3);
        assert_eq!(w9.independence_number(), 3);
        assert_eq!(Graph::complete(6).independence_number(), 1);
        let c6 = Graph::cycle(6).unwrap();
        assert_eq!(brute_alpha(&c6), 3);
        assert_eq!(c6.independence_number(), 3);
    }

    #[test]
    fn cycle_power_alpha_formula() {
        for n in 3..=18 {
            for p in 1..=5 {
                let g = Graph::cycle_power(n, p).unwrap();
                // floor(n/(p+1)) reads 0 once p + 1 > n, where the graph is complete
                let expect = (n / (p + 1)).max(1);
                assert_eq!(g.independence_number(), expect, "n={n} p={p}");
                if n <= 14 {
                    assert_eq!(brute_alpha(&g), expect);
                }
            }
        }
    }

    #[test]
    fn rotation_invariance() {
        for n in 3..=20 {
            for p in 1..=4 {
                let g = Graph::cycle_power(n, p).unwrap();
                let rot = |v: usize| v % n + 1;
                for (u, v) in g.edges() {
                    assert!(g.adjacent(rot(u), rot(v)));
                }
            }
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 3..=16 {
            for p in [1, 2, 3] {
                let g = Graph::cycle_power(n, p).unwrap();
                for k in 0..=4 {
                    let got: Vec<Vec<usize>> = g.independent_sets(k).map(|s| s.to_vec()).collect();
                    assert!(got
                        .iter()
                        .all(|s| g.is_independent(&VertexSet::from_slice(s))));
                    if n <= 12 {
                        assert_eq!(got, brute_independent(&g, k), "n={n} p={p} k={k}");
                    }
                    let mut sorted = got.clone();
                    sorted.sort();
                    sorted.dedup();
                    assert_eq!(sorted, got);
                }
            }
        }
    }

    #[test]
    fn wide_ground_sets() {
        let g = Graph::cycle_power(132, 2).unwrap();
        assert_eq!(g.independence_number(), 44);
        assert!(g.adjacent(132, 1) && g.adjacent(131, 1) && !g.adjacent(130, 1));
        assert!(g.has_independent_set(&g.vertices(), 44));
        assert!(!g.has_independent_set(&g.vertices(), 45));
        let h = Graph::cycle_power(44, 6).unwrap();
        assert_eq!(h.independence_number(), 6);
    }

    #[test]
    fn spec_strings() {
        assert_eq!(
            "cyclepow:9:3".parse::<GraphSpec>().unwrap(),
            GraphSpec::CyclePower(9, 3)
        );
        assert_eq!(
            "squaredcycle:9".parse::<GraphSpec>().unwrap(),
            GraphSpec::SquaredCycle(9)
        );
        assert_eq!(
            "cycle:7".parse::<GraphSpec>().unwrap().to_string(),
            "cycle:7"
        );
        assert!("cyclepow:9".parse::<GraphSpec>().is_err());
        assert!("wheel:9".parse::<GraphSpec>().is_err());
        assert!("complete:x".parse::<GraphSpec>().is_err());
        assert_eq!(
            "squaredcycle:9"
                .parse::<GraphSpec>()
                .unwrap()
                .build()
                .unwrap(),
            Graph::cycle_power(9, 2).unwrap()
        );
    }

    proptest! {
        #[test]
        fn random_graph_enumeration(n in 1usize..=10, bits in proptest::collection::vec(any::<bool>(), 45), k in 0usize..=4) {
            let mut edges = Vec::new();
            let mut idx = 0;
            for u in 1..=n {
                for v in u + 1..=n {
                    if bits[idx % 45] { edges.push((u, v)); }
                    idx += 1;
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let got: Vec<Vec<usize>> = g.independent_sets(k).map(|s| s.to_vec()).collect();
            prop_assert_eq!(&got, &brute_independent(&g, k));
            prop_assert_eq!(g.independence_number(), brute_alpha(&g));
            prop_assert_eq!(g.has_independent_set(&g.vertices(), k), !got.is_empty());
        }
    }
}
