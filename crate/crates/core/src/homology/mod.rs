//! Exact reduced simplicial homology over `Z`.

mod matrix;
mod snf;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

pub use matrix::IntMatrix;
pub use snf::{rank, smith_normal_form, smith_normal_form_within, SmithForm};

use crate::budget::Budget;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::set::VertexSet;

/// Face-count threshold below which [`Method::Auto`] computes directly.
pub const DIRECT_FACE_LIMIT: f64 = (1u64 << 16) as f64;

/// One reduced homology group `Z^betti ⊕ Z/t_1 ⊕ ...`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    /// Invariant factors `>= 2`, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for HomologyGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HomologyGroup", 2)?;
        st.serialize_field("betti", &self.betti)?;
        let torsion: Vec<String> = self.torsion.iter().map(|t| t.to_string()).collect();
        st.serialize_field("torsion", &TorsionList(&torsion))?;
        st.end()
    }
}

struct TorsionList<'a>(&'a [String]);

impl Serialize for TorsionList<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // numbers when they fit, decimal strings otherwise
        s.collect_seq(self.0.iter().map(|t| match t.parse::<u64>() {
            Ok(v) => Num::Small(v),
            Err(_) => Num::Big(t),
        }))
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum Num<'a> {
    Small(u64),
    Big(&'a str),
}

/// Reduced homology by dimension; only nontrivial groups are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyProfile {
    groups: BTreeMap<isize, HomologyGroup>,
}

impl HomologyProfile {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets group `d`; trivial groups are dropped.
    pub fn set(&mut self, d: isize, group: HomologyGroup) {
        if group.is_trivial() {
            self.groups.remove(&d);
        } else {
            self.groups.insert(d, group);
        }
    }

    /// Profile with the given free ranks and no torsion.
    pub fn free(bettis: &[(isize, usize)]) -> Self {
        let mut p = Self::new();
        for &(d, b) in bettis {
            p.set(
                d,
                HomologyGroup {
                    betti: b,
                    torsion: vec![],
                },
            );
        }
        p
    }

    pub fn betti(&self, d: isize) -> usize {
        self.groups.get(&d).map_or(0, |g| g.betti)
    }

    pub fn torsion(&self, d: isize) -> &[BigInt] {
        self.groups.get(&d).map_or(&[], |g| &g.torsion)
    }

    pub fn group(&self, d: isize) -> HomologyGroup {
        self.groups.get(&d).cloned().unwrap_or_default()
    }

    pub fn groups(&self) -> impl Iterator<Item = (isize, &HomologyGroup)> {
        self.groups.iter().map(|(d, g)| (*d, g))
    }

    pub fn is_trivial(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn has_torsion(&self) -> bool {
        self.groups.values().any(|g| !g.torsion.is_empty())
    }

    /// `sum_i (-1)^i betti_i`, the reduced Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|(d, g)| {
                if d.rem_euclid(2) == 0 {
                    g.betti as i64
                } else {
                    -(g.betti as i64)
                }
            })
            .sum()
    }

    /// True iff this is the homology of a `d`-sphere.
    pub fn is_sphere(&self, d: isize) -> bool {
        self.groups.len() == 1 && self.betti(d) == 1 && !self.has_torsion()
    }

    /// The `d` for which [`is_sphere`](Self::is_sphere) holds, if any.
    pub fn sphere_dimension(&self) -> Option<isize> {
        let (&d, _) = self.groups.iter().next()?;
        self.is_sphere(d).then_some(d)
    }
}

/// `true` iff `h` has `betti_d = 1`, every other group zero, and no torsion.
pub fn is_sphere_profile(h: &HomologyProfile, d: isize) -> bool {
    h.is_sphere(d)
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.groups.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|(d, g)| format!("{d}: {g}"))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Parses the [`Display`](fmt::Display) form, e.g. `"4: Z^2, 7: Z + Z/2"` or `"0"`.
impl FromStr for HomologyProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed homology profile `{s}`"));
        let s = s.trim();
        let mut profile = Self::new();
        if s == "0" {
            return Ok(profile);
        }
        for entry in s.split(',') {
            let (d, terms) = entry.split_once(':').ok_or_else(bad)?;
            let d: isize = d.trim().parse().map_err(|_| bad())?;
            let mut group = HomologyGroup::default();
            for term in terms.split('+').map(str::trim) {
                if term == "Z" {
                    group.betti += 1;
                } else if let Some(b) = term.strip_prefix("Z^") {
                    group.betti += b.parse::<usize>().map_err(|_| bad())?;
                } else if let Some(t) = term.strip_prefix("Z/") {
                    group.torsion.push(t.parse::<BigInt>().map_err(|_| bad())?);
                } else if term != "0" {
                    return Err(bad());
                }
            }
            group.torsion.sort();
            if profile.groups.contains_key(&d) {
                return Err(bad());
            }
            profile.set(d, group);
        }
        Ok(profile)
    }
}

impl Serialize for HomologyProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.groups.len()))?;
        for (d, g) in &self.groups {
            m.serialize_entry(&d.to_string(), g)?;
        }
        m.end()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Auto,
    Direct,
    Dual,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "direct" => Ok(Self::Direct),
            "dual" => Ok(Self::Dual),
            _ => Err(Error::Parse(format!(
                "unknown method `{s}` (auto|direct|dual)"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Auto => "auto",
            Self::Direct => "direct",
            Self::Dual => "dual",
        })
    }
}

fn index_of(level: &[VertexSet]) -> HashMap<&VertexSet, usize> {
    level.iter().enumerate().map(|(i, s)| (s, i)).collect()
}

/// `∂_d` with columns the `d`-faces and rows the `(d-1)`-faces of `levels`
/// (as produced by [`SimplicialComplex::faces_by_dim`]).
fn boundary_from_levels(levels: &[Vec<VertexSet>], d: usize) -> IntMatrix {
    let rows = &levels[d];
    let cols = &levels[d + 1];
    let idx = index_of(rows);
    let columns = cols
        .iter()
        .map(|sigma| {
            sigma
                .iter()
                .enumerate()
                .map(|(pos, v)| {
                    let tau = sigma.without(v);
                    let r = *idx.get(&tau).expect("complex is closed under subsets");
                    let sign = if pos % 2 == 0 { 1 } else { -1 };
                    (r, BigInt::from(sign))
                })
                .collect()
        })
        .collect();
    IntMatrix::from_columns(rows.len(), columns)
}

/// The boundary map `∂_d : C_d -> C_{d-1}` for `0 <= d <= dim`. At `d = 0` this
/// is the augmentation row of ones into the empty face.
pub fn boundary_matrix(c: &SimplicialComplex, d: isize) -> Result<IntMatrix> {
    let dim = c.dim().ok_or(Error::VoidComplex)?;
    if d < 0 || d > dim {
        return Err(Error::Parse(format!(
            "boundary dimension {d} outside 0..={dim}"
        )));
    }
    let levels = vec![c.faces_of_dim(d - 1), c.faces_of_dim(d)];
    Ok(boundary_from_levels(&levels, 0))
}

/// Reduced homology of `c` over `Z`.
pub fn reduced_homology(c: &SimplicialComplex) -> Result<HomologyProfile> {
    reduced_homology_within(c, &Budget::unlimited())
}

/// [`reduced_homology`] under a time budget.
pub fn reduced_homology_within(c: &SimplicialComplex, budget: &Budget) -> Result<HomologyProfile> {
    if c.is_void() {
        return Err(Error::VoidComplex);
    }
    let levels = c.faces_by_dim_within(budget)?;
    homology_from_levels(&levels, budget)
}

/// `levels[i]` = faces of dimension `i - 1`.
fn homology_from_levels(levels: &[Vec<VertexSet>], budget: &Budget) -> Result<HomologyProfile> {
    // forms[d] = SNF of ∂_d (d-faces -> (d-1)-faces), d = 0..top
    let forms: Vec<SmithForm> = (0..levels.len() - 1)
        .into_par_iter()
        .map(|d| smith_normal_form_within(&boundary_from_levels(levels, d), budget))
        .collect::<Result<_>>()?;
    let mut profile = HomologyProfile::new();
    for (i, level) in levels.iter().enumerate() {
        let d = i as isize - 1;
        // ∂ out of dimension d is forms[i - 1] (absent for the empty face)
        let out_rank = if i == 0 { 0 } else { forms[i - 1].rank };
        let in_form = forms.get(i);
        let in_rank = in_form.map_or(0, |f| f.rank);
        let betti = level.len() - out_rank - in_rank;
        let torsion = in_form.map(SmithForm::torsion).unwrap_or_default();
        profile.set(d, HomologyGroup { betti, torsion });
    }
    Ok(profile)
}

/// Homology of `total_cut(g, k)` computed from its Alexander dual:
/// `H̃_i(Δ) ≅ H̃^{n-i-3}(Δ^∨)`, with cohomology torsion shifted down one degree.
pub fn homology_via_dual(g: &Graph, k: usize) -> Result<HomologyProfile> {
    homology_via_dual_within(g, k, &Budget::unlimited())
}

/// [`homology_via_dual`] under a time budget.
pub fn homology_via_dual_within(g: &Graph, k: usize, budget: &Budget) -> Result<HomologyProfile> {
    if k == 0 {
        return Err(Error::FullSimplex);
    }
    if !g.has_independent_set(&g.vertices(), k) {
        return Err(Error::VoidComplex);
    }
    let dual = SimplicialComplex::dual_of_total_cut_within(g, k, budget)?;
    let dual_h = reduced_homology_within(&dual, budget)?;
    Ok(transfer_dual(&dual_h, g.n()))
}

/// Maps the homology of `Δ^∨` on `n` vertices to that of `Δ`.
pub fn transfer_dual(dual_h: &HomologyProfile, n: usize) -> HomologyProfile {
    let n = n as isize;
    let mut out = HomologyProfile::new();
    for (j, g) in dual_h.groups() {
        if g.betti > 0 {
            let i = n - j - 3;
            let mut grp = out.group(i);
            grp.betti = g.betti;
            out.set(i, grp);
        }
        if !g.torsion.is_empty() {
            let i = n - j - 4;
            let mut grp = out.group(i);
            grp.torsion = g.torsion.clone();
            out.set(i, grp);
        }
    }
    out
}

/// Homology of `total_cut(g, k)` by the requested route. Returns the route
/// actually taken (`Auto` resolves to `Direct` or `Dual`).
pub fn total_cut_homology(
    g: &Graph,
    k: usize,
    method: Method,
) -> Result<(HomologyProfile, Method)> {
    total_cut_homology_within(g, k, method, &Budget::unlimited())
}

/// [`total_cut_homology`] under a time budget.
pub fn total_cut_homology_within(
    g: &Graph,
    k: usize,
    method: Method,
    budget: &Budget,
) -> Result<(HomologyProfile, Method)> {
    if k == 0 {
        return Err(Error::FullSimplex);
    }
    if !g.has_independent_set(&g.vertices(), k) {
        return Err(Error::VoidComplex);
    }
    let resolved = match method {
        Method::Auto => {
            if estimated_total_cut_faces(g, k) < DIRECT_FACE_LIMIT {
                Method::Direct
            } else {
                Method::Dual
            }
        }
        m => m,
    };
    let h = match resolved {
        Method::Direct => reduced_homology_within(&SimplicialComplex::total_cut(g, k), budget)?,
        _ => homology_via_dual_within(g, k, budget)?,
    };
    Ok((h, resolved))
}

/// `min(2^n, #facets * 2^(n-k))`, counting facets without materializing them.
pub fn estimated_total_cut_faces(g: &Graph, k: usize) -> f64 {
    let n = g.n();
    let cap = 2f64.powi(n as i32);
    let per_facet = 2f64.powi((n - k) as i32);
    let mut facets = 0f64;
    for _ in g.independent_sets(k) {
        facets += 1.0;
        if facets * per_facet >= cap {
            return cap;
        }
    }
    (facets * per_facet).min(cap)
}

/// `true` iff the chain complex of `c` satisfies `∂_{d-1} ∂_d = 0` throughout.
pub fn chain_condition_holds(c: &SimplicialComplex) -> bool {
    let levels = c.faces_by_dim();
    (1..levels.len().saturating_sub(1)).all(|d| {
        let lower = boundary_from_levels(&levels, d - 1);
        let upper = boundary_from_levels(&levels, d);
        lower.mul(&upper).is_zero()
    })
}
