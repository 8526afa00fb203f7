//! Named, reproducible checks that tie the other modules together, plus a
//! small work pool to run them.
//!
//! Each check computes something, compares it with an exact expectation and
//! returns a [`CheckReport`]. Long computations run under a [`Budget`]; running
//! out of time yields [`Verdict::Skipped`], never a silent pass.

mod expected;
mod report;

use std::collections::BTreeSet;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use expected::{Expectation, ExpectedCell, ExpectedTables, Tier};
pub use report::{
    render_csv, render_grid, render_jsonl, render_markdown, GridAxis, Summary, SCHEMA_VERSION,
};

use crate::blocks::enumerate_m1_unmatched;
use crate::budget::Budget;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphSpec};
use crate::homology::{
    chain_condition_holds, homology_via_dual_within, reduced_homology_within,
    total_cut_homology_within, Method,
};
use crate::morse::{
    element_matching_sequence_within, unmatched_after_first, verify_acyclic_within,
};
use crate::set::VertexSet;

pub const DEFAULT_TIMEOUT_SECS: u64 = 300;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Time allowed for each unit of work (composite checks get it per part).
    pub timeout: Duration,
    pub method: Method,
    /// Seed for the randomized property checks.
    pub seed: u64,
    /// Worker threads for [`run_checks`]; 0 means one per available core.
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            timeout: Duration::from_secs(DEFAULT_TIMEOUT_SECS),
            method: Method::Auto,
            seed: 1,
            threads: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
}

impl Params {
    pub fn kn(k: usize, n: usize) -> Self {
        Self {
            k: Some(k),
            n: Some(n),
            p: None,
        }
    }

    pub fn kpn(k: usize, p: usize, n: usize) -> Self {
        Self {
            k: Some(k),
            n: Some(n),
            p: Some(p),
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, v) in [("k", self.k), ("p", self.p), ("n", self.n)] {
            if let Some(v) = v {
                parts.push(format!("{name}={v}"));
            }
        }
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub params: Params,
    pub expected: String,
    pub observed: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Homology route actually used, when one was.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    pub wall_seconds: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<CheckReport>,
}

impl CheckReport {
    fn new(name: &str, params: Params, expected: impl fmt::Display) -> Self {
        Self {
            name: name.to_string(),
            params,
            expected: expected.to_string(),
            observed: String::new(),
            verdict: Verdict::Skipped,
            reason: None,
            method: None,
            wall_seconds: 0.0,
            parts: Vec::new(),
        }
    }

    fn judge(mut self, observed: impl fmt::Display, pass: bool) -> Self {
        self.observed = observed.to_string();
        self.verdict = if pass { Verdict::Pass } else { Verdict::Fail };
        self
    }

    fn skip(mut self, reason: impl Into<String>) -> Self {
        self.verdict = Verdict::Skipped;
        self.reason = Some(reason.into());
        self
    }

    fn fail(mut self, reason: impl Into<String>) -> Self {
        self.verdict = Verdict::Fail;
        self.reason = Some(reason.into());
        self
    }

    /// Combines sub-checks: fail if any failed, else skipped if any skipped.
    fn composite(name: &str, params: Params, parts: Vec<CheckReport>) -> Self {
        let join = |f: fn(&CheckReport) -> &str| parts.iter().map(f).collect::<Vec<_>>().join("; ");
        let mut r = Self::new(name, params, join(|p| &p.expected));
        r.observed = join(|p| &p.observed);
        r.verdict = if parts.iter().any(|p| p.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if parts.iter().any(|p| p.verdict == Verdict::Skipped) {
            Verdict::Skipped
        } else {
            Verdict::Pass
        };
        let reasons: Vec<String> = parts
            .iter()
            .filter_map(|p| p.reason.as_ref().map(|why| format!("{}: {why}", p.name)))
            .collect();
        r.reason = (!reasons.is_empty()).then(|| reasons.join("; "));
        r.method = parts.iter().find_map(|p| p.method);
        r.wall_seconds = parts.iter().map(|p| p.wall_seconds).sum();
        r.parts = parts;
        r
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// The part with the given name suffix, for composite reports.
    pub fn part(&self, suffix: &str) -> Option<&CheckReport> {
        self.parts.iter().find(|p| p.name.ends_with(suffix))
    }
}

/// Runs `work` under a fresh budget, turning timeouts into `Skipped`, errors
/// and panics into `Fail`, and stamping the wall time.
fn attempt(
    report: CheckReport,
    opts: &VerifyOptions,
    work: impl FnOnce(CheckReport, &Budget) -> Result<CheckReport>,
) -> CheckReport {
    let budget = Budget::for_duration(opts.timeout);
    let start = Instant::now();
    let fallback = report.clone();
    let outcome = catch_unwind(AssertUnwindSafe(|| work(report, &budget)));
    let elapsed = start.elapsed().as_secs_f64();
    let mut r = match outcome {
        Ok(Ok(r)) => r,
        Ok(Err(Error::TimedOut)) => {
            fallback.skip(format!("timed out after {}s", opts.timeout.as_secs_f64()))
        }
        Ok(Err(e)) => fallback.fail(e.to_string()),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            fallback.fail(format!("panicked: {msg}"))
        }
    };
    r.wall_seconds = elapsed;
    r
}

/// Homology of `Δ_k^t(g)` compared against `expected`.
fn homology_part(
    name: &str,
    params: Params,
    g: &Graph,
    k: usize,
    expected: Expectation,
    opts: &VerifyOptions,
) -> CheckReport {
    let report = CheckReport::new(name, params, &expected);
    attempt(report, opts, |mut r, budget| {
        if !g.has_independent_set(&g.vertices(), k) {
            return Ok(r.judge("void", expected == Expectation::Void));
        }
        let (h, route) = total_cut_homology_within(g, k, opts.method, budget)?;
        r.method = Some(route);
        let pass = expected == Expectation::Profile(h.clone());
        Ok(r.judge(h.to_string(), pass))
    })
}

/// Element matching with `order` on `Δ_k^t(g)`, expecting exactly `expected`
/// as the sole critical cell, the empty face paired, and certified acyclicity.
fn morse_part(
    name: &str,
    params: Params,
    g: &Graph,
    k: usize,
    order: Vec<usize>,
    expected: VertexSet,
    opts: &VerifyOptions,
) -> CheckReport {
    let report = CheckReport::new(
        name,
        params,
        format!("sole critical cell {expected}, acyclic"),
    );
    attempt(report, opts, |r, budget| {
        let c = SimplicialComplex::total_cut(g, k);
        let m = element_matching_sequence_within(&c, &order, budget)?;
        let acyclic = verify_acyclic_within(&m, budget)?;
        let cells: Vec<String> = m.critical().iter().map(|s| s.to_string()).collect();
        let observed = format!(
            "critical [{}], {}",
            cells.join(" "),
            if acyclic { "acyclic" } else { "NOT acyclic" }
        );
        let pass = m.critical() == [expected.clone()] && m.empty_face_paired() && acyclic;
        Ok(r.judge(observed, pass))
    })
}

/// The facets of `Δ_k^t(g)` equal `expected` as a set of sets.
pub fn check_facets(
    spec: &GraphSpec,
    k: usize,
    expected: &[VertexSet],
    opts: &VerifyOptions,
) -> CheckReport {
    let want: BTreeSet<VertexSet> = expected.iter().cloned().collect();
    let shown: Vec<String> = want.iter().map(|s| s.to_string()).collect();
    let mut params = Params {
        k: Some(k),
        ..Params::default()
    };
    let report = CheckReport::new("facets", params.clone(), shown.join(" "));
    let out = attempt(report, opts, |r, _| {
        let g = spec.build()?;
        let c = SimplicialComplex::total_cut(&g, k);
        let got: BTreeSet<VertexSet> = c.facets().iter().cloned().collect();
        let shown: Vec<String> = got.iter().map(|s| s.to_string()).collect();
        Ok(r.judge(shown.join(" "), got == want))
    });
    params.n = spec.build().ok().map(|g| g.n());
    CheckReport { params, ..out }
}

/// Every `(3k-2)`-subset of `[n]` induces a subgraph of `W_n` with a
/// `k`-independent set, for `n >= 3k + 1`.
pub fn check_subset_independence(k: usize, n: usize, opts: &VerifyOptions) -> CheckReport {
    let size = (3 * k).saturating_sub(2);
    let report = CheckReport::new(
        "subset_independence",
        Params::kn(k, n),
        format!("every {size}-subset contains a {k}-independent set"),
    );
    if k == 0 || n < 3 * k + 1 {
        return report.skip("hypothesis not met: n < 3k + 1");
    }
    attempt(report, opts, |r, budget| {
        let g = Graph::squared_cycle(n)?;
        let mut checked = 0usize;
        let mut ticks = 0u32;
        let mut counterexample = None;
        // every size-`size` subset of [n], in lexicographic order
        let mut idx: Vec<usize> = (1..=size).collect();
        loop {
            budget.tick(&mut ticks)?;
            let s = VertexSet::from_slice(&idx);
            checked += 1;
            if !g.has_independent_set(&s, k) {
                counterexample = Some(s);
                break;
            }
            let Some(i) = (0..size).rev().find(|&i| idx[i] < n - (size - 1 - i)) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
        Ok(match counterexample {
            None => r.judge(format!("all {checked} subsets do"), true),
            Some(s) => r.judge(format!("{s} has no {k}-independent set"), false),
        })
    })
}

/// `Δ_k^t(C_n)` is void for `n < 2k` and an `(n - 2k)`-sphere otherwise.
pub fn check_cycle(k: usize, n: usize, opts: &VerifyOptions) -> CheckReport {
    let params = Params::kn(k, n);
    if k < 2 {
        return CheckReport::new("cycle", params, "-").skip("hypothesis not met: k < 2");
    }
    if n < 3 {
        return CheckReport::new("cycle", params, "-").skip("a cycle needs n >= 3");
    }
    let expected = if n < 2 * k {
        Expectation::Void
    } else {
        Expectation::sphere(n as isize - 2 * k as isize)
    };
    match Graph::cycle(n) {
        Ok(g) => homology_part("cycle", params, &g, k, expected, opts),
        Err(e) => CheckReport::new("cycle", params, expected).fail(e.to_string()),
    }
}

/// `Δ_3^t(W_n)` is a sphere of dimension `2n - 17` (`n = 9, 10`) or `n - 6`
/// (`n >= 11`); for `n >= 11` the matching with order `[1..n-1]` leaves the
/// single critical cell `[n] \ {1, n-7, n-5, n-3, n-1}`.
pub fn check_w_k3(n: usize, opts: &VerifyOptions) -> CheckReport {
    let params = Params::kn(3, n);
    if n < 9 {
        return CheckReport::new("w_k3", params, "-").skip("hypothesis not met: n < 9");
    }
    let g = match Graph::squared_cycle(n) {
        Ok(g) => g,
        Err(e) => return CheckReport::new("w_k3", params, "-").fail(e.to_string()),
    };
    let dim = if n <= 10 {
        2 * n as isize - 17
    } else {
        n as isize - 6
    };
    let mut parts = vec![homology_part(
        "w_k3/homology",
        params.clone(),
        &g,
        3,
        Expectation::sphere(dim),
        opts,
    )];
    if n >= 11 {
        let cell =
            VertexSet::full(n).difference(&VertexSet::from_slice(&[1, n - 7, n - 5, n - 3, n - 1]));
        parts.push(morse_part(
            "w_k3/morse",
            params.clone(),
            &g,
            3,
            (1..n).collect(),
            cell,
            opts,
        ));
    }
    CheckReport::composite("w_k3", params, parts)
}

fn check_w_offset(name: &str, k: usize, extra: usize, opts: &VerifyOptions) -> CheckReport {
    let n = 3 * k + extra;
    let params = Params::kn(k, n);
    if k < 3 {
        return CheckReport::new(name, params, "-").skip("hypothesis not met: k < 3");
    }
    let (dim, order_len, cell): (isize, usize, &[usize]) = match extra {
        1 => (3, 7, &[2, 3, 5, 7]),
        _ => (5, 11, &[2, 3, 5, 7, 9, 11]),
    };
    let g = match Graph::squared_cycle(n) {
        Ok(g) => g,
        Err(e) => return CheckReport::new(name, params, "-").fail(e.to_string()),
    };
    let parts = vec![
        homology_part(
            &format!("{name}/homology"),
            params.clone(),
            &g,
            k,
            Expectation::sphere(dim),
            opts,
        ),
        morse_part(
            &format!("{name}/morse"),
            params.clone(),
            &g,
            k,
            (1..=order_len).collect(),
            VertexSet::from_slice(cell),
            opts,
        ),
    ];
    CheckReport::composite(name, params, parts)
}

/// `Δ_k^t(W_{3k+1})` is a 3-sphere and the matching with order `[1..7]`
/// leaves only `{2,3,5,7}`.
pub fn check_w_3k1(k: usize, opts: &VerifyOptions) -> CheckReport {
    check_w_offset("w_3k1", k, 1, opts)
}

/// `Δ_k^t(W_{3k+2})` is a 5-sphere and the matching with order `[1..11]`
/// leaves only `{2,3,5,7,9,11}`.
pub fn check_w_3k2(k: usize, opts: &VerifyOptions) -> CheckReport {
    check_w_offset("w_3k2", k, 2, opts)
}

/// `Δ_k^t(W_n)` is void exactly when `n <= 3k - 1`.
pub fn check_void(k: usize, n: usize, opts: &VerifyOptions) -> CheckReport {
    let expect_void = n < 3 * k;
    let report = CheckReport::new(
        "void",
        Params::kn(k, n),
        if expect_void { "void" } else { "nonvoid" },
    );
    attempt(report, opts, |r, _| {
        let g = Graph::squared_cycle(n)?;
        let c = SimplicialComplex::total_cut(&g, k);
        let mut pass = c.is_void() == expect_void;
        if !expect_void && k > 0 {
            // {1, 4, ..., 3k-2} witnesses nonvoidness
            let witness: VertexSet = (0..k).map(|i| 3 * i + 1).collect();
            pass &= g.is_independent(&witness) && c.is_face(&witness.complement(n));
        }
        Ok(r.judge(if c.is_void() { "void" } else { "nonvoid" }, pass))
    })
}

/// One cell of a homology table for `Δ_k^t(C_n^p)`. Without an expectation
/// the profile is computed and the verdict is `Skipped`.
pub fn check_table_cell(
    k: usize,
    p: usize,
    n: usize,
    expected: Option<&Expectation>,
    opts: &VerifyOptions,
) -> CheckReport {
    let params = Params::kpn(k, p, n);
    let g = match Graph::cycle_power(n, p) {
        Ok(g) => g,
        Err(e) => return CheckReport::new("table", params, "-").fail(e.to_string()),
    };
    match expected {
        Some(e) => homology_part("table", params, &g, k, e.clone(), opts),
        None => {
            let report = CheckReport::new("table", params, "-");
            attempt(report, opts, |mut r, budget| {
                if !g.has_independent_set(&g.vertices(), k) {
                    return Ok(r.judge("void", true).skip("no expected value"));
                }
                let (h, route) = total_cut_homology_within(&g, k, opts.method, budget)?;
                r.method = Some(route);
                Ok(r.judge(h.to_string(), true).skip("no expected value"))
            })
        }
    }
}

/// Every cell of the `p × n` grid for fixed `k`, checked against `tables`
/// where an expectation exists.
pub fn table_sweep(
    k: usize,
    ps: impl IntoIterator<Item = usize>,
    ns: impl IntoIterator<Item = usize> + Clone,
    tables: &ExpectedTables,
    opts: &VerifyOptions,
) -> Vec<CheckReport> {
    let checks: Vec<Check> = ps
        .into_iter()
        .flat_map(|p| {
            ns.clone().into_iter().map(move |n| Check::TableCell {
                k,
                p,
                n,
                expected: tables.get(k, p, n).map(|c| c.expected.clone()),
            })
        })
        .collect();
    run_checks(&checks, opts)
}

/// The block-word enumeration agrees with the direct scan of faces left
/// unmatched by the first element matching.
pub fn check_blocks(k: usize, n: usize, opts: &VerifyOptions) -> CheckReport {
    let report = CheckReport::new(
        "blocks",
        Params::kn(k, n),
        "same face set as the direct scan",
    );
    if n < 3 * k {
        return report.skip("hypothesis not met: the complex is void");
    }
    attempt(report, opts, |r, _| {
        let g = Graph::squared_cycle(n)?;
        let from_words: BTreeSet<VertexSet> = enumerate_m1_unmatched(&g, k)?
            .into_iter()
            .map(|(_, s)| s)
            .collect();
        let c = SimplicialComplex::total_cut(&g, k);
        let direct: BTreeSet<VertexSet> = unmatched_after_first(&c, 1).collect();
        let missing = direct.difference(&from_words).count();
        let extra = from_words.difference(&direct).count();
        let observed = if missing == 0 && extra == 0 {
            format!("{} faces, identical", direct.len())
        } else {
            format!("{missing} missing, {extra} extra")
        };
        Ok(r.judge(observed, missing == 0 && extra == 0))
    })
}

/// Test instances for the property checks: every cycle power `C_n^p` with
/// `3 <= n <= 12` and every `k <= 3`, plus 25 random graphs from `seed`.
pub fn property_instances(seed: u64) -> Vec<(String, Graph, usize)> {
    let mut out = Vec::new();
    for n in 3..=12 {
        for p in 1..=n / 2 {
            let g = Graph::cycle_power(n, p).expect("valid cycle power");
            for k in 1..=3 {
                out.push((format!("C_{n}^{p} k={k}"), g.clone(), k));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..25 {
        let n = rng.gen_range(4..=10);
        let edges: Vec<(usize, usize)> = (1..=n)
            .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(0.4))
            .collect();
        let g = Graph::from_edges(n, &edges).expect("valid random graph");
        let k = rng.gen_range(1..=3);
        out.push((format!("random#{i} n={n} k={k}"), g, k));
    }
    out
}

/// Runs `f` over the property instances and reports the first failures.
fn property(
    name: &str,
    expected: &str,
    opts: &VerifyOptions,
    f: impl Fn(&Graph, usize, &mut ChaCha8Rng, &Budget) -> Result<Option<String>>,
) -> CheckReport {
    let report = CheckReport::new(name, Params::default(), expected);
    attempt(report, opts, |r, budget| {
        let instances = property_instances(opts.seed);
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9_7f4a_7c15);
        let mut failures = Vec::new();
        let mut tested = 0;
        for (label, g, k) in &instances {
            if !g.has_independent_set(&g.vertices(), *k) {
                continue;
            }
            tested += 1;
            if let Some(problem) = f(g, *k, &mut rng, budget)? {
                failures.push(format!("{label}: {problem}"));
            }
        }
        let observed = if failures.is_empty() {
            format!("{tested} nonvoid instances, no violations")
        } else {
            format!(
                "{} violations: {}",
                failures.len(),
                failures
                    .iter()
                    .take(3)
                    .cloned()
                    .collect::<Vec<_>>()
                    .join("; ")
            )
        };
        Ok(r.judge(observed, failures.is_empty()))
    })
}

/// Direct and dual homology routes agree.
pub fn property_dual_direct(opts: &VerifyOptions) -> CheckReport {
    property(
        "dual_vs_direct",
        "identical profiles",
        opts,
        |g, k, _, budget| {
            let direct = reduced_homology_within(&SimplicialComplex::total_cut(g, k), budget)?;
            let dual = homology_via_dual_within(g, k, budget)?;
            Ok((direct != dual).then(|| format!("direct {direct} vs dual {dual}")))
        },
    )
}

fn random_order(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let len = rng.gen_range(0..=n);
    order.truncate(len);
    order
}

/// Critical cell counts bound the Betti numbers (order `[1..n]`).
pub fn property_morse_inequalities(opts: &VerifyOptions) -> CheckReport {
    property(
        "morse_inequalities",
        "c_i >= betti_i",
        opts,
        |g, k, _, budget| {
            let c = SimplicialComplex::total_cut(g, k);
            let order: Vec<usize> = (1..=g.n()).collect();
            let m = element_matching_sequence_within(&c, &order, budget)?;
            let h = reduced_homology_within(&c, budget)?;
            let violation = h
                .groups()
                .find(|(d, grp)| m.count(*d) < grp.betti)
                .map(|(d, grp)| format!("c_{d} = {} < betti {}", m.count(d), grp.betti));
            Ok(violation)
        },
    )
}

/// Element matchings in random orders pass the independent acyclicity check
/// and partition the faces.
pub fn property_acyclicity(opts: &VerifyOptions) -> CheckReport {
    property(
        "acyclicity",
        "acyclic, faces partitioned",
        opts,
        |g, k, rng, budget| {
            let c = SimplicialComplex::total_cut(g, k);
            let order = random_order(g.n(), rng);
            let m = element_matching_sequence_within(&c, &order, budget)?;
            if m.face_count() != 2 * m.matching().len() + m.critical().len() {
                return Ok(Some(format!("order {order:?}: faces not partitioned")));
            }
            Ok((!verify_acyclic_within(&m, budget)?)
                .then(|| format!("order {order:?}: cycle found")))
        },
    )
}

/// `∂∂ = 0` on the complex and on its dual.
pub fn property_chain_condition(opts: &VerifyOptions) -> CheckReport {
    property(
        "chain_condition",
        "boundary squares to zero",
        opts,
        |g, k, _, budget| {
            budget.check()?;
            let c = SimplicialComplex::total_cut(g, k);
            if !chain_condition_holds(&c) {
                return Ok(Some("on the complex".into()));
            }
            let d = SimplicialComplex::dual_of_total_cut_within(g, k, budget)?;
            Ok((!chain_condition_holds(&d)).then(|| "on the dual".into()))
        },
    )
}

/// A check description that can be listed, filtered and run later.
#[derive(Clone, Debug)]
pub enum Check {
    Facets {
        spec: GraphSpec,
        k: usize,
        expected: Vec<VertexSet>,
    },
    SubsetIndependence {
        k: usize,
        n: usize,
    },
    Cycle {
        k: usize,
        n: usize,
    },
    WK3 {
        n: usize,
    },
    W3k1 {
        k: usize,
    },
    W3k2 {
        k: usize,
    },
    Void {
        k: usize,
        n: usize,
    },
    TableCell {
        k: usize,
        p: usize,
        n: usize,
        expected: Option<Expectation>,
    },
    Blocks {
        k: usize,
        n: usize,
    },
    DualDirect,
    MorseInequalities,
    Acyclicity,
    ChainCondition,
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Facets { .. } => "facets",
            Self::SubsetIndependence { .. } => "subset_independence",
            Self::Cycle { .. } => "cycle",
            Self::WK3 { .. } => "w_k3",
            Self::W3k1 { .. } => "w_3k1",
            Self::W3k2 { .. } => "w_3k2",
            Self::Void { .. } => "void",
            Self::TableCell { .. } => "table",
            Self::Blocks { .. } => "blocks",
            Self::DualDirect => "dual_vs_direct",
            Self::MorseInequalities => "morse_inequalities",
            Self::Acyclicity => "acyclicity",
            Self::ChainCondition => "chain_condition",
        }
    }

    pub fn run(&self, opts: &VerifyOptions) -> CheckReport {
        match self {
            Self::Facets { spec, k, expected } => check_facets(spec, *k, expected, opts),
            Self::SubsetIndependence { k, n } => check_subset_independence(*k, *n, opts),
            Self::Cycle { k, n } => check_cycle(*k, *n, opts),
            Self::WK3 { n } => check_w_k3(*n, opts),
            Self::W3k1 { k } => check_w_3k1(*k, opts),
            Self::W3k2 { k } => check_w_3k2(*k, opts),
            Self::Void { k, n } => check_void(*k, *n, opts),
            Self::TableCell { k, p, n, expected } => {
                check_table_cell(*k, *p, *n, expected.as_ref(), opts)
            }
            Self::Blocks { k, n } => check_blocks(*k, *n, opts),
            Self::DualDirect => property_dual_direct(opts),
            Self::MorseInequalities => property_morse_inequalities(opts),
            Self::Acyclicity => property_acyclicity(opts),
            Self::ChainCondition => property_chain_condition(opts),
        }
    }
}

/// Runs checks on a pool of `opts.threads` workers; reports come back in
/// input order.
pub fn run_checks(checks: &[Check], opts: &VerifyOptions) -> Vec<CheckReport> {
    run_checks_with(checks, opts, |_| {})
}

/// [`run_checks`], calling `on_done` as each report completes.
pub fn run_checks_with(
    checks: &[Check],
    opts: &VerifyOptions,
    on_done: impl Fn(&CheckReport) + Sync,
) -> Vec<CheckReport> {
    let workers = match opts.threads {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        t => t,
    }
    .min(checks.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<CheckReport>>> = Mutex::new(vec![None; checks.len()]);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(check) = checks.get(i) else { break };
                let report = check.run(opts);
                on_done(&report);
                slots.lock().expect("report slots")[i] = Some(report);
            });
        }
    });
    slots
        .into_inner()
        .expect("report slots")
        .into_iter()
        .map(|r| r.expect("every check ran"))
        .collect()
}

/// Named suites: `full` (every headline check over its full parameter grid,
/// stretch table rows included; also accepted as `paper`) and `quick` (the
/// same without stretch rows and with the smaller grids).
pub fn suite(name: &str, tables: &ExpectedTables) -> Result<Vec<Check>> {
    let full = match name {
        "full" | "paper" => true,
        "quick" => false,
        other => {
            return Err(Error::Parse(format!(
                "unknown suite `{other}` (full|quick)"
            )))
        }
    };
    let mut checks = vec![Check::Facets {
        spec: GraphSpec::SquaredCycle(9),
        k: 3,
        expected: vec![
            VertexSet::from_slice(&[1, 2, 4, 5, 7, 8]),
            VertexSet::from_slice(&[1, 3, 4, 6, 7, 9]),
            VertexSet::from_slice(&[2, 3, 5, 6, 8, 9]),
        ],
    }];
    let w_top = if full { 16 } else { 12 };
    checks.extend((9..=w_top).map(|n| Check::WK3 { n }));
    let ks: &[usize] = if full { &[3, 4, 5] } else { &[3] };
    checks.extend(ks.iter().map(|&k| Check::W3k1 { k }));
    checks.extend(ks.iter().map(|&k| Check::W3k2 { k }));
    for k in 2..=4 {
        checks.extend((3..=14).map(|n| Check::Cycle { k, n }));
    }
    for cell in tables.cells() {
        if cell.tier == Tier::Stretch && !full {
            continue;
        }
        checks.push(Check::TableCell {
            k: cell.k,
            p: cell.p,
            n: cell.n,
            expected: Some(cell.expected.clone()),
        });
    }
    checks.extend((10..=15).map(|n| Check::SubsetIndependence { k: 3, n }));
    checks.extend((13..=17).map(|n| Check::SubsetIndependence { k: 4, n }));
    checks.extend([
        Check::DualDirect,
        Check::MorseInequalities,
        Check::Acyclicity,
        Check::ChainCondition,
    ]);
    checks.extend((9..=14).map(|n| Check::Blocks { k: 3, n }));
    checks.extend((13..=16).map(|n| Check::Blocks { k: 4, n }));
    for k in 2..=5 {
        checks.extend((3..=20).map(|n| Check::Void { k, n }));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> VerifyOptions {
        VerifyOptions {
            timeout: Duration::from_secs(60),
            ..VerifyOptions::default()
        }
    }

    #[test]
    fn subset_gate_and_small_cases() {
        let o = opts();
        assert_eq!(
            check_subset_independence(3, 9, &o).verdict,
            Verdict::Skipped
        );
        let r = check_subset_independence(3, 10, &o);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.observed, "all 120 subsets do");
        assert!(check_subset_independence(4, 13, &o).passed());
    }

    #[test]
    fn cycle_examples() {
        let o = opts();
        let r = check_cycle(2, 4, &o);
        assert!(r.passed());
        assert_eq!(r.observed, "0: Z");
        let r = check_cycle(3, 5, &o);
        assert!(r.passed());
        assert_eq!(r.observed, "void");
        assert_eq!(check_cycle(2, 7, &o).observed, "3: Z");
        assert_eq!(check_cycle(1, 7, &o).verdict, Verdict::Skipped);
    }

    #[test]
    fn squared_cycle_checks() {
        let o = opts();
        let r = check_w_k3(9, &o);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.observed, "1: Z");
        assert!(check_w_k3(10, &o).passed());
        let r = check_w_k3(12, &o);
        assert!(r.passed(), "{r:?}");
        assert!(r
            .part("morse")
            .unwrap()
            .observed
            .contains("{2,3,4,6,8,10,12}"));
        assert!(check_w_3k1(3, &o).passed());
        let r = check_w_3k2(3, &o);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.parts.len(), 2);
        assert_eq!(check_w_k3(8, &o).verdict, Verdict::Skipped);
    }

    #[test]
    fn void_examples() {
        let o = opts();
        assert!(check_void(3, 8, &o).passed());
        assert_eq!(check_void(3, 8, &o).observed, "void");
        assert!(check_void(3, 9, &o).passed());
        assert!(check_void(5, 15, &o).passed());
    }

    #[test]
    fn table_cells() {
        let o = opts();
        let t = ExpectedTables::builtin();
        let r = check_table_cell(2, 4, 12, Some(&t.get(2, 4, 12).unwrap().expected), &o);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.observed, "7: Z^3");
        assert!(check_table_cell(2, 6, 10, Some(&Expectation::Void), &o).passed());
        let wrong = check_table_cell(2, 3, 9, Some(&Expectation::sphere(4)), &o);
        assert_eq!(wrong.verdict, Verdict::Fail);
        let open = check_table_cell(2, 3, 9, None, &o);
        assert_eq!(
            (open.verdict, open.observed.as_str()),
            (Verdict::Skipped, "4: Z^2")
        );
    }

    #[test]
    fn timeouts_are_skips() {
        let o = VerifyOptions {
            timeout: Duration::ZERO,
            ..opts()
        };
        let r = check_table_cell(4, 3, 22, Some(&Expectation::sphere(14)), &o);
        assert_eq!(r.verdict, Verdict::Skipped, "{r:?}");
        assert!(r.reason.unwrap().contains("timed out"));
    }

    #[test]
    fn blocks_and_facets() {
        let o = opts();
        assert!(check_blocks(3, 9, &o).passed());
        assert!(check_blocks(3, 12, &o).passed());
        let suite = suite("quick", &ExpectedTables::builtin()).unwrap();
        let r = suite[0].run(&o);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.params.n, Some(9));
        assert!(super::suite("nope", &ExpectedTables::builtin()).is_err());
    }

    #[test]
    fn reports_are_reproducible() {
        let o = opts();
        let a = property_acyclicity(&o);
        let b = property_acyclicity(&o);
        assert!(a.passed(), "{a:?}");
        assert_eq!((a.verdict, &a.observed), (b.verdict, &b.observed));
        assert_eq!(property_instances(7).len(), property_instances(7).len());
    }

    #[test]
    fn pool_preserves_order() {
        let checks: Vec<Check> = (3..=8).map(|n| Check::Void { k: 2, n }).collect();
        let o = VerifyOptions {
            threads: 3,
            ..opts()
        };
        let reports = run_checks(&checks, &o);
        let ns: Vec<Option<usize>> = reports.iter().map(|r| r.params.n).collect();
        assert_eq!(ns, (3..=8).map(Some).collect::<Vec<_>>());
        assert!(reports.iter().all(CheckReport::passed));
    }
}
