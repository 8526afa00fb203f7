use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use super::{CheckReport, Verdict};

/// Version of the JSON-lines record layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(reports: &[CheckReport]) -> Self {
        let mut s = Self::default();
        for r in reports {
            match r.verdict {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::Skipped => s.skipped += 1,
            }
        }
        s
    }

    pub fn all_passed(&self) -> bool {
        self.fail == 0
    }
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|")
}

/// One markdown row per report; composite reports list their parts beneath.
pub fn render_markdown(reports: &[CheckReport]) -> String {
    let mut out = String::from("| check | params | expected | observed | verdict | seconds |\n");
    out.push_str("|---|---|---|---|---|---|\n");
    fn row(out: &mut String, r: &CheckReport) {
        let verdict = match &r.reason {
            Some(why) => format!("{} ({why})", r.verdict),
            None => r.verdict.to_string(),
        };
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {:.3} |",
            cell(&r.name),
            r.params,
            cell(&r.expected),
            cell(&r.observed),
            cell(&verdict),
            r.wall_seconds
        );
        for p in &r.parts {
            row(out, p);
        }
    }
    for r in reports {
        row(&mut out, r);
    }
    let s = Summary::of(reports);
    let _ = writeln!(
        out,
        "\n{} passed, {} failed, {} skipped",
        s.pass, s.fail, s.skipped
    );
    out
}

#[derive(Serialize)]
struct Line<'a> {
    schema: u32,
    #[serde(flatten)]
    report: &'a CheckReport,
}

/// One JSON object per line, each tagged with [`SCHEMA_VERSION`].
pub fn render_jsonl(reports: &[CheckReport]) -> String {
    reports
        .iter()
        .map(|r| {
            let line = serde_json::to_string(&Line {
                schema: SCHEMA_VERSION,
                report: r,
            })
            .expect("reports serialize");
            line + "\n"
        })
        .collect()
}

/// Flat CSV; parts of composite reports get their own rows.
pub fn render_csv(reports: &[CheckReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "name",
        "k",
        "p",
        "n",
        "expected",
        "observed",
        "verdict",
        "reason",
        "method",
        "wall_seconds",
    ])
    .expect("in-memory csv");
    fn rows(w: &mut csv::Writer<Vec<u8>>, r: &CheckReport) {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        w.write_record([
            r.name.clone(),
            opt(r.params.k),
            opt(r.params.p),
            opt(r.params.n),
            r.expected.clone(),
            r.observed.clone(),
            r.verdict.to_string(),
            r.reason.clone().unwrap_or_default(),
            r.method.map(|m| m.to_string()).unwrap_or_default(),
            format!("{:.3}", r.wall_seconds),
        ])
        .expect("in-memory csv");
        for p in &r.parts {
            rows(w, p);
        }
    }
    for r in reports {
        rows(&mut w, r);
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

/// Which table parameter runs down the rows of [`render_grid`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GridAxis {
    #[default]
    P,
    N,
}

/// A `p × n` grid of table-cell reports. Void cells are left blank; cells
/// that failed show the expectation too, skipped ones show why.
pub fn render_grid(reports: &[CheckReport], rows: GridAxis) -> String {
    let mut cells: BTreeMap<(usize, usize), String> = BTreeMap::new();
    let mut ps = BTreeSet::new();
    let mut ns = BTreeSet::new();
    for r in reports {
        let (Some(p), Some(n)) = (r.params.p, r.params.n) else {
            continue;
        };
        ps.insert(p);
        ns.insert(n);
        let text = match (r.verdict, r.observed.as_str()) {
            (Verdict::Fail, "") => {
                format!("error: {}", r.reason.clone().unwrap_or_default())
            }
            (Verdict::Fail, obs) => format!("{obs} (expected {})", r.expected),
            (Verdict::Skipped, "") => r.reason.clone().unwrap_or_else(|| "skipped".into()),
            (_, "void") => String::new(),
            (_, obs) => obs.to_string(),
        };
        cells.insert((p, n), text);
    }
    let (row_keys, col_keys, corner) = match rows {
        GridAxis::P => (&ps, &ns, "p \\ n"),
        GridAxis::N => (&ns, &ps, "n \\ p"),
    };
    let mut out = format!("| {corner} |");
    for c in col_keys {
        let _ = write!(out, " {c} |");
    }
    out.push('\n');
    out.push_str(&"|---".repeat(col_keys.len() + 1));
    out.push_str("|\n");
    for &rk in row_keys {
        let _ = write!(out, "| {rk} |");
        for &ck in col_keys {
            let key = match rows {
                GridAxis::P => (rk, ck),
                GridAxis::N => (ck, rk),
            };
            let _ = write!(
                out,
                " {} |",
                cells.get(&key).map(|s| cell(s)).unwrap_or_default()
            );
        }
        out.push('\n');
    }
    out
}
