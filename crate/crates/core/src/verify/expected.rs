use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::homology::HomologyProfile;

const BUILTIN: &str = include_str!("../../data/expected_tables.txt");

/// What a computation is expected to produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    Void,
    Profile(HomologyProfile),
}

impl Expectation {
    pub fn sphere(d: isize) -> Self {
        Self::Profile(HomologyProfile::free(&[(d, 1)]))
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Void => f.write_str("void"),
            Self::Profile(h) => write!(f, "{h}"),
        }
    }
}

impl FromStr for Expectation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "void" => Ok(Self::Void),
            other => other.parse().map(Self::Profile),
        }
    }
}

impl Serialize for Expectation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    /// Must pass.
    Core,
    /// Large instance; a timeout is reported as skipped.
    Stretch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedCell {
    pub k: usize,
    pub p: usize,
    pub n: usize,
    pub tier: Tier,
    pub expected: Expectation,
}

/// Expected homology of total cut complexes of cycle powers, keyed by `(k, p, n)`.
#[derive(Clone, Debug, Default)]
pub struct ExpectedTables {
    cells: Vec<ExpectedCell>,
}

impl ExpectedTables {
    /// The table shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("bundled expectation table is well formed")
    }

    /// Lines `k p n tier expected`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cells: Vec<ExpectedCell> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("line {}: {what}: `{raw}`", lineno + 1));
            let mut fields = line.splitn(5, char::is_whitespace);
            let mut num = |name: &str| -> Result<usize> {
                fields
                    .next()
                    .and_then(|f| f.parse().ok())
                    .ok_or_else(|| bad(&format!("bad {name}")))
            };
            let (k, p, n) = (num("k")?, num("p")?, num("n")?);
            let tier = match fields.next() {
                Some("core") => Tier::Core,
                Some("stretch") => Tier::Stretch,
                _ => return Err(bad("tier must be core or stretch")),
            };
            let expected: Expectation = fields
                .next()
                .ok_or_else(|| bad("missing expectation"))?
                .parse()?;
            if cells.iter().any(|c| (c.k, c.p, c.n) == (k, p, n)) {
                return Err(bad("duplicate cell"));
            }
            cells.push(ExpectedCell {
                k,
                p,
                n,
                tier,
                expected,
            });
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> &[ExpectedCell] {
        &self.cells
    }

    pub fn get(&self, k: usize, p: usize, n: usize) -> Option<&ExpectedCell> {
        self.cells.iter().find(|c| (c.k, c.p, c.n) == (k, p, n))
    }

    pub fn for_k(&self, k: usize) -> impl Iterator<Item = &ExpectedCell> {
        self.cells.iter().filter(move |c| c.k == k)
    }
}
