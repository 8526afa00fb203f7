use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};
use totalcut::verify::DEFAULT_TIMEOUT_SECS;
use totalcut::{GraphSpec, Method};

/// Total cut complexes of graphs: construction, element matchings and exact
/// homology.
#[derive(Debug, Parser)]
#[command(name = "totalcut", version, propagate_version = true)]
pub struct Cli {
    /// Worker threads (default: one per core).
    #[arg(long, global = true, env = "TOTALCUT_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the facets of the total k-cut complex (or its Alexander dual).
    Build(BuildArgs),
    /// Reduced integer homology of the total k-cut complex.
    Homology(HomologyArgs),
    /// Run element matchings and report the critical cells.
    Morse(MorseArgs),
    /// Block words describing faces of squared-cycle complexes.
    Blocks {
        #[command(subcommand)]
        action: BlocksCommand,
    },
    /// Run a named suite of checks.
    Verify(VerifyArgs),
    /// Homology over a grid of cycle powers C_n^p for fixed k.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Md,
    Csv,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Graph spec: cycle:N, cyclepow:N:P, squaredcycle:N, complete:N or file:PATH.
    #[arg(value_parser = parse_spec)]
    pub spec: GraphSpec,

    /// Size of the independent sets whose complements are the facets.
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    /// Print the Alexander dual instead.
    #[arg(long)]
    pub dual: bool,

    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct HomologyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    /// auto picks direct for small complexes, dual otherwise.
    #[arg(long, default_value = "auto", value_parser = parse_method)]
    pub method: Method,

    /// Seconds before giving up.
    #[arg(long, env = "TOTALCUT_TIMEOUT", default_value_t = DEFAULT_TIMEOUT_SECS)]
    pub timeout: u64,

    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct MorseArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    /// Vertex order, e.g. 1,2,3 or 1..7 (default: all vertices ascending).
    #[arg(long, value_parser = parse_list)]
    pub order: Option<List>,

    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum BlocksCommand {
    /// Enumerate the words whose faces stay unmatched after matching vertex 1.
    List {
        /// Must be a squared cycle, e.g. squaredcycle:14.
        #[arg(value_parser = parse_spec)]
        spec: GraphSpec,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Face encoded by a word such as b(1:02)(4:01)(7:02)(11:01)@n=14.
    Decode {
        word: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Greedy block word of a face, if it has one with exactly k blocks.
    Encode {
        /// Face as a vertex list, e.g. 2,6,8,10,13,14.
        #[arg(value_parser = parse_list)]
        face: List,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value = "auto", value_parser = parse_method)]
    pub method: Method,

    /// Seconds allowed per check (per part for composite checks).
    #[arg(long, env = "TOTALCUT_TIMEOUT", default_value_t = DEFAULT_TIMEOUT_SECS)]
    pub timeout: u64,

    /// Output: md (table), json (one object per line) or csv.
    #[arg(long, value_enum, default_value = "md")]
    pub format: Format,

    /// No per-check progress on stderr.
    #[arg(long, short)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// full (everything; alias `paper`) or quick (smaller grids, no stretch rows).
    #[arg(long, default_value = "full")]
    pub suite: String,

    /// Only run checks with these names (repeatable), e.g. --only w_k3.
    #[arg(long)]
    pub only: Vec<String>,

    /// Seed for randomized property checks.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    P,
    N,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub k: usize,

    /// Cycle powers, e.g. 3..6 (inclusive) or 2,4.
    #[arg(long, value_parser = parse_list)]
    pub p: List,

    /// Cycle lengths, e.g. 8..16 (inclusive) or 11,16,21.
    #[arg(long, value_parser = parse_list)]
    pub n: List,

    /// Parameter along the rows of the markdown grid.
    #[arg(long, value_enum, default_value = "p")]
    pub rows: Axis,

    /// Ignore the bundled expected values and only compute.
    #[arg(long)]
    pub no_expected: bool,

    #[command(flatten)]
    pub run: RunArgs,
}

fn parse_spec(s: &str) -> Result<GraphSpec, String> {
    s.parse().map_err(|e: totalcut::Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: totalcut::Error| e.to_string())
}

/// Numbers given as one argument like `1..4,7`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct List(pub Vec<usize>);

/// Comma-separated numbers and inclusive ranges `a..b`.
pub fn parse_list(s: &str) -> Result<List, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("`{t}` is not a number"))
    };
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                let range: RangeInclusive<usize> = num(a)?..=num(b)?;
                if range.is_empty() {
                    return Err(format!("empty range `{part}`"));
                }
                out.extend(range);
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(List(out))
}
