mod args;

use std::io::Write;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};
use totalcut::blocks::{self, BlockWord};
use totalcut::homology::total_cut_homology_within;
use totalcut::morse::{element_matching_sequence, homotopy_summary, verify_acyclic};
use totalcut::verify::{
    self, render_csv, render_grid, render_jsonl, render_markdown, CheckReport, ExpectedTables,
    GridAxis, Summary, VerifyOptions, SCHEMA_VERSION,
};
use totalcut::{Budget, SimplicialComplex, VertexSet};

use args::{Axis, BlocksCommand, Cli, Command, Format, RunArgs};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("totalcut: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("totalcut: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring worker threads")?;
    }
    let threads = cli.threads.unwrap_or(0);
    let out = match cli.command {
        Command::Build(a) => build(a)?,
        Command::Homology(a) => homology(a)?,
        Command::Morse(a) => return morse(a),
        Command::Blocks { action } => blocks_cmd(action)?,
        Command::Verify(a) => return verify_cmd(a, threads),
        Command::Table(a) => return table(a, threads),
    };
    emit(&out)?;
    Ok(ExitCode::SUCCESS)
}

fn emit(text: &str) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        stdout.write_all(b"\n")?;
    }
    Ok(())
}

fn json_line(mut v: Value) -> String {
    v.as_object_mut()
        .expect("json object")
        .insert("schema".into(), json!(SCHEMA_VERSION));
    v.to_string()
}

fn text_or_json(format: Format, allowed: &str) -> Result<bool> {
    match format {
        Format::Text => Ok(false),
        Format::Json => Ok(true),
        other => bail!(
            "--format {} is not supported here ({allowed})",
            format!("{other:?}").to_lowercase()
        ),
    }
}

fn build(a: args::BuildArgs) -> Result<String> {
    let json = text_or_json(a.format, "text|json")?;
    let g = a.graph.spec.build()?;
    let c = if a.dual {
        SimplicialComplex::dual_of_total_cut(&g, a.graph.k)?
    } else {
        SimplicialComplex::total_cut(&g, a.graph.k)
    };
    Ok(match (json, c.is_void()) {
        (true, _) => json_line(
            json!({ "spec": a.graph.spec.to_string(), "k": a.graph.k, "dual": a.dual, "complex": c }),
        ),
        (false, true) => "void".into(),
        (false, false) => c.to_facet_file(),
    })
}

fn homology(a: args::HomologyArgs) -> Result<String> {
    let json = text_or_json(a.format, "text|json")?;
    let g = a.graph.spec.build()?;
    let k = a.graph.k;
    let void = !g.has_independent_set(&g.vertices(), k);
    let (profile, route) = if void {
        (None, None)
    } else {
        let budget = Budget::for_duration(Duration::from_secs(a.timeout));
        let (h, m) = total_cut_homology_within(&g, k, a.method, &budget)?;
        (Some(h), Some(m))
    };
    Ok(if json {
        json_line(json!({
            "spec": a.graph.spec.to_string(),
            "k": k,
            "void": void,
            "method": route,
            "homology": profile,
        }))
    } else {
        profile.map_or_else(|| "void".into(), |h| h.to_string())
    })
}

fn morse(a: args::MorseArgs) -> Result<ExitCode> {
    let json = text_or_json(a.format, "text|json")?;
    let g = a.graph.spec.build()?;
    let c = SimplicialComplex::total_cut(&g, a.graph.k);
    if c.is_void() {
        bail!(
            "the total {}-cut complex of {} is void",
            a.graph.k,
            a.graph.spec
        );
    }
    let order = a.order.map_or_else(|| (1..=g.n()).collect(), |l| l.0);
    let r = element_matching_sequence(&c, &order)?;
    let acyclic = verify_acyclic(&r)?;
    let summary = if acyclic {
        Some(homotopy_summary(&r)?)
    } else {
        None
    };
    let counts: serde_json::Map<String, Value> = r
        .counts()
        .iter()
        .map(|(d, n)| (d.to_string(), json!(n)))
        .collect();
    let text = if json {
        json_line(json!({
            "spec": a.graph.spec.to_string(),
            "k": a.graph.k,
            "order": r.order(),
            "critical": r.critical(),
            "counts": counts,
            "empty_face_paired": r.empty_face_paired(),
            "acyclic": acyclic,
            "summary": summary.as_ref().map(|s| s.to_string()),
        }))
    } else {
        let list = |items: Vec<String>| {
            if items.is_empty() {
                "none".to_string()
            } else {
                items.join(" ")
            }
        };
        let order: Vec<String> = r.order().iter().map(|v| v.to_string()).collect();
        format!(
            "order: {}\nfaces: {}\ncritical: {}\ncounts: {}\nacyclic: {}\nsummary: {}",
            order.join(","),
            r.face_count(),
            list(r.critical().iter().map(VertexSet::to_string).collect()),
            list(r.counts().iter().map(|(d, n)| format!("{d}:{n}")).collect()),
            acyclic,
            summary.map_or_else(
                || "none (matching is not acyclic)".into(),
                |s| s.to_string()
            ),
        )
    };
    emit(&text)?;
    Ok(if acyclic {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn blocks_cmd(action: BlocksCommand) -> Result<String> {
    match action {
        BlocksCommand::List { spec, k, format } => {
            let json = text_or_json(format, "text|json")?;
            let g = spec.build()?;
            let words = blocks::enumerate_m1_unmatched(&g, k)?;
            Ok(if json {
                let items: Vec<Value> = words
                    .iter()
                    .map(|(w, s)| json!({ "word": w, "face": s }))
                    .collect();
                json_line(
                    json!({ "spec": spec.to_string(), "k": k, "count": items.len(), "words": items }),
                )
            } else {
                let mut out = String::new();
                for (w, s) in &words {
                    out.push_str(&format!("{w}\t{s}\n"));
                }
                out.push_str(&format!("{} words", words.len()));
                out
            })
        }
        BlocksCommand::Decode { word, format } => {
            let json = text_or_json(format, "text|json")?;
            let w: BlockWord = word.parse()?;
            let face = blocks::decode(&w)?;
            Ok(if json {
                json_line(json!({ "word": w, "face": face }))
            } else {
                face.to_string()
            })
        }
        BlocksCommand::Encode {
            face: args::List(face),
            n,
            k,
            format,
        } => {
            let json = text_or_json(format, "text|json")?;
            if let Some(&v) = face.iter().find(|&&v| v == 0 || v > n) {
                bail!("vertex {v} is outside 1..={n}");
            }
            let s = VertexSet::from_slice(&face);
            let w = blocks::encode(&s, n, k);
            Ok(match (json, w) {
                (true, w) => json_line(json!({ "face": s, "n": n, "k": k, "word": w })),
                (false, Some(w)) => w.to_string(),
                (false, None) => bail!("{s} has no block word with {k} blocks for n={n}"),
            })
        }
    }
}

fn options(run: &RunArgs, threads: usize, seed: u64) -> VerifyOptions {
    VerifyOptions {
        timeout: Duration::from_secs(run.timeout),
        method: run.method,
        seed,
        threads,
    }
}

fn render(reports: &[CheckReport], format: Format) -> Result<String> {
    Ok(match format {
        Format::Md | Format::Text => render_markdown(reports),
        Format::Json => render_jsonl(reports),
        Format::Csv => render_csv(reports),
    })
}

fn progress(quiet: bool) -> impl Fn(&CheckReport) + Sync {
    move |r: &CheckReport| {
        if !quiet {
            eprintln!(
                "[{}] {} {} ({:.2}s)",
                r.verdict, r.name, r.params, r.wall_seconds
            );
        }
    }
}

fn finish(reports: &[CheckReport], text: String) -> Result<ExitCode> {
    emit(&text)?;
    Ok(if Summary::of(reports).all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn verify_cmd(a: args::VerifyArgs, threads: usize) -> Result<ExitCode> {
    let tables = ExpectedTables::builtin();
    let mut checks = verify::suite(&a.suite, &tables)?;
    if !a.only.is_empty() {
        checks.retain(|c| a.only.iter().any(|o| o == c.name()));
        if checks.is_empty() {
            bail!(
                "no checks named {} in suite `{}`",
                a.only.join(", "),
                a.suite
            );
        }
    }
    let opts = options(&a.run, threads, a.seed);
    let reports = verify::run_checks_with(&checks, &opts, progress(a.run.quiet));
    let text = render(&reports, a.run.format)?;
    finish(&reports, text)
}

fn table(a: args::TableArgs, threads: usize) -> Result<ExitCode> {
    let tables = if a.no_expected {
        ExpectedTables::default()
    } else {
        ExpectedTables::builtin()
    };
    let opts = options(&a.run, threads, 1);
    let checks: Vec<verify::Check> =
        a.p.0
            .iter()
            .flat_map(|&p| {
                let tables = &tables;
                a.n.0.iter().map(move |&n| verify::Check::TableCell {
                    k: a.k,
                    p,
                    n,
                    expected: tables.get(a.k, p, n).map(|c| c.expected.clone()),
                })
            })
            .collect();
    let reports = verify::run_checks_with(&checks, &opts, progress(a.run.quiet));
    let text = match a.run.format {
        Format::Md | Format::Text => {
            let axis = match a.rows {
                Axis::P => GridAxis::P,
                Axis::N => GridAxis::N,
            };
            let s = Summary::of(&reports);
            format!(
                "k = {}\n\n{}\n{} passed, {} failed, {} without expectation or timed out",
                a.k,
                render_grid(&reports, axis),
                s.pass,
                s.fail,
                s.skipped
            )
        }
        other => render(&reports, other)?,
    };
    finish(&reports, text)
}
