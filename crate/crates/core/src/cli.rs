//! The `hopfloop` command-line front-end.
//!
//! Exit codes: 0 ok, 1 verification mismatch, 2 usage, 3 resource limit,
//! 4 invalid model.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::algebra::Monomial;
use crate::error::{Error, Result};
use crate::evaluation::{sigma_lv_with, AnyModel, Model, Scalar};
use crate::graphs::{graph_to_dot, GraphRecord, OrderedGraph};
use crate::recursion::{vertex_bound, GenOptions, Generator, GraphSum, DEFAULT_MAX_EDGES};
use crate::verify::{run_suites, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_MODEL: i32 = 4;

/// Inclusive range written `N` or `A..B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("`{s}` is not N or A..B"));
        let span = match s.split_once("..") {
            Some((a, b)) => Span { lo: num(a)?, hi: num(b.trim_start_matches('='))? },
            None => {
                let n = num(s)?;
                Span { lo: n, hi: n }
            }
        };
        if span.lo > span.hi {
            return Err(format!("empty range `{s}`"));
        }
        Ok(span)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "hopfloop", version, about = "Connected Feynman graphs with exact 1/S weights")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the weighted graphs of one or more (loops, vertices) cells.
    Generate(GenerateArgs),
    /// Check the generator against the oracles.
    Verify(VerifyArgs),
    /// Evaluate connected n-point grades in a finite model.
    Evaluate(EvaluateArgs),
    /// Write every cell up to an edge limit to a directory.
    Export(ExportArgs),
}

#[derive(Debug, clap::Args)]
pub struct GeneratorArgs {
    /// Truncation k of the coproduct: keep only vertices of valence >= k+1.
    #[arg(long, default_value_t = 0)]
    pub min_valence: usize,
    /// Largest loop number that will be requested; truncation applies there.
    #[arg(long)]
    pub max_loops: Option<usize>,
    /// Largest internal edge count to compute.
    #[arg(long, default_value_t = DEFAULT_MAX_EDGES)]
    pub max_edges: usize,
    /// Worker threads for cells of equal edge number.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, clap::Args)]
pub struct GenerateArgs {
    /// Loop number, `N` or `A..B`.
    #[arg(long)]
    pub loops: Span,
    /// Vertex number, `N` or `A..B`; optional when --min-valence >= 2.
    #[arg(long)]
    pub vertices: Option<Span>,
    /// Comma-separated external labels; empty for vacuum graphs.
    #[arg(long, default_value = "")]
    pub externals: String,
    #[command(flatten)]
    pub generator: GeneratorArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Output file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// Largest internal edge count to check.
    #[arg(long, default_value_t = 3)]
    pub max_edges: usize,
    /// Suite to run (theorem, alt-recursion, series); repeatable, all by default.
    #[arg(long)]
    pub suite: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct EvaluateArgs {
    /// Model file (JSON).
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub loops: Span,
    /// Vertex number; optional when every active vertex function has arity >= 3.
    #[arg(long)]
    pub vertices: Option<Span>,
    /// Comma-separated legs: model labels, or any names in a one-label model.
    #[arg(long, default_value = "")]
    pub externals: String,
    #[arg(long, default_value_t = DEFAULT_MAX_EDGES)]
    pub max_edges: usize,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct ExportArgs {
    /// Directory receiving one file per cell plus `index.json`.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value = "")]
    pub externals: String,
    #[command(flatten)]
    pub generator: GeneratorArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Usage(_) | Error::Parse(_) | Error::Io(_) | Error::Json(_) => EXIT_USAGE,
        Error::ResourceLimit(_) => EXIT_RESOURCE,
        Error::Model(_) => EXIT_MODEL,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Errors are reported on `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Generate(args) => generate(&args, out).map(|()| EXIT_OK),
        Command::Verify(args) => verify(&args, out),
        Command::Evaluate(args) => evaluate(&args, out).map(|()| EXIT_OK),
        Command::Export(args) => export(&args, out).map(|()| EXIT_OK),
    }
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn build_generator(args: &GeneratorArgs) -> Result<Generator> {
    Generator::new(GenOptions::pruned(args.min_valence, args.max_loops))
        .with_max_edges(args.max_edges)
        .with_jobs(args.jobs)
}

/// `(l, v)` cells of a request, checked against every limit up front.
fn plan_cells(loops: Span, vertices: Option<Span>, legs: usize, args: &GeneratorArgs) -> Result<Vec<(usize, usize)>> {
    if let Some(max) = args.max_loops {
        if loops.hi > max {
            return Err(Error::usage(format!("--loops {loops} exceeds --max-loops {max}")));
        }
    }
    let bound = match args.min_valence {
        k if k >= 2 => Some(vertex_bound(legs, args.max_loops.unwrap_or(loops.hi), k + 1)?),
        _ => None,
    };
    let vertices = match (vertices, bound) {
        (Some(span), Some(b)) => Span { lo: span.lo, hi: span.hi.min(b) },
        (Some(span), None) => span,
        (None, Some(b)) => Span { lo: 1, hi: b },
        (None, None) => return Err(Error::usage("--vertices is required unless --min-valence is at least 2")),
    };
    if vertices.lo == 0 {
        return Err(Error::usage("graphs need at least one vertex"));
    }
    let mut cells = Vec::new();
    for l in loops.lo..=loops.hi {
        for v in vertices.lo..=vertices.hi {
            let e = l + v - 1;
            if e > args.max_edges {
                return Err(Error::ResourceLimit(format!(
                    "cell l={l} v={v} has {e} internal edges, --max-edges is {}",
                    args.max_edges
                )));
            }
            cells.push((l, v));
        }
    }
    Ok(cells)
}

/// Unordered cell, restricted to graphs whose vertices all have valence
/// above the truncation threshold.
fn cell_graphs(gen: &Generator, l: usize, v: usize, m: &Monomial) -> Result<GraphSum> {
    let mut sum = gen.omega_unordered(l, v, m)?;
    let k = gen.options().min_valence;
    if k > 0 {
        sum.retain(|g: &OrderedGraph| (0..g.vertex_count()).all(|i| g.valence(i) > k));
    }
    Ok(sum)
}

fn render_text(cells: &[((usize, usize), GraphSum)], m: &Monomial) -> String {
    let mut s = String::new();
    for ((l, v), sum) in cells {
        s.push_str(&format!("# l={l} v={v} externals={m} graphs={}\n", sum.len()));
        for (g, w) in sum.iter() {
            s.push_str(&format!("{}  {g}\n", crate::graphs::format_rational(w)));
        }
    }
    s
}

fn render_json(cells: &[((usize, usize), GraphSum)]) -> Result<String> {
    let records: Vec<GraphRecord> = cells.iter().flat_map(|(_, sum)| sum.records()).collect();
    Ok(serde_json::to_string_pretty(&records)? + "\n")
}

fn render_dot(cells: &[((usize, usize), GraphSum)]) -> String {
    let mut s = String::new();
    for ((l, v), sum) in cells {
        for (i, (g, w)) in sum.iter().enumerate() {
            s.push_str(&graph_to_dot(&format!("l{l}_v{v}_{}", i + 1), g, w));
        }
    }
    s
}

fn render(cells: &[((usize, usize), GraphSum)], m: &Monomial, format: Format) -> Result<String> {
    match format {
        Format::Text => Ok(render_text(cells, m)),
        Format::Json => render_json(cells),
        Format::Dot => Ok(render_dot(cells)),
    }
}

fn generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let m = Monomial::parse_user_list(&args.externals)?;
    let plan = plan_cells(args.loops, args.vertices, m.degree(), &args.generator)?;
    let gen = build_generator(&args.generator)?;
    let mut cells = Vec::new();
    for (l, v) in plan {
        cells.push(((l, v), cell_graphs(&gen, l, v, &m)?));
    }
    log::info!("generate: {} terms visited", gen.terms_visited());
    emit(&render(&cells, &m, args.format)?, args.output.as_deref(), out)
}

/// Runs verification suites on a caller-supplied generator and maps the
/// outcome to an exit code.
pub fn run_verify(generator: &Generator, suites: &[Suite], max_edges: usize, out: &mut dyn Write) -> i32 {
    match run_suites(generator, suites, max_edges, out) {
        Ok(report) if report.passed() => EXIT_OK,
        Ok(_) => EXIT_MISMATCH,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            exit_code(&e)
        }
    }
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let mut suites = args.suite.iter().map(|s| s.parse()).collect::<Result<Vec<Suite>>>()?;
    if suites.is_empty() {
        suites = Suite::ALL.to_vec();
    }
    suites.sort();
    suites.dedup();
    let gen = Generator::unpruned().with_max_edges(args.max_edges).with_jobs(args.jobs)?;
    let mut buf = Vec::new();
    let report = run_suites(&gen, &suites, args.max_edges, &mut buf)?;
    emit(&String::from_utf8_lossy(&buf), args.output.as_deref(), out)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_MISMATCH })
}

fn load_model(path: &Path) -> Result<AnyModel> {
    AnyModel::load(path).map_err(|e| match e {
        Error::Io(io) => Error::Model(format!("cannot read {}: {io}", path.display())),
        other => other,
    })
}

fn evaluate(args: &EvaluateArgs, out: &mut dyn Write) -> Result<()> {
    let names: Vec<&str> = match args.externals.trim() {
        "" => Vec::new(),
        list => list.split(',').map(str::trim).collect(),
    };
    let text = match load_model(&args.model)? {
        AnyModel::Exact(model) => evaluate_in(&model, args, &names)?,
        AnyModel::Float(model) => evaluate_in(&model, args, &names)?,
    };
    emit(&text, args.output.as_deref(), out)
}

fn evaluate_in<S: Scalar>(model: &Model<S>, args: &EvaluateArgs, names: &[&str]) -> Result<String> {
    let legs = model.resolve_legs(names)?;
    let vertices = match args.vertices {
        Some(span) => span,
        None => match model.min_active_arity() {
            Some(a) if a >= 3 && model.safe_min_valence() + 1 == a => {
                Span { lo: 0, hi: vertex_bound(legs.len(), args.loops.hi, a)? }
            }
            _ => return Err(Error::usage("--vertices is required for models with vertex functions below arity 3")),
        },
    };
    for l in args.loops.lo..=args.loops.hi {
        for v in vertices.lo.max(1)..=vertices.hi {
            if l + v - 1 > args.max_edges {
                return Err(Error::ResourceLimit(format!(
                    "cell l={l} v={v} has {} internal edges, --max-edges is {}",
                    l + v - 1,
                    args.max_edges
                )));
            }
        }
    }
    let leg_list = if names.is_empty() { "1".to_string() } else { names.join(",") };
    let mut grades = Vec::new();
    let mut partials = Vec::new();
    for l in args.loops.lo..=args.loops.hi {
        let gen = Generator::new(GenOptions::pruned(model.safe_min_valence(), Some(l)))
            .with_max_edges(args.max_edges)
            .with_jobs(args.jobs)?;
        let mut partial = S::zero();
        for v in vertices.lo..=vertices.hi {
            let value = sigma_lv_with(&gen, model, l, v, &legs)?;
            partial = partial + value.clone();
            grades.push((l, v, value));
        }
        partials.push((l, partial));
    }
    match args.format {
        Format::Text => {
            let mut s = String::new();
            for (l, v, value) in &grades {
                s.push_str(&format!("sigma^{{{l},{v}}}({leg_list}) = {}\n", value.render()));
            }
            for (l, value) in &partials {
                s.push_str(&format!("sigma^{{{l}}}({leg_list}) [v={vertices}] = {}\n", value.render()));
            }
            Ok(s)
        }
        Format::Json => {
            let doc = json!({
                "externals": names,
                "vertices": [vertices.lo, vertices.hi],
                "grades": grades.iter().map(|(l, v, value)| json!({"loops": l, "vertices": v, "value": value.render()})).collect::<Vec<_>>(),
                "partial_sums": partials.iter().map(|(l, value)| json!({"loops": l, "value": value.render()})).collect::<Vec<_>>(),
            });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Dot => Err(Error::usage("evaluate supports --format text or json")),
    }
}

fn export(args: &ExportArgs, out: &mut dyn Write) -> Result<()> {
    let m = Monomial::parse_user_list(&args.externals)?;
    let cfg = &args.generator;
    let top = cfg.max_loops.unwrap_or(cfg.max_edges);
    let mut plan = Vec::new();
    for l in 0..=top.min(cfg.max_edges) {
        for v in 1..=cfg.max_edges - l + 1 {
            plan.push((l, v));
        }
    }
    if cfg.min_valence >= 2 {
        let bound = vertex_bound(m.degree(), top, cfg.min_valence + 1)?;
        plan.retain(|&(_, v)| v <= bound);
    }
    let gen = Generator::new(GenOptions::pruned(cfg.min_valence, Some(top)))
        .with_max_edges(cfg.max_edges)
        .with_jobs(cfg.jobs)?;
    let ext = match args.format {
        Format::Json => "json",
        Format::Dot => "dot",
        Format::Text => "txt",
    };
    fs::create_dir_all(&args.output)?;
    let mut index = Vec::new();
    for (l, v) in plan {
        let cell = [((l, v), cell_graphs(&gen, l, v, &m)?)];
        let file = format!("l{l}_v{v}.{ext}");
        fs::write(args.output.join(&file), render(&cell, &m, args.format)?)?;
        let sum = &cell[0].1;
        index.push(json!({
            "loops": l,
            "vertices": v,
            "graphs": sum.len(),
            "weight_sum": crate::graphs::format_rational(&sum.sum_of_weights()),
            "file": file,
        }));
    }
    let doc = json!({ "externals": m.to_string(), "min_valence": cfg.min_valence, "cells": index });
    fs::write(args.output.join("index.json"), serde_json::to_string_pretty(&doc)? + "\n")?;
    writeln!(out, "wrote {} cells to {}", doc["cells"].as_array().map_or(0, Vec::len), args.output.display())?;
    Ok(())
}
