//! Verification suites comparing the generator against the oracles.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::algebra::{Monomial, Rational};
use crate::error::{Error, Result};
use crate::evaluation::{sigma_lv_with, Model};
use crate::oracle::{compare_sums, enumerate_connected, zero_dim_log_z, DEFAULT_ENUMERATION_LIMIT};
use crate::recursion::{AltGenerator, GenOptions, Generator};

/// Largest leg count used by the graph-level suites.
pub const GRAPH_SUITE_MAX_LEGS: usize = 3;
/// Bounds of the series suite: vertices, legs, loops.
pub const SERIES_SUITE_LIMITS: (usize, usize, usize) = (4, 4, 3);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    /// Generated graphs and weights against exhaustive enumeration.
    Theorem,
    /// The primary recursion against the two-factor recursion.
    AltRecursion,
    /// Evaluated sums against the `log Z` series of φ³ and φ⁴.
    Series,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Theorem, Suite::AltRecursion, Suite::Series];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Theorem => "theorem",
            Suite::AltRecursion => "alt-recursion",
            Suite::Series => "series",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem" => Ok(Suite::Theorem),
            "alt-recursion" => Ok(Suite::AltRecursion),
            "series" => Ok(Suite::Series),
            _ => Err(Error::usage(format!("unknown suite `{s}` (theorem, alt-recursion, series)"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: usize,
    pub failures: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// `(l, v)` pairs with `l + v - 1 = e`, loops ascending.
fn cells_with_edges(e: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=e).map(move |l| (l, e - l + 1))
}

fn legs(n: usize) -> Monomial {
    Monomial::from_names((1..=n).map(|i| format!("x{i}")))
}

/// Runs `suites` for every cell with at most `max_edges` internal edges and
/// writes one line per check. The graph suites read from `generator`, which
/// must be unpruned.
pub fn run_suites(
    generator: &Generator,
    suites: &[Suite],
    max_edges: usize,
    out: &mut dyn Write,
) -> Result<VerifyReport> {
    if generator.options().min_valence != 0 {
        return Err(Error::usage("verification needs an unpruned generator"));
    }
    let mut report = VerifyReport::default();
    for &suite in suites {
        match suite {
            Suite::Theorem => theorem(generator, max_edges, out, &mut report)?,
            Suite::AltRecursion => alt_recursion(generator, max_edges, out, &mut report)?,
            Suite::Series => series(max_edges, out, &mut report)?,
        }
    }
    writeln!(out, "{} checks, {} failures", report.checks, report.failures)?;
    Ok(report)
}

fn record(report: &mut VerifyReport, out: &mut dyn Write, ok: bool, line: fmt::Arguments) -> Result<()> {
    report.checks += 1;
    if !ok {
        report.failures += 1;
    }
    writeln!(out, "{} {line}", if ok { "ok  " } else { "FAIL" })?;
    Ok(())
}

fn theorem(gen: &Generator, max_edges: usize, out: &mut dyn Write, report: &mut VerifyReport) -> Result<()> {
    if max_edges > DEFAULT_ENUMERATION_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "the enumeration oracle is limited to {DEFAULT_ENUMERATION_LIMIT} edges"
        )));
    }
    for e in 0..=max_edges {
        for (l, v) in cells_with_edges(e) {
            for n in 0..=GRAPH_SUITE_MAX_LEGS {
                let m = legs(n);
                let cmp = compare_sums(gen.omega(l, v, &m)?.as_ref(), &enumerate_connected(l, v, &m)?);
                record(report, out, cmp.is_match(), format_args!("theorem l={l} v={v} n={n}: {cmp}"))?;
            }
        }
    }
    Ok(())
}

fn alt_recursion(gen: &Generator, max_edges: usize, out: &mut dyn Write, report: &mut VerifyReport) -> Result<()> {
    let mut alt = AltGenerator::new().with_max_edges(max_edges);
    for e in 0..=max_edges {
        for (l, v) in cells_with_edges(e) {
            for n in 0..=GRAPH_SUITE_MAX_LEGS {
                let m = legs(n);
                let primary = gen.omega(l, v, &m)?;
                let other = alt.omega(l, v, &m)?;
                let ok = primary == other;
                let detail = if ok {
                    format!("equal ({} ordered graphs)", primary.len())
                } else {
                    compare_sums(&primary, &other).to_string()
                };
                record(report, out, ok, format_args!("alt-recursion l={l} v={v} n={n}: {detail}"))?;
            }
        }
    }
    Ok(())
}

fn series(max_edges: usize, out: &mut dyn Write, report: &mut VerifyReport) -> Result<()> {
    let (max_v, max_n, max_l) = SERIES_SUITE_LIMITS;
    let g = Rational::new(3.into(), 2.into());
    let lambda = Rational::new(2.into(), 5.into());
    for k in [3usize, 4] {
        let model = Model::single_label(g.clone(), [(k, lambda.clone() * num_traits::pow(g.clone(), k))])?;
        let table = zero_dim_log_z(&[k], max_v, max_n)?;
        for l in 0..=max_l {
            let gen = Generator::new(GenOptions::pruned(model.safe_min_valence(), Some(l))).with_max_edges(max_edges);
            for v in 1..=max_v {
                if l + v - 1 > max_edges {
                    continue;
                }
                for n in 0..=max_n {
                    let oracle = match table.grade(l, v, n)?.as_slice() {
                        [] => Rational::from_integer(0.into()),
                        [(_, c)] => {
                            let power = table.g_power(n, &[v]).expect("non-zero grades have integral g powers");
                            c * num_traits::pow(lambda.clone(), v) * num_traits::pow(g.clone(), power)
                        }
                        more => {
                            return Err(Error::usage(format!("{} vertex vectors in a single-arity grade", more.len())))
                        }
                    };
                    let engine = sigma_lv_with(&gen, &model, l, v, &vec![0; n])?;
                    let ok = engine == oracle;
                    record(
                        report,
                        out,
                        ok,
                        format_args!("series phi^{k} l={l} v={v} n={n}: engine {engine} oracle {oracle}"),
                    )?;
                }
            }
        }
    }
    Ok(())
}
