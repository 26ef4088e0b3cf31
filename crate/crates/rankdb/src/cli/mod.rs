//! Command-line front end: catalog loading, query evaluation, similarity
//! measurement, sensitivity bounds, the property-suite runner, and a
//! small interactive shell.
//!
//! Exit codes: 0 on success, 1 on a user error (bad arguments, broken
//! catalog, malformed query), 2 when a checked property is violated
//! (failing suites, a verified bound that does not hold).

mod catalog;
mod render;

pub use catalog::{export_csv, load_config, load_table, save_table, Catalog};
pub use render::{render_table, render_table_jsonl, sorted_rows, value_text};

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::lattice::{Degree, Hedge, LatticeError};
use crate::query::{
    evaluate, parse, propagate_bound, verify_bound, EvalContext, QueryError, QueryExpr,
    SensitivityBound, VerifyReport,
};
use crate::rdt::{CandidateMode, OpError, RankedDataTable};
use crate::similarity::{subsethood, table_similarity, ComparisonConfig, ComparisonMode};
use crate::testkit::{
    adjointness_suite, boolean_degeneration_suite, lemma_quasiorder_suite,
    oracle_equivalence_suite, parser_roundtrip_suite, preservation_suite,
    propagator_monotonicity_suite, propagator_soundness_suite, specialization_suite,
    SuiteReport,
};

fn at_line(line: u64) -> String {
    if line == 0 {
        String::new()
    } else {
        format!(":{line}")
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}{}: {message}", at_line(*line as u64))]
    Config {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}{}: {message}", at_line(*line))]
    Table {
        path: String,
        line: u64,
        message: String,
    },
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Op(#[from] OpError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Jsonl,
}

#[derive(Debug, Parser)]
#[command(
    name = "rankdb",
    version,
    about = "Similarity-based queries over ranked data tables"
)]
struct Cli {
    /// Catalog configuration file.
    #[arg(short, long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output format: aligned text or line-delimited JSON records.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a query expression and print the resulting table.
    Query {
        expr: String,
        /// Candidate range of closure selections: support or full.
        #[arg(long, default_value = "support")]
        closure: String,
    },
    /// Measure the similarity of two catalog tables, both directions.
    Sim {
        table1: String,
        table2: String,
        /// Comparison mode: rank, tuple, or hedged.
        #[arg(long, default_value = "rank")]
        mode: String,
        /// Hedge for the hedged mode: identity or globalization.
        #[arg(long, default_value = "identity")]
        hedge: String,
    },
    /// Propagate a sensitivity bound through a query plan.
    Bound {
        expr: String,
        /// Assumed input similarity, NAME=DEGREE. Repeatable.
        #[arg(long = "assume", value_name = "NAME=DEGREE")]
        assume: Vec<String>,
    },
    /// Check a propagated bound against actual perturbed tables.
    Verify {
        expr: String,
        /// Perturbed replacement for a table, NAME=PATH. Repeatable.
        #[arg(long = "alt", value_name = "NAME=PATH")]
        alt: Vec<String>,
        /// Override the measured input similarity, NAME=DEGREE. Repeatable.
        #[arg(long = "assume", value_name = "NAME=DEGREE")]
        assume: Vec<String>,
        /// Candidate range of closure selections: support or full.
        #[arg(long, default_value = "support")]
        closure: String,
    },
    /// Run every property suite and report violations.
    Check {
        /// Base seed for the generators.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instance multiplier for the randomized suites.
        #[arg(long, default_value_t = 1)]
        iterations: usize,
    },
    /// Interactive shell over the loaded catalog.
    Repl,
}

/// Parses arguments and runs one command, writing to the given streams.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 1;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let write = |out: &mut dyn Write, text: String| -> Result<(), CliError> {
        out.write_all(text.as_bytes())
            .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
    };
    match cli.command {
        Command::Query { expr, closure } => {
            let cat = load_required(&cli.config)?;
            let mode: CandidateMode = closure.parse()?;
            let e = parse(&expr)?;
            let ctx = EvalContext::new(cat.lattice, &cat.domains, &cat.tables)
                .with_closure_mode(mode);
            let result = evaluate(&e, &ctx)?;
            let text = match cli.format {
                Format::Text => render_table(&result),
                Format::Jsonl => render_table_jsonl(&e.to_string(), &result),
            };
            write(out, text)?;
            Ok(0)
        }
        Command::Sim {
            table1,
            table2,
            mode,
            hedge,
        } => {
            let cat = load_required(&cli.config)?;
            let cfg = comparison_cfg(&mode, &hedge)?;
            let text = sim_text(&cat, &table1, &table2, cfg, cli.format)?;
            write(out, text)?;
            Ok(0)
        }
        Command::Bound { expr, assume } => {
            let cat = load_required(&cli.config)?;
            let e = parse(&expr)?;
            let assumptions = parse_assumptions(&cat, &assume)?;
            let b = propagate_bound(&e, cat.lattice, &assumptions)?;
            write(out, bound_text(&b, cli.format))?;
            Ok(0)
        }
        Command::Verify {
            expr,
            alt,
            assume,
            closure,
        } => {
            let cat = load_required(&cli.config)?;
            let mode: CandidateMode = closure.parse()?;
            let e = parse(&expr)?;
            let alt_tables = load_alts(&cat, &alt)?;
            let assumptions = verify_assumptions(&cat, &e, &alt_tables, &assume)?;
            let ctx1 = EvalContext::new(cat.lattice, &cat.domains, &cat.tables)
                .with_closure_mode(mode);
            let ctx2 = EvalContext::new(cat.lattice, &cat.domains, &alt_tables)
                .with_closure_mode(mode);
            let report = verify_bound(&e, &ctx1, &ctx2, &assumptions)?;
            write(out, verify_text(&report, cli.format))?;
            Ok(if report.holds { 0 } else { 2 })
        }
        Command::Check { seed, iterations } => {
            let k = iterations.max(1);
            let mut failures = 0usize;
            for report in check_suites(seed, k) {
                failures += report.failures.len();
                let text = match cli.format {
                    Format::Text => format!("{report}\n"),
                    Format::Jsonl => suite_json(&report),
                };
                write(out, text)?;
            }
            let text = match cli.format {
                Format::Text => {
                    if failures == 0 {
                        format!("check: all suites passed (seed {seed})\n")
                    } else {
                        format!("check: {failures} violations (seed {seed})\n")
                    }
                }
                Format::Jsonl => format!(
                    "{}\n",
                    serde_json::json!({
                        "type": "check",
                        "seed": seed,
                        "violations": failures,
                    })
                ),
            };
            write(out, text)?;
            Ok(if failures == 0 { 0 } else { 2 })
        }
        Command::Repl => {
            let cat = load_required(&cli.config)?;
            let stdin = std::io::stdin();
            repl(&cat, stdin.lock(), out);
            Ok(0)
        }
    }
}

fn load_required(config: &Option<PathBuf>) -> Result<Catalog, CliError> {
    let path = config.as_ref().ok_or_else(|| {
        CliError::Usage("this command needs a catalog: pass --config PATH".to_string())
    })?;
    load_config(path)
}

fn comparison_cfg(mode: &str, hedge: &str) -> Result<ComparisonConfig, CliError> {
    let hedge: Hedge = hedge.parse().map_err(CliError::Usage)?;
    match mode {
        "rank" => Ok(ComparisonConfig::rank_based()),
        "tuple" => Ok(ComparisonConfig::tuple_based()),
        "hedged" => Ok(ComparisonConfig::hedged(hedge)),
        other => Err(CliError::Usage(format!(
            "unknown mode {other:?}: expected rank, tuple, or hedged"
        ))),
    }
}

fn mode_name(cfg: ComparisonConfig) -> &'static str {
    match cfg.mode {
        ComparisonMode::RankBased => "rank",
        ComparisonMode::TupleBased => "tuple",
        ComparisonMode::Hedged(Hedge::Identity) => "hedged (identity)",
        ComparisonMode::Hedged(Hedge::Globalization) => "hedged (globalization)",
    }
}

fn sim_text(
    cat: &Catalog,
    t1: &str,
    t2: &str,
    cfg: ComparisonConfig,
    format: Format,
) -> Result<String, CliError> {
    let d1 = cat.table(t1)?;
    let d2 = cat.table(t2)?;
    let s12 = subsethood(&cat.domains, d1, d2, cfg)?;
    let s21 = subsethood(&cat.domains, d2, d1, cfg)?;
    let e = table_similarity(&cat.domains, d1, d2, cfg)?;
    Ok(match format {
        Format::Text => format!(
            "S({t1}, {t2}) = {s12}\nS({t2}, {t1}) = {s21}\nE({t1}, {t2}) = {e}\n"
        ),
        Format::Jsonl => format!(
            "{}\n",
            serde_json::json!({
                "type": "similarity",
                "left": t1,
                "right": t2,
                "mode": mode_name(cfg),
                "s_left_right": s12.to_string(),
                "s_right_left": s21.to_string(),
                "e": e.to_string(),
            })
        ),
    })
}

/// `NAME=DEGREE` pairs; degrees accept decimals and, on chains, `k/n`.
fn parse_assumptions(
    cat: &Catalog,
    pairs: &[String],
) -> Result<BTreeMap<String, Degree>, CliError> {
    let mut out = BTreeMap::new();
    for pair in pairs {
        let (name, value) = pair.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("expected NAME=DEGREE, got {pair:?}"))
        })?;
        let degree = catalog::parse_degree(&cat.lattice, value.trim()).map_err(CliError::Usage)?;
        out.insert(name.trim().to_string(), degree);
    }
    Ok(out)
}

fn bound_text(b: &SensitivityBound, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = format!("bound = {}\n", b.value);
            let measure = if b.tuple_based_only {
                "tuple-based"
            } else {
                "rank-based"
            };
            out.push_str(&format!(
                "guarantee: the {measure} similarity of results is at least the bound\n"
            ));
            out.push_str("trace:\n");
            for step in &b.trace {
                let inputs = if step.inputs.is_empty() {
                    String::new()
                } else {
                    let parts: Vec<String> =
                        step.inputs.iter().map(|d| d.to_string()).collect();
                    format!(" [{}]", parts.join(", "))
                };
                out.push_str(&format!(
                    "  {}: {}{} -> {}\n",
                    step.node, step.rule, inputs, step.output
                ));
            }
            out
        }
        Format::Jsonl => {
            let mut out = format!(
                "{}\n",
                serde_json::json!({
                    "type": "bound",
                    "value": b.value.to_string(),
                    "tuple_based_only": b.tuple_based_only,
                })
            );
            for step in &b.trace {
                let inputs: Vec<String> =
                    step.inputs.iter().map(|d| d.to_string()).collect();
                out.push_str(&format!(
                    "{}\n",
                    serde_json::json!({
                        "type": "trace",
                        "node": step.node,
                        "rule": step.rule,
                        "inputs": inputs,
                        "output": step.output.to_string(),
                    })
                ));
            }
            out
        }
    }
}

/// `NAME=PATH` replacements over a copy of the primary tables.
fn load_alts(
    cat: &Catalog,
    pairs: &[String],
) -> Result<BTreeMap<String, RankedDataTable>, CliError> {
    let mut scratch = Catalog {
        lattice: cat.lattice,
        domains: cat.domains.clone(),
        tables: BTreeMap::new(),
    };
    for pair in pairs {
        let (name, path) = pair.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("expected NAME=PATH, got {pair:?}"))
        })?;
        let name = name.trim();
        cat.table(name)?;
        load_table(&mut scratch, name, std::path::Path::new(path.trim()))?;
        let loaded = &scratch.tables[name];
        let primary = &cat.tables[name];
        if loaded.scheme() != primary.scheme() {
            return Err(CliError::Usage(format!(
                "replacement for {name:?} has scheme {}, expected {}",
                loaded.scheme(),
                primary.scheme()
            )));
        }
    }
    let mut tables = cat.tables.clone();
    tables.extend(scratch.tables);
    Ok(tables)
}

/// Assumptions for `verify`: explicit `--assume` overrides win; every
/// replaced table without one gets its measured similarity, by the same
/// measure `verify` itself will use.
fn verify_assumptions(
    cat: &Catalog,
    e: &QueryExpr,
    alt_tables: &BTreeMap<String, RankedDataTable>,
    overrides: &[String],
) -> Result<BTreeMap<String, Degree>, CliError> {
    let mut assumptions = parse_assumptions(cat, overrides)?;
    let cfg = if e.has_closure_select() {
        ComparisonConfig::tuple_based()
    } else {
        ComparisonConfig::rank_based()
    };
    for name in e.table_refs() {
        if assumptions.contains_key(name) {
            continue;
        }
        let primary = cat.table(name)?;
        let alt = &alt_tables[name];
        if alt != primary {
            let measured = table_similarity(&cat.domains, primary, alt, cfg)?;
            assumptions.insert(name.to_string(), measured);
        }
    }
    Ok(assumptions)
}

fn verify_text(r: &VerifyReport, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = bound_text(&r.bound, Format::Text);
            out.push_str(&format!(
                "actual = {} ({}-based similarity of the results)\n",
                r.actual,
                mode_name(r.measure)
            ));
            out.push_str(&format!(
                "{}: actual {} bound\n",
                if r.holds { "HOLDS" } else { "VIOLATION" },
                if r.holds { ">=" } else { "<" }
            ));
            out
        }
        Format::Jsonl => {
            let mut out = bound_text(&r.bound, Format::Jsonl);
            out.push_str(&format!(
                "{}\n",
                serde_json::json!({
                    "type": "verify",
                    "actual": r.actual.to_string(),
                    "measure": mode_name(r.measure),
                    "holds": r.holds,
                })
            ));
            out
        }
    }
}

fn check_suites(seed: u64, k: usize) -> Vec<SuiteReport> {
    vec![
        adjointness_suite(seed, 1000 * k),
        preservation_suite(seed, 100 * k),
        oracle_equivalence_suite(seed, 60 * k),
        specialization_suite(seed, 80 * k),
        lemma_quasiorder_suite(seed, 80 * k),
        boolean_degeneration_suite(seed, 50 * k),
        parser_roundtrip_suite(seed),
        propagator_soundness_suite(seed, 60 * k),
        propagator_monotonicity_suite(seed, 80 * k),
    ]
}

fn suite_json(r: &SuiteReport) -> String {
    let samples: Vec<&String> = r.failures.iter().take(5).collect();
    format!(
        "{}\n",
        serde_json::json!({
            "type": "suite",
            "name": r.name,
            "passed": r.passed(),
            "instances": r.instances,
            "violations": r.failures.len(),
            "seed": r.seed,
            "failure_samples": samples,
        })
    )
}

/// Interactive session state: assumptions, replacement tables, and the
/// closure candidate mode carry across lines.
struct Session<'a> {
    cat: &'a Catalog,
    assumptions: BTreeMap<String, Degree>,
    alts: BTreeMap<String, RankedDataTable>,
    closure: CandidateMode,
}

const REPL_HELP: &str = "\
commands:
  query <expr>            evaluate a query and print the table
  sim <t1> <t2> [mode]    similarity of two tables (rank, tuple, hedged)
  bound <expr>            propagate a bound under the session assumptions
  verify <expr>           check the bound against the session alt tables
  assume <name> <degree>  set an input similarity assumption
  alt <name> <path>       load a replacement table from a CSV file
  closure support|full    candidate range of closure selections
  tables                  list catalog tables
  help                    this text
  quit                    leave the shell
";

fn repl(cat: &Catalog, input: impl BufRead, out: &mut dyn Write) {
    let mut session = Session {
        cat,
        assumptions: BTreeMap::new(),
        alts: cat.tables.clone(),
        closure: CandidateMode::Support,
    };
    let _ = write!(out, "rankdb> ");
    let _ = out.flush();
    for line in input.lines() {
        let Ok(line) = line else { break };
        match repl_line(&mut session, line.trim(), out) {
            Ok(true) => {}
            Ok(false) => return,
            Err(e) => {
                let _ = writeln!(out, "error: {e}");
            }
        }
        let _ = write!(out, "rankdb> ");
        let _ = out.flush();
    }
    let _ = writeln!(out);
}

fn repl_line(s: &mut Session, line: &str, out: &mut dyn Write) -> Result<bool, CliError> {
    let (verb, rest) = match line.split_once(char::is_whitespace) {
        Some((v, r)) => (v, r.trim()),
        None => (line, ""),
    };
    let need = |cond: bool, usage: &str| -> Result<(), CliError> {
        if cond {
            Ok(())
        } else {
            Err(CliError::Usage(format!("usage: {usage}")))
        }
    };
    match verb {
        "" => {}
        "query" => {
            need(!rest.is_empty(), "query <expr>")?;
            let e = parse(rest)?;
            let ctx = EvalContext::new(s.cat.lattice, &s.cat.domains, &s.cat.tables)
                .with_closure_mode(s.closure);
            let result = evaluate(&e, &ctx)?;
            let _ = write!(out, "{}", render_table(&result));
        }
        "sim" => {
            let words: Vec<&str> = rest.split_whitespace().collect();
            need(
                (2..=4).contains(&words.len()),
                "sim <t1> <t2> [rank|tuple|hedged [identity|globalization]]",
            )?;
            let mode = words.get(2).copied().unwrap_or("rank");
            let hedge = words.get(3).copied().unwrap_or("identity");
            let cfg = comparison_cfg(mode, hedge)?;
            let text = sim_text(s.cat, words[0], words[1], cfg, Format::Text)?;
            let _ = write!(out, "{text}");
        }
        "bound" => {
            need(!rest.is_empty(), "bound <expr>")?;
            let e = parse(rest)?;
            let b = propagate_bound(&e, s.cat.lattice, &s.assumptions)?;
            let _ = write!(out, "{}", bound_text(&b, Format::Text));
        }
        "verify" => {
            need(!rest.is_empty(), "verify <expr>")?;
            let e = parse(rest)?;
            let overrides: Vec<String> = s
                .assumptions
                .iter()
                .map(|(n, d)| format!("{n}={d}"))
                .collect();
            let assumptions = verify_assumptions(s.cat, &e, &s.alts, &overrides)?;
            let ctx1 = EvalContext::new(s.cat.lattice, &s.cat.domains, &s.cat.tables)
                .with_closure_mode(s.closure);
            let ctx2 = EvalContext::new(s.cat.lattice, &s.cat.domains, &s.alts)
                .with_closure_mode(s.closure);
            let report = verify_bound(&e, &ctx1, &ctx2, &assumptions)?;
            let _ = write!(out, "{}", verify_text(&report, Format::Text));
        }
        "assume" => {
            if rest.is_empty() {
                if s.assumptions.is_empty() {
                    let _ = writeln!(out, "no assumptions");
                }
                for (name, degree) in &s.assumptions {
                    let _ = writeln!(out, "{name} = {degree}");
                }
            } else {
                let words: Vec<&str> = rest.split_whitespace().collect();
                need(words.len() == 2, "assume <name> <degree>")?;
                let degree = catalog::parse_degree(&s.cat.lattice, words[1])
                    .map_err(CliError::Usage)?;
                s.assumptions.insert(words[0].to_string(), degree);
            }
        }
        "alt" => {
            let words: Vec<&str> = rest.split_whitespace().collect();
            need(words.len() == 2, "alt <name> <path>")?;
            let pair = format!("{}={}", words[0], words[1]);
            let table = load_alts(s.cat, &[pair])?
                .remove(words[0])
                .expect("replacement was just loaded");
            s.alts.insert(words[0].to_string(), table);
        }
        "closure" => {
            need(!rest.is_empty(), "closure support|full")?;
            s.closure = rest.parse()?;
        }
        "tables" => {
            for (name, table) in &s.cat.tables {
                let _ = writeln!(
                    out,
                    "{name}  {{{}}}  {} rows",
                    table.scheme(),
                    table.support_size()
                );
            }
        }
        "help" => {
            let _ = write!(out, "{REPL_HELP}");
        }
        "quit" | "exit" => return Ok(false),
        other => {
            return Err(CliError::Usage(format!(
                "unknown command {other:?}; try help"
            )))
        }
    }
    Ok(true)
}
