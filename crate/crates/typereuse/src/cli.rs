//! Command-line front end. Results go to standard output in a stable
//! format; diagnostics go to standard error. Exit codes: 0 success, 1 a
//! failed reuse or benchmark, 2 usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use typereuse_core::align::{build_variables, enumerate_alignments, Alignment, Alignments};
use typereuse_core::distance::{cost_to_f64, delta, DistanceTable};
use typereuse_core::driver::{code_reuse, ReuseConfig};
use typereuse_core::featurize::psi;
use typereuse_core::rank::{rerank, RankStatus};
use typereuse_core::runtime::standard_registry;
use typereuse_core::search::SearchIndex;
use typereuse_core::synth::{emit_pseudo_source, AdapterSynthesizer};
use typereuse_core::typemodel::{parse_signature, parse_type, parse_type_syntactic, ClassDef, Corpus, TypeEnv, DEFAULT_DEPENDENCY_CAP};

use crate::bench::{render_table, run_task, TASKS};
use crate::corpus::resolve_corpus;
use crate::error::{Error, Result};
use crate::json::{decode_query, encode_result, LoadedQuery};

#[derive(Debug, Parser)]
#[command(name = "typereuse", version, about = "Type-directed code reuse: search, align, synthesize, test")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the feature multiset of a type as sorted `token:count` lines.
    Psi {
        ty: String,
        #[arg(long)]
        corpus: Option<String>,
        /// Extra class, as `Name(field:type, ...)`. Repeatable.
        #[arg(long = "class", value_name = "DECL")]
        classes: Vec<String>,
    },
    /// Print the type distance between two types.
    Distance {
        a: String,
        b: String,
        #[arg(long)]
        corpus: Option<String>,
        /// Extra class, as `Name(field:type, ...)`. Repeatable.
        #[arg(long = "class", value_name = "DECL")]
        classes: Vec<String>,
    },
    /// Enumerate the cheapest interface alignments between two signatures.
    Align {
        #[arg(long)]
        adapter: String,
        #[arg(long)]
        adaptee: String,
        #[arg(long)]
        corpus: Option<String>,
        /// Extra class, as `Name(field:type, ...)`. Repeatable.
        #[arg(long = "class", value_name = "DECL")]
        classes: Vec<String>,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = typereuse_core::align::DEFAULT_MAX_GROUP)]
        max_group: usize,
    },
    /// Keyword search over corpus names and docs.
    Search {
        #[arg(long)]
        corpus: String,
        #[arg(long)]
        query: String,
        #[arg(long, default_value_t = typereuse_core::search::DEFAULT_TOP_K)]
        k: usize,
    },
    /// Keyword search for a query file's description, re-ranked by alignment cost.
    Rank {
        #[arg(long)]
        corpus: String,
        #[arg(long)]
        query_file: PathBuf,
        #[arg(long, default_value_t = typereuse_core::search::DEFAULT_TOP_K)]
        k: usize,
        #[arg(long, default_value_t = typereuse_core::align::DEFAULT_MAX_GROUP)]
        max_group: usize,
    },
    /// Synthesize one adapter plan for a query against a chosen corpus entry.
    Synth {
        #[arg(long)]
        corpus: String,
        #[arg(long)]
        query: PathBuf,
        /// Corpus entry id of the adaptee.
        #[arg(long)]
        adaptee: String,
        /// 0-based alignment index in cost order.
        #[arg(long, default_value_t = 0)]
        alignment: usize,
        /// 0-based plan index for that alignment.
        #[arg(long, default_value_t = 0)]
        plan: usize,
        #[command(flatten)]
        limits: Limits,
        /// Write the JSON plan here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full search, align, synthesize and test loop.
    Reuse {
        #[arg(long)]
        corpus: String,
        #[arg(long)]
        query: PathBuf,
        /// Test file; defaults to the query file's own `tests`.
        #[arg(long)]
        tests: Option<PathBuf>,
        #[arg(long, default_value_t = typereuse_core::search::DEFAULT_TOP_K)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        max_alignments: usize,
        #[command(flatten)]
        limits: Limits,
        /// Write the result JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the result JSON instead of the summary.
        #[arg(long)]
        json: bool,
    },
    /// Run the bundled ten-task benchmark on the standard corpus.
    Bench {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct Limits {
    #[arg(long, default_value_t = typereuse_core::synth::PLAN_CAP)]
    max_plans: usize,
    #[arg(long, default_value_t = typereuse_core::align::DEFAULT_MAX_GROUP)]
    max_group: usize,
    #[arg(long, default_value_t = typereuse_core::synth::DEFAULT_DEPTH)]
    depth: usize,
}

/// Parses `args` (program name first) and runs the command.
pub fn run(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io { path: PathBuf::from("<stdout>"), source: e }
}

fn env_of(corpus: Option<&str>, classes: &[String]) -> Result<TypeEnv> {
    let base = match corpus {
        Some(source) => resolve_corpus(source, DEFAULT_DEPENDENCY_CAP)?.env,
        None => TypeEnv::new(),
    };
    let local = TypeEnv::from_classes(classes.iter().map(|d| parse_class_decl(d)).collect::<Result<Vec<_>>>()?)?;
    let env = base.merged(&local)?;
    env.validate()?;
    Ok(env)
}

/// Parses `Name(field:type, ...)`; field types may name other classes.
fn parse_class_decl(decl: &str) -> Result<ClassDef> {
    let bad = || Error::format(format!("class `{decl}` is not of the form Name(field:type, ...)"));
    let (name, rest) = decl.split_once('(').ok_or_else(bad)?;
    let body = rest.trim_end().strip_suffix(')').ok_or_else(bad)?;
    let mut fields = Vec::new();
    for field in split_top_level(body) {
        let (n, t) = field.split_once(':').ok_or_else(bad)?;
        fields.push((n.trim().to_string(), parse_type_syntactic(t.trim())?));
    }
    Ok(ClassDef::new(name.trim(), fields, true, true)?)
}

/// Splits on commas outside angle brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let (mut depth, mut start, mut parts) = (0i32, 0, Vec::new());
    for (i, c) in s.char_indices() {
        match c {
            '<' => depth += 1,
            '>' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts.into_iter().filter(|p| !p.trim().is_empty()).collect()
}

fn read_json(path: &Path) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
    Ok(serde_json::from_str(&text)?)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.into(), source })
}

fn load_query(path: &Path, corpus: &Corpus, tests: Option<&Path>) -> Result<LoadedQuery> {
    let tests = tests.map(read_json).transpose()?;
    decode_query(&read_json(path)?, &corpus.env, tests.as_ref())
}

/// Variables ordered by the first adapter slot they cover, return slot last.
fn alignment_line(a: &Alignment) -> String {
    let mut vars: Vec<_> = a.variables.iter().collect();
    vars.sort_by_key(|v| v.adapter.iter().map(|s| (s.is_return(), s.index)).min());
    let mut parts = Vec::new();
    for v in vars {
        let names = |slots: &[typereuse_core::typemodel::ParamSlot]| {
            slots.iter().map(|s| s.name.as_str()).collect::<Vec<_>>().join(", ")
        };
        parts.push(format!("({}) -> ({})", names(&v.adaptee), names(&v.adapter)));
    }
    format!("{} @ {} = {:.4}", parts.join(", "), a.cost, cost_to_f64(&a.cost))
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Psi { ty, corpus, classes } => {
            let env = env_of(corpus.as_deref(), &classes)?;
            let features = psi(&parse_type(&ty, &env)?, &env)?;
            for (token, count) in features.sorted_tokens() {
                writeln!(out, "{token}:{count}").map_err(io)?;
            }
        }
        Command::Distance { a, b, corpus, classes } => {
            let env = env_of(corpus.as_deref(), &classes)?;
            let d = delta(&parse_type(&a, &env)?, &parse_type(&b, &env)?, &env)?;
            writeln!(out, "{d} = {}", d.as_f64()).map_err(io)?;
        }
        Command::Align { adapter, adaptee, corpus, classes, k, max_group } => {
            let env = env_of(corpus.as_deref(), &classes)?;
            let r = parse_signature(&adapter, &env)?;
            let e = parse_signature(&adaptee, &env)?;
            let problem = build_variables(&r, &e, &env, max_group)?;
            let all = enumerate_alignments(&problem, k);
            if all.is_empty() {
                writeln!(err, "no feasible alignment").map_err(io)?;
                return Ok(1);
            }
            for (i, a) in all.iter().enumerate() {
                writeln!(out, "m{} {}", i + 1, alignment_line(a)).map_err(io)?;
            }
        }
        Command::Search { corpus, query, k } => {
            let corpus = resolve_corpus(&corpus, DEFAULT_DEPENDENCY_CAP)?;
            for (i, hit) in SearchIndex::build(&corpus.entries).search(&query, k).iter().enumerate() {
                writeln!(out, "{} {:.6} {}", i + 1, hit.score, hit.entry_id).map_err(io)?;
            }
        }
        Command::Rank { corpus, query_file, k, max_group } => {
            let corpus = resolve_corpus(&corpus, DEFAULT_DEPENDENCY_CAP)?;
            let loaded = load_query(&query_file, &corpus, None)?;
            let hits = SearchIndex::build(&corpus.entries).search(&loaded.query.description, k);
            let entries: Vec<_> = hits.iter().filter_map(|h| corpus.get(&h.entry_id)).collect();
            let ranked = rerank(&loaded.query.signature, &entries, &loaded.env, max_group, &mut DistanceTable::new());
            for c in ranked {
                let cost = match (c.status, c.cost) {
                    (RankStatus::Feasible, Some(cost)) => cost.to_string(),
                    (RankStatus::Unresolvable, _) => "unresolvable".into(),
                    _ => "infeasible".into(),
                };
                writeln!(out, "{} {} {} {}", c.final_rank, c.original_rank, cost, c.entry_id).map_err(io)?;
            }
        }
        Command::Synth { corpus, query, adaptee, alignment, plan, limits, out: path } => {
            let corpus = resolve_corpus(&corpus, DEFAULT_DEPENDENCY_CAP)?;
            let loaded = load_query(&query, &corpus, None)?;
            let entry = corpus.get(&adaptee).ok_or_else(|| Error::format(format!("no corpus entry `{adaptee}`")))?;
            let problem = build_variables(&loaded.query.signature, &entry.signature, &loaded.env, limits.max_group)?;
            let Some(chosen) = Alignments::new(&problem).nth(alignment) else {
                writeln!(err, "alignment {alignment} does not exist").map_err(io)?;
                return Ok(1);
            };
            writeln!(out, "// alignment: {}", alignment_line(&chosen)).map_err(io)?;
            let synth = AdapterSynthesizer::new(
                &chosen,
                &loaded.query.signature,
                entry,
                &loaded.env,
                limits.depth,
                limits.max_plans,
            );
            let adapter_plan = match synth.and_then(|s| s.plan(plan)) {
                Ok(p) => p,
                Err(e) => {
                    writeln!(err, "{e}").map_err(io)?;
                    return Ok(1);
                }
            };
            write!(out, "{}", emit_pseudo_source(&adapter_plan, &loaded.env)).map_err(io)?;
            if let Some(path) = path {
                write_file(&path, &serde_json::to_string_pretty(&adapter_plan)?)?;
            }
        }
        Command::Reuse { corpus, query, tests, k, max_alignments, limits, out: path, json } => {
            let corpus = resolve_corpus(&corpus, DEFAULT_DEPENDENCY_CAP)?;
            let loaded = load_query(&query, &corpus, tests.as_deref())?;
            if loaded.query.tests.is_empty() {
                return Err(Error::format("no tests given"));
            }
            let cfg = ReuseConfig {
                top_k: k,
                max_alignments,
                max_plans: limits.max_plans,
                max_group: limits.max_group,
                depth: limits.depth,
                ..ReuseConfig::default()
            };
            let result = code_reuse(&loaded.query, &corpus, &standard_registry(), &cfg)?;
            let encoded = serde_json::to_string_pretty(&encode_result(&result, &loaded.env))?;
            if let Some(path) = path {
                write_file(&path, &encoded)?;
            }
            if json {
                writeln!(out, "{encoded}").map_err(io)?;
            }
            let a = result.attempts;
            let Some(s) = result.success() else {
                writeln!(
                    err,
                    "no adapter passed the tests ({} candidates, {} alignments, {} plans)",
                    a.candidates, a.alignments, a.plans
                )
                .map_err(io)?;
                return Ok(1);
            };
            if !json {
                writeln!(out, "adaptee: {}", s.adaptee_id).map_err(io)?;
                writeln!(out, "alignment: {}", alignment_line(&s.alignment)).map_err(io)?;
                writeln!(out, "attempts: {} candidates, {} alignments, {} plans", a.candidates, a.alignments, a.plans)
                    .map_err(io)?;
                write!(out, "{}", emit_pseudo_source(&s.plan, &loaded.env)).map_err(io)?;
            }
        }
        Command::Bench { json } => {
            let corpus = resolve_corpus("std", DEFAULT_DEPENDENCY_CAP)?;
            let registry = standard_registry();
            let cfg = ReuseConfig::default();
            let runs = TASKS.iter().map(|t| run_task(t, &corpus, &registry, &cfg)).collect::<Result<Vec<_>>>()?;
            if json {
                let rows: Vec<_> = runs
                    .iter()
                    .map(|r| {
                        serde_json::json!({
                            "task": r.name,
                            "passed": r.passed(),
                            "timeMs": r.elapsed.as_secs_f64() * 1e3,
                            "result": encode_result(&r.result, &r.env),
                        })
                    })
                    .collect();
                writeln!(out, "{}", serde_json::to_string_pretty(&rows)?).map_err(io)?;
            } else {
                write!(out, "{}", render_table(&runs)).map_err(io)?;
            }
            if !runs.iter().all(|r| r.passed()) {
                return Ok(1);
            }
        }
    }
    Ok(0)
}
