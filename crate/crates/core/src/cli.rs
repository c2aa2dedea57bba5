//! The `cep` command line.
//!
//! Every subcommand reads proofs or automata from files (`-` for stdin) and
//! prints either a short text summary or, with `--json`, a report document
//! with the command, its options, a SHA-256 digest of every input and the
//! result. Reports contain no timing unless `--timing` is given, so reruns
//! on the same input are byte-identical whatever `--jobs` is.
//!
//! Exit codes: 0 for a positive answer, 3 for a negative one, 4 when the
//! order question is not applicable, 5 for an unknown answer, 1 for input
//! or internal errors and 2 for usage errors.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::automata::{
    build_antecedent_approx, build_antecedent_full, build_consequent, export_dot, AutomatonFile, TracePairQuery,
    WeightedAutomaton,
};
use crate::containment::{decide_containment, oracle_compare, ContainmentStatus, Engine};
use crate::decision::{decide_order, definition_oracle, DecideOptions, OrderStatus};
use crate::error::{Error, Result};
use crate::proof::{parse_proof_graph, validate, ProofGraph};
use crate::report;
use crate::restrictions::check_restrictions;
use crate::soundness::check_global_soundness;
use crate::traces::enumerate_right_maximal;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;
pub const EXIT_NOT_APPLICABLE: i32 = 4;
pub const EXIT_UNKNOWN: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "cep", version, about = "Trace-value ordering for cyclic entailment proofs")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, value_name = "K", value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    /// Add wall-clock timing to the output.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Args)]
struct QueryArgs {
    /// Node at which the values are compared.
    #[arg(long)]
    node: String,
    /// Antecedent trace value.
    #[arg(long)]
    ant: String,
    /// Consequent trace value.
    #[arg(long)]
    con: String,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct WhichAutomaton {
    /// Antecedent approximation of depth N.
    #[arg(long, value_name = "N")]
    approx: Option<u32>,
    /// Full antecedent automaton.
    #[arg(long)]
    full: bool,
    /// Consequent automaton (the default).
    #[arg(long)]
    consequent: bool,
}

#[derive(Debug, Args)]
struct EngineArgs {
    /// Compare strictly.
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value = "lagset", value_name = "lagset|oracle")]
    engine: Engine,
    /// Largest profile spread the lag-set engine explores.
    #[arg(long, value_name = "K")]
    lag_cap: Option<u64>,
    /// Longest word the oracle engine tries.
    #[arg(long, default_value_t = 12, value_name = "L")]
    oracle_len: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check well-formedness and trace injectivity of a proof.
    Validate { file: PathBuf },
    /// Check global soundness; exit 3 with a lasso witness if unsound.
    Soundness { file: PathBuf },
    /// List positive maximal consequent traces from a value.
    Traces {
        file: PathBuf,
        #[arg(long)]
        node: String,
        #[arg(long)]
        con: String,
        /// Longest path, in nodes.
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        /// Also check each trace for an antecedent partner from this value.
        #[arg(long)]
        ant: Option<String>,
        /// With --ant, require strictly larger partners.
        #[arg(long, requires = "ant")]
        strict: bool,
    },
    /// Build one automaton; summarize it and optionally write DOT or JSON.
    Automata {
        file: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        which: WhichAutomaton,
        /// Write Graphviz DOT here (`-` for stdout instead of the summary).
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
        /// Write the automaton in the exchange format read by `contain`.
        #[arg(long, value_name = "OUT")]
        export: Option<PathBuf>,
    },
    /// Check the three restrictions for a query and compute thresholds.
    Restrictions {
        file: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Compare the languages of two exported automata, B against A.
    Contain {
        b: PathBuf,
        a: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Decide whether the consequent value is bounded by the antecedent value.
    Order {
        file: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        engine: EngineArgs,
    },
}

/// Lag cap for `contain` when none is given.
pub const RAW_LAG_CAP: u64 = 64;

struct Input {
    path: String,
    bytes: Vec<u8>,
}

impl Input {
    fn read(path: &PathBuf) -> Result<Self> {
        let bytes = if path.as_os_str() == "-" {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf)?;
            buf
        } else {
            std::fs::read(path)?
        };
        Ok(Input {
            path: path.display().to_string(),
            bytes,
        })
    }

    fn digest(&self) -> Value {
        json!({"path": self.path, "sha256": report::sha256_hex(&self.bytes)})
    }
}

/// What a subcommand produced.
struct Outcome {
    code: i32,
    options: Value,
    inputs: Vec<Value>,
    result: Value,
    text: String,
    /// Printed instead of any report.
    raw: Option<String>,
}

fn load_proof(path: &PathBuf) -> Result<(Input, ProofGraph)> {
    let input = Input::read(path)?;
    let p = parse_proof_graph(&input.bytes)?;
    Ok((input, p))
}

fn resolve(p: &ProofGraph, q: &QueryArgs) -> Result<TracePairQuery> {
    TracePairQuery::resolve(p, &q.node, &q.ant, &q.con)
}

fn query_options(q: &QueryArgs) -> Value {
    json!({"node": q.node, "ant": q.ant, "con": q.con})
}

fn yes_no(b: bool, yes: &str, no: &str) -> String {
    if b { yes } else { no }.to_string()
}

fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Validate { file } => {
            let (input, p) = load_proof(file)?;
            let r = validate(&p);
            let mut text = format!(
                "{}\ntrace injective: {}\n",
                yes_no(r.is_clean(), "clean", "findings present"),
                r.trace_injective
            );
            for f in &r.findings {
                text += &format!("  {:?} at {}: {}\n", f.kind, f.location, f.message);
            }
            Ok(Outcome {
                code: if r.is_clean() { EXIT_OK } else { EXIT_NEGATIVE },
                options: json!({}),
                inputs: vec![input.digest()],
                result: report::validation(&r),
                text,
                raw: None,
            })
        }
        Command::Soundness { file } => {
            let (input, p) = load_proof(file)?;
            let r = check_global_soundness(&p);
            let mut text = yes_no(r.sound, "sound\n", "unsound\n");
            if let Some(w) = &r.witness {
                text += &format!(
                    "  lasso: prefix {} cycle {}\n",
                    p.render_nodes(&w.prefix).join(" "),
                    p.render_nodes(&w.cycle).join(" ")
                );
            }
            Ok(Outcome {
                code: if r.sound { EXIT_OK } else { EXIT_NEGATIVE },
                options: json!({}),
                inputs: vec![input.digest()],
                result: report::soundness(&p, &r),
                text,
                raw: None,
            })
        }
        Command::Traces {
            file,
            node,
            con,
            max_len,
            ant,
            strict,
        } => {
            let (input, p) = load_proof(file)?;
            let n = p.node_id(node)?;
            let c = p.value_at(n, crate::Side::Right, con)?;
            let traces = enumerate_right_maximal(&p, n, c, *max_len)?;
            let mut text = format!("{} positive maximal traces\n", traces.len());
            for (path, t) in &traces {
                text += &format!(
                    "  {} : {}\n",
                    p.render_nodes(path).join(" "),
                    p.render_values(&t.values).join(" ")
                );
            }
            let mut result = json!({
                "traces": traces.iter().map(|(path, t)| report::right_trace(&p, path, t)).collect::<Vec<_>>(),
            });
            if let Some(ant) = ant {
                let q = TracePairQuery::resolve(&p, node, ant, con)?;
                let o = definition_oracle(&p, &q, *strict, *max_len)?;
                text += &yes_no(
                    o.is_counterexample(),
                    "some trace has no antecedent partner\n",
                    "every trace has an antecedent partner\n",
                );
                result["partners"] = report::definition(&p, &o);
            }
            Ok(Outcome {
                code: EXIT_OK,
                options: json!({"node": node, "con": con, "max_len": max_len, "ant": ant, "strict": strict}),
                inputs: vec![input.digest()],
                result,
                text,
                raw: None,
            })
        }
        Command::Automata {
            file,
            query,
            which,
            dot,
            export,
        } => {
            let (input, p) = load_proof(file)?;
            let q = resolve(&p, query)?;
            let (a, kind) = if let Some(n) = which.approx {
                (build_antecedent_approx(&p, &q, n)?, json!({"approx": n}))
            } else if which.full {
                (build_antecedent_full(&p, &q)?, json!("full"))
            } else {
                (build_consequent(&p, &q)?, json!("consequent"))
            };
            let mut raw = None;
            if let Some(out) = dot {
                let text = export_dot(&a);
                if out.as_os_str() == "-" {
                    raw = Some(text);
                } else {
                    std::fs::write(out, text)?;
                }
            }
            if let Some(out) = export {
                std::fs::write(out, a.to_json())?;
            }
            let result = report::automaton(Some(&p), &a);
            let text = format!(
                "{}: {} states, {} transitions, {}\n",
                a.kind(),
                a.len(),
                a.transitions().len(),
                result["ambiguity"].as_str().unwrap_or("")
            );
            Ok(Outcome {
                code: EXIT_OK,
                options: json!({"query": query_options(query), "automaton": kind}),
                inputs: vec![input.digest()],
                result,
                text,
                raw,
            })
        }
        Command::Restrictions { file, query } => {
            let (input, p) = load_proof(file)?;
            let q = resolve(&p, query)?;
            let r = check_restrictions(&p, &q)?;
            let t = &r.thresholds;
            let text = format!(
                "finitely progressing: {}\ndynamic: {}\nbalanced: {}\nW={} in={} C={} maxStep={} N={}\n",
                r.finitely_progressing.passed,
                r.dynamic.passed,
                r.balanced
                    .as_ref()
                    .map_or("not checked".to_string(), |b| b.passed.to_string()),
                t.trace_width,
                t.in_degree,
                t.cycle_threshold,
                t.max_step,
                t.n_bound.map_or("undefined".to_string(), |n| n.to_string()),
            );
            Ok(Outcome {
                code: if r.passed() { EXIT_OK } else { EXIT_NEGATIVE },
                options: json!({"query": query_options(query)}),
                inputs: vec![input.digest()],
                result: report::restrictions(&p, &r),
                text,
                raw: None,
            })
        }
        Command::Contain { b, a, engine } => {
            let (bi, ai) = (Input::read(b)?, Input::read(a)?);
            let (bf, af) = (AutomatonFile::parse(&bi.bytes)?, AutomatonFile::parse(&ai.bytes)?);
            let (ba, aa) = AutomatonFile::load_pair(&bf, &af)?;
            let lag_cap = engine.lag_cap.unwrap_or(RAW_LAG_CAP);
            let v = match engine.engine {
                Engine::Lagset => decide_containment(&ba, &aa, engine.strict, lag_cap)?,
                Engine::Oracle => oracle_compare(&ba, &aa, engine.strict, engine.oracle_len)?,
            };
            let code = match v.status {
                ContainmentStatus::Verified => EXIT_OK,
                ContainmentStatus::Refuted => EXIT_NEGATIVE,
                _ => EXIT_UNKNOWN,
            };
            let text = contain_text(&ba, &v);
            Ok(Outcome {
                code,
                options: engine_options(engine, Some(lag_cap)),
                inputs: vec![bi.digest(), ai.digest()],
                result: report::containment(&ba, &v),
                text,
                raw: None,
            })
        }
        Command::Order { file, query, engine } => {
            let (input, p) = load_proof(file)?;
            let q = resolve(&p, query)?;
            let opts = DecideOptions {
                engine: engine.engine,
                lag_cap: engine.lag_cap,
                oracle_len: engine.oracle_len,
            };
            let v = decide_order(&p, &q, engine.strict, &opts)?;
            let code = match v.status {
                OrderStatus::Holds => EXIT_OK,
                OrderStatus::Fails => EXIT_NEGATIVE,
                OrderStatus::NotApplicable => EXIT_NOT_APPLICABLE,
                OrderStatus::Unknown => EXIT_UNKNOWN,
            };
            let result = report::order(&p, &q, &v);
            let mut text = format!(
                "{} {} {} at {}: {}\n",
                query.con,
                if engine.strict { "<" } else { "≤" },
                query.ant,
                query.node,
                result["status"].as_str().unwrap_or("")
            );
            for r in result["reasons"].as_array().into_iter().flatten() {
                let passed = match (r.get("passed"), r.get("status")) {
                    (Some(Value::Bool(b)), _) => yes_no(*b, "passed", "failed"),
                    (_, Some(Value::String(s))) => s.clone(),
                    _ => String::new(),
                };
                text += &format!("  {}: {}\n", r["check"].as_str().unwrap_or(""), passed);
            }
            if let Some(w) = &v.witness {
                text += &format!(
                    "  witness: path {} trace {} ({} vs {})\n",
                    p.render_nodes(&w.path).join(" "),
                    p.render_values(&w.trace.values).join(" "),
                    w.consequent_value,
                    w.antecedent_value
                );
            }
            Ok(Outcome {
                code,
                options: {
                    let mut o = engine_options(engine, v.reasons.iter().find_map(|r| match r {
                        crate::decision::Reason::Bound { lag_cap, .. } => *lag_cap,
                        _ => None,
                    }));
                    o.as_object_mut()
                        .expect("object")
                        .shift_insert(0, "query".into(), query_options(query));
                    o
                },
                inputs: vec![input.digest()],
                result,
                text,
                raw: None,
            })
        }
    }
}

fn engine_options(e: &EngineArgs, lag_cap: Option<u64>) -> Value {
    json!({
        "strict": e.strict,
        "engine": e.engine,
        "lag_cap": lag_cap,
        "oracle_len": e.oracle_len,
    })
}

fn contain_text(b: &WeightedAutomaton, v: &crate::containment::ContainmentVerdict) -> String {
    let status = serde_json::to_value(v.status).expect("status serializes");
    let mut text = format!("{}\n", status.as_str().unwrap_or(""));
    if let Some(cx) = &v.counterexample {
        text += &format!(
            "  word: {}\n  values: {} vs {}\n",
            b.render_word(&cx.word).join(" "),
            cx.b_value,
            cx.a_value
        );
    }
    text
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Soundness { .. } => "soundness",
        Command::Traces { .. } => "traces",
        Command::Automata { .. } => "automata",
        Command::Restrictions { .. } => "restrictions",
        Command::Contain { .. } => "contain",
        Command::Order { .. } => "order",
    }
}

/// Parses `argv` (program name first), runs the command and writes its
/// output. Returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };

    let started = Instant::now();
    let outcome = match cli.jobs {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k as usize).build() {
            Ok(pool) => pool.install(|| execute(&cli.command)),
            Err(e) => {
                let _ = writeln!(stderr, "cep: cannot start {k} workers: {e}");
                return EXIT_ERROR;
            }
        },
        None => execute(&cli.command),
    };
    let elapsed_ms = started.elapsed().as_secs_f64() * 1000.0;

    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "cep: {e}");
            return EXIT_ERROR;
        }
    };
    log::info!("{} finished with exit code {}", command_name(&cli.command), outcome.code);

    let written = if let Some(raw) = &outcome.raw {
        write!(stdout, "{raw}")
    } else if cli.json {
        let mut doc = json!({
            "command": command_name(&cli.command),
            "options": outcome.options,
            "inputs": outcome.inputs,
            "exit_code": outcome.code,
            "result": outcome.result,
        });
        if cli.timing {
            doc["timing"] = json!({"elapsed_ms": elapsed_ms});
        }
        let text = serde_json::to_string_pretty(&doc).expect("reports serialize");
        writeln!(stdout, "{text}")
    } else {
        let mut text = outcome.text;
        if cli.timing {
            text += &format!("elapsed: {elapsed_ms:.3} ms\n");
        }
        write!(stdout, "{text}")
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "cep: {}", Error::Io(e));
        return EXIT_ERROR;
    }
    outcome.code
}
