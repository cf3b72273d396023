//! Batch front end.
//!
//! Exit status: 0 for success or a true verdict, 1 for a false verdict,
//! 2 for any error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use crate::algebra::{Label, PrimesManifest, Registry, UElement};
use crate::expr::{parse, Expression, Value};
use crate::gamma::{build_gamma, verify_unique_root, GammaError, GammaVertex, DEFAULT_VERTEX_CAP};
use crate::oracle::{oracle_equal_with_cap, word_of, DEFAULT_CAP};
use crate::roots::{fuzz, verify_diamond, GraphDoc, ReductionGraph};
use crate::selftest::{run_selftest, SelftestConfig};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "thetakit", version, about = "Theta-curve semigroup toolkit")]
struct Cli {
    /// Primes manifest: {"theta":[..],"knot":[..],"manifold":[..]}.
    #[arg(long, global = true)]
    primes: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a primes manifest and list its generators.
    Declare {
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Print the normal form of an expression.
    Normalize(ExprArg),
    /// Decide equality of two expressions.
    Eq {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Prime factorization in canonical order.
    Factor(ExprArg),
    /// Build the reduction graph below an expression.
    Gamma {
        #[command(flatten)]
        expr: ExprArg,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Check uniqueness of the root, (F), (EE) and descent.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
    /// Root analysis of explicit graphs.
    #[command(subcommand)]
    Ars(ArsCommand),
    /// Brute-force word equality.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Run the seeded invariant suite.
    Selftest {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        max_primes: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
}

#[derive(Debug, Args)]
struct ExprArg {
    #[arg(long)]
    expr: String,
    /// Edge label given to a knot expression when it enters Γ.
    #[arg(long, default_value = "0", value_parser = parse_label)]
    label: Label,
}

fn parse_label(s: &str) -> Result<Label, String> {
    let mut chars = s.chars();
    match (chars.next().and_then(Label::from_symbol), chars.next()) {
        (Some(l), None) => Ok(l),
        _ => Err(format!("invalid label `{s}`, expected -, 0 or +")),
    }
}

#[derive(Debug, Subcommand)]
enum ArsCommand {
    /// Check (F) and (EE) on a graph file and list the roots.
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check the unique-root theorem on random DAGs.
    Fuzz {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        max_vertices: usize,
        #[arg(long)]
        edge_prob: f64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Decide equality by search over commutations.
    Eq {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

/// Outcome of a command before it is printed.
enum Outcome {
    Done(Json, String),
    Verdict(bool, Json, String),
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Runs the tool on `argv` (including the program name), writing results to
/// `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
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
                    let _ = write!(out, "{text}");
                    EXIT_TRUE
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_ERROR
                }
            };
        }
    };
    let format = cli.format;
    match execute(cli) {
        Ok(outcome) => {
            let (code, data, text) = match outcome {
                Outcome::Done(data, text) => (EXIT_TRUE, data, text),
                Outcome::Verdict(v, data, text) => (if v { EXIT_TRUE } else { EXIT_FALSE }, data, text),
            };
            let _ = match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&data).unwrap_or_default()),
                Format::Pretty => write!(out, "{text}"),
            };
            code
        }
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn load_registry(path: Option<&Path>) -> Result<Registry, Failure> {
    let path = path.ok_or_else(|| Failure("no primes manifest given (use --primes FILE)".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let manifest: PrimesManifest =
        serde_json::from_str(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Ok(Registry::from_manifest(&manifest)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn value_json(v: &Value) -> Json {
    let value = match v {
        Value::Theta(t) => json!(t),
        Value::Knot(k) => json!(k),
        Value::Manifold(m) => json!(m),
    };
    json!({ "sort": v.sort_name(), "value": value, "text": v.to_string() })
}

fn element_of(expr: &ExprArg, registry: &Registry) -> Result<(Expression, UElement), Failure> {
    let e = parse(&expr.expr, registry)?;
    let u = e.evaluate().into_element(expr.label);
    Ok((e, u))
}

fn execute(cli: Cli) -> Result<Outcome, Failure> {
    let primes = cli.primes.as_deref();
    match cli.command {
        Command::Declare { file } => {
            let registry = load_registry(file.as_deref().or(primes))?;
            let mut text = String::new();
            for g in registry.generators() {
                text.push_str(&format!("{}\t{}\n", g.name, g.kind));
            }
            Ok(Outcome::Done(json!(registry.to_manifest()), text))
        }
        Command::Normalize(arg) => {
            let registry = load_registry(primes)?;
            let v = parse(&arg.expr, &registry)?.evaluate();
            let text = format!("{} {}\n", v.sort_name(), v);
            Ok(Outcome::Done(value_json(&v), text))
        }
        Command::Eq { lhs, rhs } => {
            let registry = load_registry(primes)?;
            let (a, b) = (parse(&lhs, &registry)?.evaluate(), parse(&rhs, &registry)?.evaluate());
            let equal = a == b;
            Ok(Outcome::Verdict(
                equal,
                json!({ "equal": equal, "lhs": value_json(&a), "rhs": value_json(&b) }),
                format!("{equal}\n"),
            ))
        }
        Command::Factor(arg) => {
            let registry = load_registry(primes)?;
            let v = parse(&arg.expr, &registry)?.evaluate();
            let factors: Vec<Value> = match &v {
                Value::Theta(t) => t.prime_factorization()?.into_iter().map(Value::Theta).collect(),
                Value::Knot(k) if !k.is_trivial() => {
                    k.prime_factors().into_iter().map(Value::Knot).collect()
                }
                Value::Manifold(m) if !m.is_trivial() => m
                    .summands
                    .elements()
                    .map(|p| Value::Manifold(crate::algebra::ManifoldNF::prime(p)))
                    .collect(),
                _ => return Err(Failure(format!("the trivial {} has no prime factorization", v.sort_name()))),
            };
            let text: String = factors.iter().map(|f| format!("{f}\n")).collect();
            Ok(Outcome::Done(
                json!({ "factors": factors.iter().map(value_json).collect::<Vec<_>>() }),
                text,
            ))
        }
        Command::Gamma {
            expr,
            dot,
            json: json_path,
            verify,
            cap,
        } => {
            let registry = load_registry(primes)?;
            let (_, u) = element_of(&expr, &registry)?;
            let start = GammaVertex::single(u);
            let (gamma, report) = if verify {
                match verify_unique_root(&start, cap) {
                    Ok((g, r)) => (g, Some(r)),
                    Err(GammaError::CapExceeded { cap, explored }) => {
                        return Err(Failure(format!(
                            "reduction graph exceeds the cap of {cap} vertices ({explored} explored)"
                        )))
                    }
                    Err(e) => {
                        return Ok(Outcome::Verdict(
                            false,
                            json!({ "verified": false, "error": e.to_string() }),
                            format!("verification failed: {e}\n"),
                        ))
                    }
                }
            } else {
                (build_gamma(&start, cap)?, None)
            };
            if let Some(path) = dot {
                write_file(&path, &gamma.to_dot())?;
            }
            if let Some(path) = json_path {
                write_file(&path, &serde_json::to_string_pretty(&gamma.to_json_doc())?)?;
            }
            let roots: Vec<&GammaVertex> =
                gamma.terminal_ids().into_iter().map(|i| &gamma.vertices[i]).collect();
            let mut text = format!(
                "vertices {}\nedges {}\n",
                gamma.graph.vertex_count(),
                gamma.graph.edge_count()
            );
            for r in &roots {
                text.push_str(&format!("root {r}\n"));
            }
            let mut data = json!({
                "vertices": gamma.graph.vertex_count(),
                "edges": gamma.graph.edge_count(),
                "roots": roots,
            });
            match report {
                Some(r) => {
                    text.push_str(&format!(
                        "unique root: yes\n(F): {}\n(EE): {}\ndescent: {}\n",
                        r.f_holds, r.ee_holds, r.descent_holds
                    ));
                    let ok = r.all_hold();
                    data["verified"] = json!(ok);
                    data["report"] = json!(r);
                    Ok(Outcome::Verdict(ok, data, text))
                }
                None => Ok(Outcome::Done(data, text)),
            }
        }
        Command::Ars(ArsCommand::Check { file, dot }) => {
            let text = fs::read_to_string(&file).map_err(|e| Failure(format!("{}: {e}", file.display())))?;
            let doc: GraphDoc = serde_json::from_str(&text).map_err(|e| Failure(format!("{}: {e}", file.display())))?;
            let g = ReductionGraph::from_json_doc(&doc)?;
            if let Some(path) = dot {
                write_file(&path, &g.to_dot())?;
            }
            let report = verify_diamond(&g)?;
            let mut text = format!("(F): {}\n(EE): {}\n", report.f_holds, report.ee_holds);
            for (v, roots) in &report.per_vertex_roots {
                let list: Vec<&str> = roots.iter().map(String::as_str).collect();
                text.push_str(&format!("roots({v}) = {{{}}}\n", list.join(", ")));
            }
            if let Some(v) = &report.violation {
                text.push_str(&format!("violation: {}\n", serde_json::to_string(v)?));
            }
            Ok(Outcome::Verdict(report.f_holds && report.ee_holds, json!(report), text))
        }
        Command::Ars(ArsCommand::Fuzz {
            count,
            max_vertices,
            edge_prob,
            seed,
        }) => {
            let s = fuzz(count, max_vertices, edge_prob, seed)?;
            let text = format!(
                "graphs {}\n(EE) holds {}\nnon-unique roots {}\ncounterexamples {}\n",
                s.graphs,
                s.ee_pass,
                s.non_unique,
                s.counterexamples.len()
            );
            Ok(Outcome::Verdict(s.passed(), json!(s), text))
        }
        Command::Oracle(OracleCommand::Eq { lhs, rhs, cap }) => {
            let registry = load_registry(primes)?;
            let w1 = word_of(&parse(&lhs, &registry)?)?;
            let w2 = word_of(&parse(&rhs, &registry)?)?;
            let equal = oracle_equal_with_cap(&w1, &w2, cap)?;
            Ok(Outcome::Verdict(
                equal,
                json!({ "equal": equal, "lhs": w1.to_string(), "rhs": w2.to_string() }),
                format!("{w1}\n{w2}\n{equal}\n"),
            ))
        }
        Command::Selftest {
            count,
            max_primes,
            seed,
            cap,
        } => {
            let cfg = SelftestConfig {
                count,
                max_primes,
                seed,
                vertex_cap: cap,
                ..SelftestConfig::default()
            };
            let results = run_selftest(&cfg);
            let all = results.iter().all(|r| r.passed());
            let mut text = String::new();
            for r in &results {
                text.push_str(&format!(
                    "{:<4} {:<45} {:>6} cases {:>4} failures\n",
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.name,
                    r.cases,
                    r.failures
                ));
                if let Some(f) = &r.first_failure {
                    text.push_str(&format!("     first failure: {f}\n"));
                }
            }
            Ok(Outcome::Verdict(all, json!({ "passed": all, "checks": results }), text))
        }
    }
}
