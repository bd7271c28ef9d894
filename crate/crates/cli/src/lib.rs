//! The `laman-bkk` command line.
//!
//! Exit codes: 0 on success, 1 for usage or input errors, 2 when a limit of
//! the implementation is hit (size caps, timeouts, lifting retries).

use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use laman_bkk::embed::enumerate_framework;
use laman_bkk::graph::{
    check_laman, classify, edge, henneberg_decompose, laman_oracle, orient_two_in, Edge, Framework, HennebergStep,
};
use laman_bkk::io::parse_graph_file;
use laman_bkk::mixed::{
    build_system, certify_general_bound, mv_for_graph, mv_inclusion_exclusion, EnumOptions, Form, MvOptions,
};
use laman_bkk::poly::{bezout, newton_polytopes};
use laman_bkk::rational::format_rational;
use laman_bkk::report::{Report, ReportOptions};
use laman_bkk::Error;

#[derive(Debug, Parser)]
#[command(name = "laman-bkk", version, about = "Mixed-volume bounds on embeddings of Laman frameworks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for random liftings.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = FormArg::Subsoe)]
    form: FormArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for mixed-cell enumeration.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Enumeration time limit in seconds.
    #[arg(long, global = true)]
    timeout: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormArg {
    Soe,
    Subsoe,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide the Laman property.
    Check { file: PathBuf },
    /// Henneberg class and a construction sequence.
    Henneberg { file: PathBuf },
    /// Two-in-degree orientation away from a base edge.
    Orient {
        file: PathBuf,
        /// Base edge as `i,j` (default: 1,2 or the first edge).
        #[arg(long)]
        base: Option<String>,
    },
    /// Print the polynomial system.
    System { file: PathBuf },
    /// Mixed volume by mixed-cell enumeration.
    Mv {
        file: PathBuf,
        /// Enumerate the whole system without separating blocks.
        #[arg(long)]
        direct: bool,
        /// Include every mixed cell in the output.
        #[arg(long)]
        cells: bool,
    },
    /// Certify the raw-system mixed volume 4^(n-2) with one mixed cell.
    Certify { file: PathBuf },
    /// Cross-check with brute-force oracles.
    Oracle { file: PathBuf },
    /// Enumerate real embeddings of a Henneberg I framework.
    Embed {
        file: PathBuf,
        /// Use the tight recipe lengths.
        #[arg(long)]
        tight: bool,
    },
    /// Every bound in one report.
    Report {
        file: PathBuf,
        #[arg(long)]
        tight: bool,
        /// Include wall-clock timings (output is then not reproducible).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

macro_rules! core {
    ($e:expr) => {
        $e.map_err(|e| Failure::Core(Error::from(e)))
    };
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            if code == 0 {
                let _ = write!(out, "{}", e.render());
            } else {
                let _ = write!(err, "{}", e.render());
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(value) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&value).expect("serializable") + "\n",
                Format::Text => render_text(&value),
            };
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) | Failure::Input(m) => (1, m),
                Failure::Core(e) => (if e.is_capability() { 2 } else { 1 }, e.to_string()),
            };
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn load(path: &PathBuf) -> Result<Framework, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    core!(parse_graph_file(&text))
}

fn form_of(f: FormArg) -> Form {
    match f {
        FormArg::Soe => Form::SoE,
        FormArg::Subsoe => Form::SubSoE,
    }
}

fn enum_options(cli: &Cli) -> EnumOptions {
    EnumOptions {
        threads: cli.threads,
        deadline: cli.timeout.map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))),
    }
}

fn edge_key(e: Edge) -> String {
    format!("{}-{}", e.0, e.1)
}

fn parse_base(s: &str) -> Result<Edge, Failure> {
    let parts: Vec<&str> = s.split([',', '-']).map(str::trim).collect();
    let bad = || Failure::Usage(format!("base edge {s:?} should look like `1,2`"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let a: usize = parts[0].parse().map_err(|_| bad())?;
    let b: usize = parts[1].parse().map_err(|_| bad())?;
    Ok(edge(a, b))
}

fn execute(cli: &Cli) -> Result<Value, Failure> {
    match &cli.command {
        Command::Check { file } => {
            let f = load(file)?;
            let res = check_laman(f.graph());
            Ok(json!({
                "n": f.graph().n(),
                "edges": f.graph().edge_count(),
                "laman": res.laman,
                "witness": res.witness,
            }))
        }
        Command::Henneberg { file } => {
            let f = load(file)?;
            let class = core!(classify(f.graph()))?;
            let dec = core!(henneberg_decompose(f.graph()))?;
            let steps: Vec<Value> = dec
                .sequence
                .steps
                .iter()
                .map(|s| match *s {
                    HennebergStep::StepI { a, b } => json!({"kind": "StepI", "a": a, "b": b}),
                    HennebergStep::StepII { a, b, c, removed } => {
                        json!({"kind": "StepII", "a": a, "b": b, "c": c, "removed": [removed.0, removed.1]})
                    }
                })
                .collect();
            Ok(json!({ "class": class, "steps": steps, "labels": dec.labels }))
        }
        Command::Orient { file, base } => {
            let f = load(file)?;
            let base = match base {
                Some(s) => parse_base(s)?,
                None if f.graph().has_edge(1, 2) => (1, 2),
                None => f.graph().edges().next().ok_or_else(|| Failure::Input("graph has no edges".into()))?,
            };
            let o = core!(orient_two_in(f.graph(), base))?;
            let in_degree: Map<String, Value> =
                (1..=f.graph().n()).map(|v| (v.to_string(), json!(o.in_degree(v)))).collect();
            Ok(json!({
                "base": [o.base.0, o.base.1],
                "arcs": o.arcs.values().map(|&(t, h)| [t, h]).collect::<Vec<_>>(),
                "in_degree": in_degree,
            }))
        }
        Command::System { file } => {
            let f = load(file)?;
            let sys = core!(build_system(&f, form_of(cli.form)))?;
            let polys: Vec<String> = sys.polys.iter().map(|p| p.render(&sys.variables)).collect();
            let degrees: Vec<u32> = sys.polys.iter().map(|p| p.total_degree()).collect();
            let vertices: Vec<usize> = newton_polytopes(&sys).iter().map(|p| p.vertices().len()).collect();
            Ok(json!({
                "form": sys.form,
                "variables": sys.variables,
                "labels": sys.labels,
                "polynomials": polys,
                "degrees": degrees,
                "newton_vertices": vertices,
                "bezout": number(&bezout(&sys).to_string()),
            }))
        }
        Command::Mv { file, direct, cells } => {
            let f = load(file)?;
            let form = form_of(cli.form);
            let sys = core!(build_system(&f, form))?;
            let opts = MvOptions { enumeration: enum_options(cli), direct: *direct };
            let r = core!(mv_for_graph(&f, form, cli.seed, &opts))?;
            let blocks: Vec<Value> = r
                .blocks
                .iter()
                .map(|b| {
                    let mut v = json!({
                        "coordinates": b.coordinates.iter().map(|&c| sys.variables[c].clone()).collect::<Vec<_>>(),
                        "value": format_rational(&b.value),
                        "seed": b.lifting_seed,
                        "cell_count": b.cells.len(),
                    });
                    if *cells {
                        v["cells"] = json!(b.cells);
                    }
                    v
                })
                .collect();
            let mut v = json!({
                "form": form,
                "value": number(&format_rational(&r.value)),
                "method": r.method,
                "seed": r.lifting_seed,
                "bezout": number(&bezout(&sys).to_string()),
                "cell_count": r.cells.len() + r.blocks.iter().map(|b| b.cells.len()).sum::<usize>(),
                "blocks": blocks,
            });
            if *cells {
                v["cells"] = json!(r.cells);
            }
            Ok(v)
        }
        Command::Certify { file } => {
            let f = load(file)?;
            let r = core!(certify_general_bound(f.graph()))?;
            let cell = &r.cells[0];
            Ok(json!({
                "value": number(&format_rational(&r.value)),
                "method": r.method,
                "det": format_rational(&cell.det),
                "strict": cell.strict,
                "cell": cell,
                "lifting": format!("mu_j = M*1 - (M-1)*xi_j with M = {}", 4 * f.graph().n()),
            }))
        }
        Command::Oracle { file } => {
            let f = load(file)?;
            let pebble = check_laman(f.graph()).laman;
            let subsets = core!(laman_oracle(f.graph()))?;
            let mut v = json!({ "pebble_game": pebble, "subset_oracle": subsets, "agree": pebble == subsets });
            if pebble {
                let sys = core!(build_system(&f, form_of(cli.form)))?;
                if sys.nvars() <= laman_bkk::polytope::VOLUME_DIM_CAP {
                    let ie = core!(mv_inclusion_exclusion(&newton_polytopes(&sys)))?;
                    let opts = MvOptions { enumeration: enum_options(cli), direct: true };
                    let en = core!(mv_for_graph(&f, form_of(cli.form), cli.seed, &opts))?;
                    v["mv_inclusion_exclusion"] = number(&format_rational(&ie));
                    v["mv_enumeration"] = number(&format_rational(&en.value));
                    v["mv_agree"] = json!(ie == en.value);
                }
            }
            Ok(v)
        }
        Command::Embed { file, tight } => {
            let f = load(file)?;
            let (used, embeddings) = core!(enumerate_framework(&f, *tight))?;
            let lengths: Map<String, Value> =
                used.lengths().iter().map(|(&e, l)| (edge_key(e), json!(format_rational(l)))).collect();
            Ok(json!({
                "tight": tight,
                "lengths": lengths,
                "embedding_count": embeddings.len(),
                "embeddings": embeddings,
            }))
        }
        Command::Report { file, tight, timings } => {
            let f = load(file)?;
            let opts =
                ReportOptions { seed: cli.seed, enumeration: enum_options(cli), tight: *tight, timings: *timings };
            let r = Report::build(&f, &opts)?;
            Ok(serde_json::to_value(&r).expect("serializable"))
        }
    }
}

/// Integers that fit in `u64` become JSON numbers; anything else stays a string.
fn number(s: &str) -> Value {
    s.parse::<u64>().map(Value::from).unwrap_or_else(|_| Value::from(s))
}

fn render_text(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let shown = match x {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out.push_str(&format!("{k}: {shown}\n"));
            }
        }
        other => out.push_str(&format!("{other}\n")),
    }
    out
}
