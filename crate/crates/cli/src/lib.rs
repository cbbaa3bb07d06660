//! The `fincat` command line: loads `.cat` workspaces and runs the
//! categorical constructions on them.

pub mod commands;
pub mod lexer;
pub mod workspace;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use fincat::adjunction::Side as AdjSide;
use fincat::kan::KanSide;
use fincat::limits::Side;
use fincat::Guard;
use serde_json::{json, Value};

use commands::{CommandError, Outcome, Settings};
use workspace::Workspace;

pub const SCHEMA: &str = "fincat-report/1";

#[derive(Debug, Parser)]
#[command(name = "fincat", version, about = "Finite category theory workbench")]
pub struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Search budget for enumerations.
    #[arg(long, global = true)]
    pub guard: Option<u64>,
    /// Workspace files; defaults to every `*.cat` in the current directory.
    #[arg(short = 'f', long = "file", global = true)]
    pub files: Vec<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AdjointSide {
    Left,
    Right,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every declaration against its laws.
    Validate {
        /// Files to validate in addition to `-f`.
        paths: Vec<PathBuf>,
    },
    /// Limit of a diagram.
    Limit { diagram: String },
    /// Colimit of a diagram.
    Colimit { diagram: String },
    /// End of a bifunctor on `op(J) x J`.
    End { bifunctor: String },
    /// Coend of a bifunctor on `op(J) x J`.
    Coend { bifunctor: String },
    /// Left Kan extension of F along K.
    KanLeft { k: String, f: String },
    /// Right Kan extension of F along K.
    KanRight { k: String, f: String },
    /// Adjoint of G built from universal arrows.
    AdjointOf {
        g: String,
        /// Which adjoint of G to build
        #[arg(long, value_enum)]
        side: AdjointSide,
    },
    /// Triangle identities for F -| G with unit and counit.
    Snake {
        f: String,
        g: String,
        eta: String,
        eps: String,
    },
    /// Yoneda bijection on declared, representable and random functors.
    YonedaCheck { category: String },
    /// Whether K is dense.
    Density { k: String },
    /// Codensity monad of K.
    Codensity { k: String },
    /// Limit of F weighted by W.
    WeightedLimit {
        w: String,
        f: String,
        /// Weighted colimit; W must be a presheaf on the domain of F
        #[arg(long)]
        colimit: bool,
    },
    /// Components of a string diagram.
    DiagramEval { term: String },
    /// Normal form of a string diagram, optionally compared with another.
    DiagramNormalize { term: String, other: Option<String> },
    /// Render a string diagram as SVG.
    Render {
        term: String,
        /// SVG file to write
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Limit { .. } => "limit",
            Command::Colimit { .. } => "colimit",
            Command::End { .. } => "end",
            Command::Coend { .. } => "coend",
            Command::KanLeft { .. } => "kan-left",
            Command::KanRight { .. } => "kan-right",
            Command::AdjointOf { .. } => "adjoint-of",
            Command::Snake { .. } => "snake",
            Command::YonedaCheck { .. } => "yoneda-check",
            Command::Density { .. } => "density",
            Command::Codensity { .. } => "codensity",
            Command::WeightedLimit { .. } => "weighted-limit",
            Command::DiagramEval { .. } => "diagram-eval",
            Command::DiagramNormalize { .. } => "diagram-normalize",
            Command::Render { .. } => "render",
        }
    }

    fn args(&self) -> Vec<String> {
        let s = |x: &String| x.clone();
        match self {
            Command::Validate { paths } => paths.iter().map(|p| p.display().to_string()).collect(),
            Command::Limit { diagram } | Command::Colimit { diagram } => vec![s(diagram)],
            Command::End { bifunctor } | Command::Coend { bifunctor } => vec![s(bifunctor)],
            Command::KanLeft { k, f } | Command::KanRight { k, f } => vec![s(k), s(f)],
            Command::AdjointOf { g, side } => vec![s(g), format!("{side:?}").to_lowercase()],
            Command::Snake { f, g, eta, eps } => vec![s(f), s(g), s(eta), s(eps)],
            Command::YonedaCheck { category } => vec![s(category)],
            Command::Density { k } | Command::Codensity { k } => vec![s(k)],
            Command::WeightedLimit { w, f, colimit } => {
                let mut v = vec![s(w), s(f)];
                if *colimit {
                    v.push("--colimit".into());
                }
                v
            }
            Command::DiagramEval { term } => vec![s(term)],
            Command::DiagramNormalize { term, other } => std::iter::once(term).chain(other).cloned().collect(),
            Command::Render { term, output } => vec![s(term), output.display().to_string()],
        }
    }
}

/// What a run produced: the exit code and the text written to stdout.
#[derive(Debug, Clone)]
pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn workspace_files(cli: &Cli, extra: &[PathBuf], cwd: &Path) -> Result<Vec<PathBuf>, CommandError> {
    let mut files: Vec<PathBuf> = cli.files.iter().chain(extra).cloned().collect();
    if files.is_empty() {
        let entries = std::fs::read_dir(cwd).map_err(|e| CommandError::Failed(format!("{}: {e}", cwd.display())))?;
        files = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "cat"))
            .collect();
        files.sort();
    }
    Ok(files)
}

fn dispatch(cli: &Cli, cwd: &Path) -> Result<Outcome, CommandError> {
    let settings = Settings {
        guard: cli.guard.map(Guard::with_budget).unwrap_or_default(),
        seed: cli.seed,
    };
    let extra: &[PathBuf] = match &cli.command {
        Command::Validate { paths } => paths,
        _ => &[],
    };
    let files = workspace_files(cli, extra, cwd)?;
    let ws = Workspace::load_files_in(cwd, &files).map_err(CommandError::Load)?;
    let s = &settings;
    match &cli.command {
        Command::Validate { .. } => commands::validate(&ws),
        Command::Limit { diagram } => commands::limit_cmd(&ws, diagram, Side::Limit, s),
        Command::Colimit { diagram } => commands::limit_cmd(&ws, diagram, Side::Colimit, s),
        Command::End { bifunctor } => commands::end_cmd(&ws, bifunctor, Side::Limit, s),
        Command::Coend { bifunctor } => commands::end_cmd(&ws, bifunctor, Side::Colimit, s),
        Command::KanLeft { k, f } => commands::kan_cmd(&ws, k, f, KanSide::Left, s),
        Command::KanRight { k, f } => commands::kan_cmd(&ws, k, f, KanSide::Right, s),
        Command::AdjointOf { g, side } => {
            let side = match side {
                AdjointSide::Left => AdjSide::Left,
                AdjointSide::Right => AdjSide::Right,
            };
            commands::adjoint_cmd(&ws, g, side)
        }
        Command::Snake { f, g, eta, eps } => commands::snake_cmd(&ws, f, g, eta, eps),
        Command::YonedaCheck { category } => commands::yoneda_cmd(&ws, category, s),
        Command::Density { k } => commands::density_cmd(&ws, k, s),
        Command::Codensity { k } => commands::codensity_cmd(&ws, k, s),
        Command::WeightedLimit { w, f, colimit } => {
            let side = if *colimit { Side::Colimit } else { Side::Limit };
            commands::weighted_cmd(&ws, w, f, side, s)
        }
        Command::DiagramEval { term } => commands::diagram_eval_cmd(&ws, term),
        Command::DiagramNormalize { term, other } => commands::diagram_normalize_cmd(&ws, term, other.as_deref()),
        Command::Render { term, output } => {
            let out = if output.is_absolute() {
                output.clone()
            } else {
                cwd.join(output)
            };
            commands::render_cmd(&ws, term, &out)
        }
    }
}

/// Runs a parsed command line with `cwd` as the working directory.
pub fn run(cli: &Cli, cwd: &Path) -> Run {
    let outcome = dispatch(cli, cwd);
    let (code, status) = match &outcome {
        Ok(o) => (o.status.exit_code(), o.status.word()),
        Err(e) => (e.exit_code(), if e.exit_code() == 1 { "violation" } else { "error" }),
    };
    if cli.json {
        let (result, report, error) = match &outcome {
            Ok(o) => (o.result.clone(), o.report.as_ref().map(|r| json!(r)), Value::Null),
            Err(CommandError::Load(e)) => (Value::Null, e.report().map(|r| json!(r)), json!(e.to_string())),
            Err(e) => (Value::Null, None, json!(e.to_string())),
        };
        let doc = json!({
            "schema": SCHEMA,
            "command": cli.command.name(),
            "args": cli.command.args(),
            "seed": cli.seed,
            "guard": cli.guard.unwrap_or(Guard::default().max_object_maps),
            "status": status,
            "exit_code": code,
            "result": result,
            "report": report.unwrap_or(Value::Null),
            "error": error,
        });
        let text = serde_json::to_string_pretty(&doc).expect("json values serialize");
        return Run {
            code,
            stdout: text + "\n",
            stderr: String::new(),
        };
    }
    match outcome {
        Ok(o) => {
            let mut out = String::new();
            for l in &o.lines {
                out.push_str(l);
                out.push('\n');
            }
            if let Some(r) = &o.report {
                out.push_str(&format!("report: {r}\n"));
            }
            out.push_str(&format!("status: {}\n", o.status.word()));
            Run {
                code,
                stdout: out,
                stderr: String::new(),
            }
        }
        Err(e) => {
            let mut err = format!("{e}\n");
            if let CommandError::Load(le) = &e {
                if let Some(r) = le.report() {
                    err.push_str(&format!("report: {r}\n"));
                }
            }
            Run {
                code,
                stdout: String::new(),
                stderr: err,
            }
        }
    }
}

/// Parses `args` (including the program name) and runs them. Usage errors
/// exit with code 2.
pub fn run_args<I, T>(args: I, cwd: &Path) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    match Cli::try_parse_from(&args) {
        Ok(cli) => run(&cli, cwd),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 2 && args.iter().any(|a| a == "--json") {
                let doc = json!({
                    "schema": SCHEMA,
                    "command": null,
                    "args": args.iter().skip(1).map(|a| a.to_string_lossy()).collect::<Vec<_>>(),
                    "status": "error",
                    "exit_code": code,
                    "result": null,
                    "report": null,
                    "error": e.kind().to_string(),
                });
                let text = serde_json::to_string_pretty(&doc).expect("json values serialize");
                return Run {
                    code,
                    stdout: text + "\n",
                    stderr: String::new(),
                };
            }
            if code == 0 {
                Run {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Run {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}
