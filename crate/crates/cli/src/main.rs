//! `logrank`: command-line front end for the logrank-core toolkit.
//!
//! Exit codes: 0 success, 1 I/O, 2 parse (input file or command line),
//! 3 precondition, 4 cap exceeded, 5 convergence or trials exhausted,
//! 6 verification failure, 7 internal invariant.

mod output;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use logrank_core::amplification::{amplify, AmplifyOptions};
use logrank_core::corpus::{default_corpus, extended_corpus, read_corpus, write_corpus, CorpusMatrix};
use logrank_core::discrepancy::{check_rank_disc_bound, disc_game, GameOptions, DEFAULT_MAX_ITERS, DEFAULT_TOL};
use logrank_core::monochromatic::{brute_force_max_mono, extract_mono};
use logrank_core::pipeline::{prove, ProveOptions};
use logrank_core::protocol::{
    balance, complexity, nw_build, run, verify, BruteForceFinder, GreedyFinder, MonoFinder, PipelineFinder,
    ProtocolTree,
};
use logrank_core::rigidity::{
    conjecture_check, verify_rigidity_decomposition, zero_rectangle_with, RigidityDecomposition, SearchMode, Target,
    EXACT_NODE_CAP,
};
use logrank_core::{EntryDistribution, Error, IndexSet, IntMatrix, Rectangle, Result, SignMatrix};
use serde_json::{json, Value};

use output::{emit, render, to_value, Format};

/// Largest side accepted for sign-matrix inputs; override with this variable.
const MAX_DIM_VAR: &str = "LOGRANK_MAX_DIM";
const DEFAULT_MAX_DIM: usize = 64;
/// Node budget of the exact zero-rectangle search.
const RIGIDITY_NODES_VAR: &str = "LOGRANK_RIGIDITY_NODES";

#[derive(Parser)]
#[command(name = "logrank", version, about = "Rank, discrepancy and protocol experiments on sign matrices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output file (a directory for `corpus` and for `prove` on a corpus).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Clone)]
struct GameArgs {
    /// Duality-gap tolerance of the game solvers.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    max_iters: usize,
}

impl GameArgs {
    fn options(&self) -> GameOptions {
        GameOptions { tol: self.tol, max_iters: self.max_iters }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact rank, before and after removing duplicate rows and columns.
    Rank {
        #[arg(long)]
        input: PathBuf,
        /// Read an integer matrix instead of a sign matrix.
        #[arg(long)]
        int: bool,
    },
    /// Certified bounds on disc(f) and the check disc(f) ≥ 1/(8√r).
    Disc {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        game: GameArgs,
    },
    /// A large rectangle with little minority mass under the uniform distribution.
    Amplify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        max_trials: usize,
        #[command(flatten)]
        game: GameArgs,
    },
    /// Monochromatic rectangles.
    Mono {
        #[command(subcommand)]
        cmd: MonoCmd,
    },
    /// Protocol trees.
    Protocol {
        #[command(subcommand)]
        cmd: ProtocolCmd,
    },
    /// Zero rectangles and rigidity decompositions of integer matrices.
    Rigidity {
        #[command(subcommand)]
        cmd: RigidityCmd,
    },
    /// The full pipeline on one matrix, or on every sign matrix of a corpus
    /// directory.
    Prove {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fixed ε instead of 1/(2r) per sub-problem.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        max_trials: usize,
        #[command(flatten)]
        game: GameArgs,
        /// Also write the balanced protocol tree here (single matrix only).
        #[arg(long)]
        tree_out: Option<PathBuf>,
    },
    /// Writes the test corpus and its manifest into `--out`.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include the 16×16 inner product and the rigidity examples.
        #[arg(long)]
        extended: bool,
    },
    /// Aggregates per-matrix JSON outputs of a directory into one table.
    Report {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum MonoCmd {
    /// Monochromatic sub-rectangle of a nearly monochromatic rectangle.
    Extract {
        #[arg(long)]
        input: PathBuf,
        /// `rows;cols` as comma-separated indices, or `all`.
        #[arg(long, default_value = "all")]
        rect: String,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Maximum-area monochromatic rectangle by exhaustive search.
    Brute {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FinderKind {
    Pipeline,
    Brute,
    Greedy,
}

#[derive(Args, Clone)]
struct BuildArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "pipeline")]
    finder: FinderKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Subcommand)]
enum ProtocolCmd {
    /// Builds a protocol tree for the deduplicated matrix.
    Build(BuildArgs),
    /// Balances a tree read from JSON.
    Balance {
        #[arg(long)]
        tree: PathBuf,
    },
    /// Runs a tree on one input.
    Run {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
    },
    /// Checks a tree against a matrix.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        tree: PathBuf,
    },
    /// Builds, balances and reports costs.
    Report(BuildArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    MaxMinSide,
    MaxArea,
}

#[derive(Subcommand)]
enum RigidityCmd {
    /// Largest all-zero rectangle.
    ZeroRect {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "max-min-side")]
        target: TargetArg,
    },
    /// Zero-rectangle size against n·exp(−√(εr)).
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Checks M = L + S and the rank argument on S's zero rectangle.
    VerifyDecomp {
        /// Defaults to L + S.
        #[arg(long)]
        m: Option<PathBuf>,
        #[arg(long)]
        l: PathBuf,
        #[arg(long)]
        s: PathBuf,
        #[arg(long)]
        r: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn max_dim() -> usize {
    std::env::var(MAX_DIM_VAR).ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_MAX_DIM)
}

/// Text format, or the JSON object `{rows, cols, entries}`.
fn load_sign(path: &Path) -> Result<SignMatrix> {
    let text = read(path)?;
    let f = if text.trim_start().starts_with('{') { serde_json::from_str(&text)? } else { SignMatrix::parse(&text)? };
    let cap = max_dim();
    if f.n_rows() > cap || f.n_cols() > cap {
        return Err(Error::Cap(format!(
            "{}×{} exceeds the {cap}-per-side input cap (set {MAX_DIM_VAR} to raise it)",
            f.n_rows(),
            f.n_cols()
        )));
    }
    Ok(f)
}

fn load_int(path: &Path) -> Result<IntMatrix> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(&text)?)
    } else {
        IntMatrix::parse(&text)
    }
}

/// Accepts a bare tree or any document with a `tree` field, such as `protocol build` output.
fn load_tree(path: &Path) -> Result<ProtocolTree> {
    let mut v: Value = serde_json::from_str(&read(path)?)?;
    if let Some(t) = v.get_mut("tree") {
        v = t.take();
    }
    Ok(serde_json::from_value(v)?)
}

fn parse_indices(s: &str, n: usize) -> Result<IndexSet> {
    let s = s.trim();
    if s == "all" || s == "*" {
        return Ok(IndexSet::range(n));
    }
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse { line: 0, msg: format!("bad index {t:?} in rectangle") })
        })
        .collect::<Result<Vec<_>>>()
        .map(IndexSet::new)
}

fn parse_rect(spec: &str, f: &SignMatrix) -> Result<Rectangle> {
    if spec.trim() == "all" {
        return Ok(f.full_rect());
    }
    let (rows, cols) = spec
        .split_once(';')
        .ok_or_else(|| Error::Parse { line: 0, msg: "rectangle must look like `rows;cols`".into() })?;
    Ok(Rectangle::new(parse_indices(rows, f.n_rows())?, parse_indices(cols, f.n_cols())?))
}

fn rigidity_nodes() -> u64 {
    std::env::var(RIGIDITY_NODES_VAR).ok().and_then(|s| s.parse().ok()).unwrap_or(EXACT_NODE_CAP)
}

/// Output value and whether the command's check passed.
struct Outcome {
    value: Value,
    ok: bool,
}

impl From<Value> for Outcome {
    fn from(value: Value) -> Self {
        Outcome { value, ok: true }
    }
}

fn build_tree(a: &BuildArgs) -> Result<(SignMatrix, logrank_core::protocol::NwBuild, Value)> {
    let f = load_sign(&a.input)?.dedupe().matrix;
    let (built, calls) = match a.finder {
        FinderKind::Pipeline => {
            let finder = PipelineFinder::new(a.seed, a.eps, AmplifyOptions::default());
            let b = nw_build(&f, &finder)?;
            (b, to_value(&finder.records())?)
        }
        FinderKind::Brute => (nw_build(&f, &BruteForceFinder as &dyn MonoFinder)?, Value::Null),
        FinderKind::Greedy => (nw_build(&f, &GreedyFinder)?, Value::Null),
    };
    Ok((f, built, calls))
}

fn run_cmd(cli: &Cli) -> Result<Outcome> {
    match &cli.cmd {
        Cmd::Rank { input, int } => {
            if *int {
                let m = load_int(input)?;
                Ok(json!({"rows": m.n_rows(), "cols": m.n_cols(), "rank": m.rank(), "nonzeros": m.nonzeros()}).into())
            } else {
                let f = load_sign(input)?;
                let d = f.dedupe();
                Ok(json!({
                    "rows": f.n_rows(), "cols": f.n_cols(), "rank": f.rank(),
                    "dedup_rows": d.matrix.n_rows(), "dedup_cols": d.matrix.n_cols(),
                })
                .into())
            }
        }
        Cmd::Disc { input, game } => {
            let f = load_sign(input)?;
            let cert = disc_game(&f, game.options())?;
            let check = check_rank_disc_bound(&f, game.options())?;
            let mut v = to_value(&check)?;
            v["gap"] = json!(cert.gap());
            v["iterations"] = json!(cert.iterations);
            v["lower_exact"] = json!(cert.lower_exact);
            v["upper_exact"] = json!(cert.upper_exact);
            v["dual"] = to_value(&cert.dual)?;
            let ok = check.holds;
            Ok(Outcome { value: output::round_floats(v), ok })
        }
        Cmd::Amplify { input, eps, seed, max_trials, game } => {
            let f = load_sign(input)?;
            let mu = EntryDistribution::uniform(f.n_rows(), f.n_cols());
            let opts = AmplifyOptions { game: game.options(), max_trials: *max_trials, delta_lb: None };
            Ok(to_value(&amplify(&f, &mu, *eps, *seed, &opts)?)?.into())
        }
        Cmd::Mono { cmd } => match cmd {
            MonoCmd::Extract { input, rect, r } => {
                let f = load_sign(input)?;
                let rect = parse_rect(rect, &f)?;
                let e = extract_mono(&f, &rect, *r)?;
                let mut v = to_value(&e)?;
                v["size_ratio"] = json!(e.size_ratio());
                Ok(output::round_floats(v).into())
            }
            MonoCmd::Brute { input } => {
                let f = load_sign(input)?;
                let (rect, color) = brute_force_max_mono(&f)?;
                Ok(json!({"area": rect.area(), "rect": rect, "color": color}).into())
            }
        },
        Cmd::Protocol { cmd } => match cmd {
            ProtocolCmd::Build(a) => {
                let (_, built, calls) = build_tree(a)?;
                Ok(json!({"tree": built.tree, "trace": to_value(&built.trace)?, "finder_calls": calls}).into())
            }
            ProtocolCmd::Balance { tree } => Ok(to_value(&balance(&load_tree(tree)?))?.into()),
            ProtocolCmd::Run { tree, x, y } => {
                let t = run(&load_tree(tree)?, *x, *y)?;
                Ok(json!({"value": t.value, "length": t.len(), "bits": t.bits}).into())
            }
            ProtocolCmd::Verify { input, tree } => {
                let rep = verify(&load_sign(input)?, &load_tree(tree)?);
                let ok = rep.pass;
                Ok(Outcome { value: to_value(&rep)?, ok })
            }
            ProtocolCmd::Report(a) => {
                let (f, built, _) = build_tree(a)?;
                let b = balance(&built.tree);
                let rep = complexity(&f, &built.tree, &built.trace, &b);
                let ok = verify(&f, &b).pass;
                let mut v = to_value(&rep)?;
                v["pass"] = json!(ok);
                Ok(Outcome { value: v, ok })
            }
        },
        Cmd::Rigidity { cmd } => match cmd {
            RigidityCmd::ZeroRect { input, mode, target } => {
                let m = load_int(input)?;
                let mode = match mode {
                    ModeArg::Exact => SearchMode::Exact,
                    ModeArg::Heuristic => SearchMode::Heuristic,
                };
                let target = match target {
                    TargetArg::MaxMinSide => Target::MaxMinSide,
                    TargetArg::MaxArea => Target::MaxArea,
                };
                Ok(to_value(&zero_rectangle_with(&m, mode, target, None, rigidity_nodes())?)?.into())
            }
            RigidityCmd::Check { input, rank } => Ok(to_value(&conjecture_check(&load_int(input)?, *rank)?)?.into()),
            RigidityCmd::VerifyDecomp { m, l, s, r } => {
                let (l, s) = (load_int(l)?, load_int(s)?);
                let dec = match m {
                    Some(m) => RigidityDecomposition::new(load_int(m)?, l, s)?,
                    None => RigidityDecomposition::from_parts(l, s)?,
                };
                Ok(to_value(&verify_rigidity_decomposition(&dec, *r)?)?.into())
            }
        },
        Cmd::Prove { input, seed, eps, max_trials, game, tree_out } => {
            let opts = ProveOptions { seed: *seed, eps: *eps, game: game.options(), max_trials: *max_trials };
            if input.is_dir() {
                return prove_corpus(input, cli.out.as_deref(), &opts);
            }
            let f = load_sign(input)?;
            let out = prove(&f, &opts);
            if let (Some(p), Some(t)) = (tree_out, &out.balanced) {
                fs::write(p, serde_json::to_string_pretty(t)? + "\n")?;
            }
            let value = to_value(&out.report)?;
            if let Some(e) = out.error {
                // still emit the partial report
                eprintln!("logrank: stage {} failed", out.report.failed_stage.as_deref().unwrap_or("?"));
                emit(&render(&value, cli.format)?, cli.out.as_deref())?;
                return Err(e);
            }
            Ok(Outcome { value, ok: out.report.pass })
        }
        Cmd::Corpus { seed, extended } => {
            let dir = cli.out.as_deref().ok_or_else(|| Error::Precondition("corpus needs --out DIR".into()))?;
            let entries = if *extended { extended_corpus(*seed)? } else { default_corpus(*seed)? };
            let man = write_corpus(dir, &entries)?;
            Ok(Outcome { value: json!({"written": man.len(), "dir": dir}), ok: true })
        }
        Cmd::Report { input } => {
            let rows = report::aggregate(input)?;
            let text = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&output::round_floats(Value::Array(
                        rows.into_iter().map(Value::Object).collect(),
                    )))? + "\n"
                }
                Format::Csv => {
                    let cols: Vec<String> = report::COLUMNS.iter().map(|s| s.to_string()).collect();
                    output::csv_table(&cols, &rows)?
                }
            };
            emit(&text, cli.out.as_deref())?;
            Ok(Outcome { value: Value::Null, ok: true })
        }
    }
}

/// Runs the pipeline on every sign matrix listed in a corpus manifest,
/// writing `<out>/<name>.json` per matrix.
fn prove_corpus(dir: &Path, out: Option<&Path>, opts: &ProveOptions) -> Result<Outcome> {
    let out = out.ok_or_else(|| Error::Precondition("prove on a corpus needs --out DIR".into()))?;
    fs::create_dir_all(out)?;
    let mut summary = Vec::new();
    let mut all = true;
    for (entry, m) in read_corpus(dir)? {
        let CorpusMatrix::Sign(f) = m else { continue };
        let o = prove(&f, opts);
        let v = to_value(&o.report)?;
        fs::write(out.join(format!("{}.json", entry.name)), serde_json::to_string_pretty(&v)? + "\n")?;
        all &= o.report.pass;
        summary.push(json!({"name": entry.name, "pass": o.report.pass, "exit": o.exit_code()}));
    }
    Ok(Outcome { value: json!({"matrices": summary.len(), "all_pass": all, "results": summary}), ok: all })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_cmd(&cli) {
        Ok(o) => {
            if !o.value.is_null() {
                let printed = render(&o.value, cli.format).and_then(|t| {
                    let target = if matches!(cli.cmd, Cmd::Corpus { .. } | Cmd::Prove { .. })
                        && cli.out.as_deref().is_some_and(Path::is_dir)
                    {
                        None
                    } else {
                        cli.out.as_deref()
                    };
                    emit(&t, target)
                });
                if let Err(e) = printed {
                    eprintln!("logrank: {e}");
                    return ExitCode::from(e.exit_code() as u8);
                }
            }
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(Error::Verification(String::new()).exit_code() as u8)
            }
        }
        Err(e) => {
            eprintln!("logrank: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
