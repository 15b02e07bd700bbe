//! `cherrylab` — command-line front end for the cherrylab toolkit.
//!
//! Every subcommand prints a single run report (JSON by default) to stdout
//! and communicates its verdict through the exit code:
//!
//! * `0` — success / claim certified
//! * `1` — claim refuted / embedding failed
//! * `2` — inconclusive (budget ran out before a definitive answer)
//! * `3` — usage or I/O error
//!
//! Generator subcommands stream their artifact to stdout when `--out` is
//! absent, and write the file plus a report when it is present.

mod bench;
mod report;
mod settings;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use cherrylab::coloring::{
    random_bounded_coloring, BoundMode, CopyMode, CopyVerdict, HostColoring,
};
use cherrylab::constructions::{
    build_tree, diam2_coloring, lex_block_coloring, partition_coloring, polarity_graph,
    rook_union, TreeKind,
};
use cherrylab::embed::search::{
    brute_force_embed, radius2_spanning_tree_search, rainbow_block_check, BlockCheckOutcome,
    Radius2Outcome, SearchOutcome,
};
use cherrylab::embed::{
    embed, find_clique_p, Certificate, EmbedConfig, EmbedError, EmbedOutcome, EventPick,
};
use cherrylab::graph::{
    cherry_stats, count_cherries, random_bounded_degree_tree, PatternGraph,
};
use cherrylab::lll::{
    lll_budget, lll_feasibility_check, threshold, ThresholdKind, ThresholdQuery,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::{BigInt, BigRational};
use serde_json::{json, Value};
use thiserror::Error;

use report::{Format, RunReport};
use settings::Resolved;

/// Errors that abort a run before it can produce a verdict: bad arguments,
/// unreadable files, malformed artifacts. All map to exit code 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

// ---------------------------------------------------------------------------
// Argument surface
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "cherrylab",
    version,
    about = "Thresholds, feasibility budgets, extremal constructions, and a \
             randomized embedder for colored copies in edge-colored complete graphs"
)]
struct Cli {
    #[command(flatten)]
    globals: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct GlobalArgs {
    /// Master seed; every randomized phase derives its own stream from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Copy mode for commands that need one.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Resampling budget per restart of the embedder.
    #[arg(long, global = true)]
    max_resamples: Option<u64>,
    /// Independent restarts of the embedder.
    #[arg(long, global = true)]
    max_restarts: Option<u32>,
    /// Worker-thread cap for internally parallel phases.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report rendering.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Artifact output path (generated files, certificates, CSV).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Optional key=value file mirroring the global flags; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Proper,
    Rainbow,
}

impl From<ModeArg> for CopyMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Proper => CopyMode::Proper,
            ModeArg::Rainbow => CopyMode::Rainbow,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundArg {
    Local,
    Global,
}

impl From<BoundArg> for BoundMode {
    fn from(b: BoundArg) -> Self {
        match b {
            BoundArg::Local => BoundMode::Local,
            BoundArg::Global => BoundMode::Global,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeKindArg {
    /// m = t^3: center of degree t^2, children of degree t + 1.
    Cube,
    /// m = s^2: center of degree s, children of degree s.
    Square,
}

impl From<TreeKindArg> for TreeKind {
    fn from(k: TreeKindArg) -> Self {
        match k {
            TreeKindArg::Cube => TreeKind::Cube,
            TreeKindArg::Square => TreeKind::Square,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    ShearerProper,
    ShearerRainbow,
    BkpLocal,
    BkpGlobal,
}

impl From<KindArg> for ThresholdKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::ShearerProper => ThresholdKind::ShearerProper,
            KindArg::ShearerRainbow => ThresholdKind::ShearerRainbow,
            KindArg::BkpLocal => ThresholdKind::BkpLocal,
            KindArg::BkpGlobal => ThresholdKind::BkpGlobal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EventPickArg {
    First,
    Random,
}

impl From<EventPickArg> for EventPick {
    fn from(p: EventPickArg) -> Self {
        match p {
            EventPickArg::First => EventPick::First,
            EventPickArg::Random => EventPick::Random,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    EmbedScaling,
    CliqueScaling,
    BudgetEval,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a pattern graph artifact.
    GenGraph {
        #[command(subcommand)]
        family: GraphFamily,
    },
    /// Generate a host edge-coloring artifact.
    GenColoring {
        #[command(subcommand)]
        family: ColoringFamily,
    },
    /// Measure the boundedness levels of a coloring file.
    CheckBounds {
        #[arg(long)]
        coloring: PathBuf,
    },
    /// Cherry and degree statistics of a graph file.
    Cherries {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Largest admissible boundedness level for a host size.
    Threshold {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: u64,
        /// Cherry count (shearer-* kinds).
        #[arg(long)]
        r: Option<u64>,
        /// Maximum pattern degree (bkp-* kinds).
        #[arg(long)]
        delta: Option<u64>,
    },
    /// Exact feasibility budget at a constant C.
    LllCheck {
        /// Threshold constant C (> 6).
        #[arg(long, alias = "C")]
        c: u64,
        /// Host size; together with --ell enables the single-event check.
        #[arg(long)]
        n: Option<usize>,
        /// Number of deterministically placed vertices.
        #[arg(long)]
        ell: Option<usize>,
    },
    /// Run the randomized well-behaved-clique extraction on a coloring.
    CliqueP {
        #[arg(long)]
        coloring: PathBuf,
        /// Cherry count of the pattern that will be embedded.
        #[arg(long)]
        r: u64,
        /// Claimed boundedness level of the coloring.
        #[arg(long)]
        k: u64,
        /// Sampling retries before giving up.
        #[arg(long, default_value_t = 100)]
        retry_cap: u32,
    },
    /// Embed a pattern into a colored host by resampling random bijections.
    Embed {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        /// How to pick among violated events.
        #[arg(long, value_enum, default_value_t = EventPickArg::Random)]
        event_pick: EventPickArg,
        /// Sampling retries inside the clique extraction.
        #[arg(long, default_value_t = 100)]
        clique_retry_cap: u32,
    },
    /// Exhaustive backtracking embed oracle (certifies absence).
    BruteEmbed {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        /// Search-node budget before reporting inconclusive.
        #[arg(long, default_value_t = 100_000_000)]
        node_budget: u64,
    },
    /// Re-verify a saved embedding certificate from files alone.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Exhaustive search for a properly colored spanning tree of radius
    /// at most two.
    Radius2Search {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long, default_value_t = 100_000_000)]
        node_budget: u64,
    },
    /// Certify that no rainbow copy of a pattern puts more than t image
    /// vertices inside a block of host vertices.
    BlockCheck {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        /// Block vertices, comma separated (e.g. --x 1,2,3,4).
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<u32>,
        /// Largest allowed number of image vertices inside the block.
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 100_000_000)]
        node_budget: u64,
    },
    /// Run a named benchmark suite, emitting CSV.
    Bench {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        /// Wall-clock budget; exceeding it truncates the case list.
        #[arg(long)]
        budget_ms: Option<u64>,
    },
}

#[derive(Subcommand)]
enum GraphFamily {
    /// Radius-two tree from the size parameter m.
    Tree {
        #[arg(long, value_enum)]
        kind: TreeKindArg,
        #[arg(long)]
        m: u64,
    },
    /// Polarity graph of the projective plane over GF(q).
    Polarity {
        #[arg(long)]
        q: usize,
    },
    /// Disjoint union of rook graphs on m x m boards.
    Rook {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        copies: usize,
    },
    /// Seeded random tree with a maximum-degree cap.
    RandomTree {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
}

#[derive(Subcommand)]
enum ColoringFamily {
    /// Three near-equal parts; within-part colors by part, cross colors by
    /// part pair and vertex.
    Partition {
        #[arg(long)]
        n: usize,
    },
    /// Partition coloring tuned for diameter-two patterns with ell
    /// deterministically placed vertices.
    Diam2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
    },
    /// Lexicographic coloring on a block of 4*ell vertices, fresh colors
    /// elsewhere.
    LexBlock {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
    },
    /// Seeded random coloring bounded at level k.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = BoundArg::Local)]
        bound: BoundArg,
    },
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CHERRYLAB_LOG")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            };
        }
    };

    let resolved = match settings::resolve(&cli.globals) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };

    if let Some(threads) = resolved.threads {
        if let Err(e) =
            rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()
        {
            log::warn!("thread pool already initialized: {e}");
        }
    }

    match dispatch(cli.command, &resolved) {
        Ok((Some(report), code)) => {
            println!("{}", report.render(resolved.format).trim_end());
            ExitCode::from(code)
        }
        Ok((None, code)) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

/// What a command hands back: an optional report (generators that stream
/// their artifact to stdout suppress it) plus the exit code.
type CommandResult = Result<(Option<RunReport>, u8), CliError>;

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

fn load_graph(path: &Path) -> Result<PatternGraph, CliError> {
    PatternGraph::from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_coloring(path: &Path) -> Result<HostColoring, CliError> {
    HostColoring::from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

/// Writes a generated artifact: to `--out` (returning a printable report)
/// or, with no `--out`, straight to stdout (suppressing the report).
fn emit_artifact(text: &str, settings: &Resolved, mut report: RunReport) -> CommandResult {
    match &settings.out {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            report.artifact(path_str(path));
            Ok((Some(report), 0))
        }
        None => {
            print!("{text}");
            Ok((None, 0))
        }
    }
}

fn graph_outcome(g: &PatternGraph) -> Value {
    json!({
        "verdict": "ok",
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "max_degree": g.max_degree(),
        "cherries": count_cherries(g),
    })
}

fn coloring_outcome(c: &HostColoring) -> Value {
    let b = c.boundedness_report();
    json!({
        "verdict": "ok",
        "n": c.n(),
        "k_local": b.k_local,
        "k_global": b.k_global,
        "num_colors": b.num_colors,
    })
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

fn dispatch(command: Command, settings: &Resolved) -> CommandResult {
    let lift = |r: Result<(RunReport, u8), CliError>| r.map(|(rep, code)| (Some(rep), code));
    match command {
        Command::GenGraph { family } => gen_graph(family, settings),
        Command::GenColoring { family } => gen_coloring(family, settings),
        Command::CheckBounds { coloring } => lift(check_bounds(&coloring, settings)),
        Command::Cherries { graph } => lift(cherries(&graph, settings)),
        Command::Threshold { kind, n, r, delta } => lift(threshold_cmd(kind, n, r, delta)),
        Command::LllCheck { c, n, ell } => lift(lll_check(c, n, ell, settings)),
        Command::CliqueP { coloring, r, k, retry_cap } => {
            lift(clique_p(&coloring, r, k, retry_cap, settings))
        }
        Command::Embed { graph, coloring, event_pick, clique_retry_cap } => {
            lift(embed_cmd(&graph, &coloring, event_pick, clique_retry_cap, settings))
        }
        Command::BruteEmbed { graph, coloring, node_budget } => {
            lift(brute_embed(&graph, &coloring, node_budget, settings))
        }
        Command::Verify { certificate } => lift(verify(&certificate)),
        Command::Radius2Search { coloring, node_budget } => {
            lift(radius2(&coloring, node_budget))
        }
        Command::BlockCheck { coloring, graph, x, t, node_budget } => {
            lift(block_check(&coloring, &graph, &x, t, node_budget))
        }
        Command::Bench { suite, budget_ms } => bench_cmd(suite, budget_ms, settings),
    }
}

fn gen_graph(family: GraphFamily, settings: &Resolved) -> CommandResult {
    let start = Instant::now();
    let mut report = RunReport::new("gen-graph");
    let g = match family {
        GraphFamily::Tree { kind, m } => {
            report.input("family", "tree");
            report.input("kind", format!("{:?}", TreeKind::from(kind)).to_lowercase());
            report.input("m", m);
            build_tree(kind.into(), m).map_err(|e| CliError::Usage(e.to_string()))?
        }
        GraphFamily::Polarity { q } => {
            report.input("family", "polarity");
            report.input("q", q);
            polarity_graph(q).map_err(|e| CliError::Usage(e.to_string()))?
        }
        GraphFamily::Rook { m, copies } => {
            report.input("family", "rook");
            report.input("m", m);
            report.input("copies", copies);
            rook_union(m, copies).map_err(|e| CliError::Usage(e.to_string()))?
        }
        GraphFamily::RandomTree { n, max_degree } => {
            report.input("family", "random-tree");
            report.input("n", n);
            report.input("max_degree", max_degree);
            report.seed = Some(settings.seed);
            random_bounded_degree_tree(n, max_degree, settings.seed)
                .map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    report.outcome = graph_outcome(&g);
    report.timing("total", start.elapsed());
    emit_artifact(&g.to_text(), settings, report)
}

fn gen_coloring(family: ColoringFamily, settings: &Resolved) -> CommandResult {
    let start = Instant::now();
    let mut report = RunReport::new("gen-coloring");
    let c = match family {
        ColoringFamily::Partition { n } => {
            report.input("family", "partition");
            report.input("n", n);
            partition_coloring(n).map_err(|e| CliError::Usage(e.to_string()))?
        }
        ColoringFamily::Diam2 { n, ell } => {
            report.input("family", "diam2");
            report.input("n", n);
            report.input("ell", ell);
            diam2_coloring(n, ell).map_err(|e| CliError::Usage(e.to_string()))?
        }
        ColoringFamily::LexBlock { n, ell } => {
            report.input("family", "lex-block");
            report.input("n", n);
            report.input("ell", ell);
            lex_block_coloring(n, ell).map_err(|e| CliError::Usage(e.to_string()))?
        }
        ColoringFamily::Random { n, k, bound } => {
            report.input("family", "random");
            report.input("n", n);
            report.input("k", k);
            report.input("bound", BoundMode::from(bound).to_string());
            report.seed = Some(settings.seed);
            random_bounded_coloring(n, k, bound.into(), settings.seed)
                .map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    report.outcome = coloring_outcome(&c);
    report.timing("total", start.elapsed());
    emit_artifact(&c.to_text(), settings, report)
}

fn check_bounds(path: &Path, _settings: &Resolved) -> Result<(RunReport, u8), CliError> {
    let start = Instant::now();
    let c = load_coloring(path)?;
    let mut report = RunReport::new("check-bounds");
    report.input("coloring", path_str(path));
    report.outcome = coloring_outcome(&c);
    report.timing("total", start.elapsed());
    Ok((report, 0))
}

fn cherries(path: &Path, _settings: &Resolved) -> Result<(RunReport, u8), CliError> {
    let start = Instant::now();
    let g = load_graph(path)?;
    let stats = cherry_stats(&g);
    let mut report = RunReport::new("cherries");
    report.input("graph", path_str(path));
    report.outcome = json!({
        "verdict": "ok",
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "max_degree": g.max_degree(),
        "cherries": stats.r,
        "max_middle_per_vertex": stats.per_vertex_middle.iter().max().copied().unwrap_or(0),
        "max_leaf_per_vertex": stats.per_vertex_leaf.iter().max().copied().unwrap_or(0),
    });
    report.timing("total", start.elapsed());
    Ok((report, 0))
}

fn threshold_cmd(
    kind: KindArg,
    n: u64,
    r: Option<u64>,
    delta: Option<u64>,
) -> Result<(RunReport, u8), CliError> {
    let start = Instant::now();
    let kind: ThresholdKind = kind.into();
    let query = ThresholdQuery { kind, n, r, delta };
    let result = threshold(&query).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut report = RunReport::new("threshold");
    report.input("kind", serde_json::to_value(kind).expect("kind serializes"));
    report.input("n", n);
    if let Some(r) = r {
        report.input("r", r);
    }
    if let Some(delta) = delta {
        report.input("delta", delta);
    }
    report.outcome = json!({
        "verdict": "ok",
        "kind": kind,
        "k": result.k,
        "vacuous": result.vacuous,
    });
    report.timing("total", start.elapsed());
    Ok((report, 0))
}

fn lll_check(
    c: u64,
    n: Option<usize>,
    ell: Option<usize>,
    settings: &Resolved,
) -> Result<(RunReport, u8), CliError> {
    let start = Instant::now();
    let mode = settings.mode;
    let budget = lll_budget(mode, c).map_err(|e| CliError::Usage(e.to_string()))?;
    let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));

    let mut report = RunReport::new("lll-check");
    report.input("mode", mode.to_string());
    report.input("c", c);

    let per_class: serde_json::Map<String, Value> = budget
        .per_class
        .iter()
        .map(|(class, value)| (class.to_string(), Value::String(value.to_string())))
        .collect();

    let feasible;
    let mut outcome = serde_json::Map::new();
    outcome.insert("mode".into(), json!(mode.to_string()));
    outcome.insert("c".into(), json!(c));
    outcome.insert("budget_total".into(), json!(budget.total.to_string()));
    outcome.insert("per_class".into(), Value::Object(per_class));
    match (n, ell) {
        (Some(n), Some(ell)) => {
            report.input("n", n);
            report.input("ell", ell);
            let verdict = lll_feasibility_check(n, ell, &budget);
            outcome.insert("single_event_ok".into(), json!(verdict.single_event_ok));
            outcome.insert("neighborhood_ok".into(), json!(verdict.neighborhood_ok));
            feasible = verdict.ok();
        }
        (None, None) => {
            feasible = budget.total <= quarter;
        }
        _ => {
            return Err(CliError::Usage(
                "--n and --ell must be given together".into(),
            ))
        }
    }
    outcome.insert("feasible".into(), json!(feasible));
    outcome.insert(
        "verdict".into(),
        json!(if feasible { "feasible" } else { "infeasible" }),
    );
    report.outcome = Value::Object(outcome);
    report.timing("total", start.elapsed());
    Ok((report, if feasible { 0 } else { 1 }))
}

fn clique_p(
    coloring: &Path,
    r: u64,
    k: u64,
    retry_cap: u32,
    settings: &Resolved,
) -> Result<(RunReport, u8), CliError> {
    let start = Instant::now();
    let c = load_coloring(coloring)?;
    let parse_elapsed = start.elapsed();

    let mut report = RunReport::new("clique-p");
    report.input("coloring", path_str(coloring));
    report.input("r", r);
    report.input("k", k);
    report.input("mode", settings.mode.to_string());
    report.input("retry_cap", retry_cap);
    report.seed = Some(settings.seed);
    report.timing("parse", parse_elapsed);

    let run_start = Instant::now();
    let result = find_clique_p(&c, r, k, settings.mode, settings.seed, retry_cap);
    report.timing("extract", run_start.elapsed());
    report.timing("total", start.elapsed());

    match result {
        Ok(res) => {
            report.outcome = json!({
                "verdict": "accepted",
                "p_size": res.p.len(),
                "q_size": res.q.len(),
                "attempts": res.attempts,
                "codegree_cap": res.codegree_cap,
                "p": res.p,
            });
            Ok((report, 0))
        }
        Err(
            err @ (EmbedError::CliqueRetriesExhausted { .. }
            | EmbedError::NotBounded { .. }
            | EmbedError::ThresholdViolated { .. }),
        ) => {
            report.outcome = json!({ "verdict": "rejected", "reason": err.to_string() });
            Ok((report, 1))
        }
        Err(other) => Err(CliError::Usage(other.to_string())),
    }
}

fn embed_cmd(
    graph: &Path,
    coloring: &Path,
    event_pick: EventPickArg,
    clique_retry_cap: u32,
    settings: &Resolved,
) -> Result<(RunReport, u8), CliError> {
    let start = Instant::now();
    let g = load_graph(graph)?;
    let c = load_coloring(coloring)?;
    let parse_elapsed = start.elapsed();

    let cfg = EmbedConfig {
        mode: settings.mode,
        seed: settings.seed,
        max_resamples: settings.max_resamples,
        max_restarts: settings.max_restarts,
        clique_retry_cap,
        event_pick: event_pick.into(),
    };

    let mut report = RunReport::new("embed");
    report.input("graph", path_str(graph));
    report.input("coloring", path_str(coloring));
    report.input("mode", settings.mode.to_string());
    report.input("max_resamples", settings.max_resamples);
    report.input("max_restarts", settings.max_restarts);
    report.seed = Some(settings.seed);
    report.timing("parse", parse_elapsed);

    let run_start = Instant::now();
    let outcome = match embed(&g, &c, &cfg) {
        Ok(o) => o,
        Err(e @ (EmbedError::PatternTooLarge { .. } | EmbedError::BadParameter(_))) => {
            return Err(CliError::Usage(e.to_string()))
        }
        Err(other) => return Err(CliError::Usage(other.to_string())),
    };
    report.timing("embed", run_start.elapsed());
    report.timing("total", start.elapsed());

    match outcome {
        EmbedOutcome::Found(run) => {
            report.outcome = json!({
                "verdict": "found",
                "map": run.embedding.map,
                "restart": run.restart,
                "resamples": run.resamples,
                "total_resamples": run.total_resamples,
                "clique_degraded": run.clique_degraded,
                "subset_sampled": run.subset_sampled,
                "advice": run.advice,
            });
            if let Some(out) = &settings.out {
                let cert = Certificate::from_run(
                    path_str(graph),
                    path_str(coloring),
                    &run,
                    settings.seed,
                );
                cert.save(out)
                    .map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
                report.artifact(path_str(out));
            }
            Ok((report, 0))
        }
        EmbedOutcome::Exhausted(fail) => {
            report.outcome = json!({
                "verdict": "exhausted",
                "restarts": fail.restarts,
                "total_resamples": fail.total_resamples,
                "final_violations": fail.final_violations,
                "clique_degraded": fail.clique_degraded,
                "advice": fail.advice,
            });
            Ok((report, 1))
        }
    }
}

fn brute_embed(
    graph: &Path,
    coloring: &Path,
    node_budget: u64,
    settings: &Resolved,
) -> Result<(RunReport, u8), CliError> {
    let start = Instant::now();
    let g = load_graph(graph)?;
    let c = load_coloring(coloring)?;

    let mut report = RunReport::new("brute-embed");
    report.input("graph", path_str(graph));
    report.input("coloring", path_str(coloring));
    report.input("mode", settings.mode.to_string());
    report.input("node_budget", node_budget);

    let sr = brute_force_embed(&g, &c, settings.mode, node_budget)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    report.timing("total", start.elapsed());

    let (outcome, code) = match sr.outcome {
        SearchOutcome::Found(embedding) => (
            json!({ "verdict": "found", "map": embedding.map, "nodes": sr.nodes }),
            0,
        ),
        SearchOutcome::NoneCertified => {
            (json!({ "verdict": "none", "nodes": sr.nodes }), 1)
        }
        SearchOutcome::Inconclusive => {
            (json!({ "verdict": "inconclusive", "nodes": sr.nodes }), 2)
        }
    };
    report.outcome = outcome;
    Ok((report, code))
}

fn verify(certificate: &Path) -> Result<(RunReport, u8), CliError> {
    let start = Instant::now();
    let cert = Certificate::load(certificate)
        .map_err(|e| CliError::Io(format!("{}: {e}", certificate.display())))?;

    let mut report = RunReport::new("verify");
    report.input("certificate", path_str(certificate));
    report.input("pattern_file", cert.pattern_file.clone());
    report.input("host_file", cert.host_file.clone());
    report.input("mode", cert.mode.to_string());

    let verdict = cert
        .verify()
        .map_err(|e| CliError::Io(e.to_string()))?;
    report.timing("total", start.elapsed());

    match verdict {
        CopyVerdict::Ok => {
            report.outcome = json!({
                "verdict": "valid",
                "mode": cert.mode.to_string(),
                "vertices": cert.map.len(),
            });
            Ok((report, 0))
        }
        witness => {
            report.outcome = json!({
                "verdict": "invalid",
                "witness": format!("{witness:?}"),
            });
            Ok((report, 1))
        }
    }
}

fn radius2(coloring: &Path, node_budget: u64) -> Result<(RunReport, u8), CliError> {
    let start = Instant::now();
    let c = load_coloring(coloring)?;

    let mut report = RunReport::new("radius2-search");
    report.input("coloring", path_str(coloring));
    report.input("node_budget", node_budget);

    let rr = radius2_spanning_tree_search(&c, node_budget)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    report.timing("total", start.elapsed());

    let (outcome, code) = match rr.outcome {
        Radius2Outcome::NoneCertified => (json!({ "verdict": "none", "nodes": rr.nodes }), 0),
        Radius2Outcome::Found { tree, embedding } => (
            json!({
                "verdict": "found",
                "tree_edges": tree.edges(),
                "map": embedding.map,
                "nodes": rr.nodes,
            }),
            1,
        ),
        Radius2Outcome::Inconclusive => {
            (json!({ "verdict": "inconclusive", "nodes": rr.nodes }), 2)
        }
    };
    report.outcome = outcome;
    Ok((report, code))
}

fn block_check(
    coloring: &Path,
    graph: &Path,
    x: &[u32],
    t: usize,
    node_budget: u64,
) -> Result<(RunReport, u8), CliError> {
    let start = Instant::now();
    let c = load_coloring(coloring)?;
    let h = load_graph(graph)?;

    let mut report = RunReport::new("block-check");
    report.input("coloring", path_str(coloring));
    report.input("graph", path_str(graph));
    report.input("x", x);
    report.input("t", t);
    report.input("node_budget", node_budget);

    let br = rainbow_block_check(&c, &h, x, t, node_budget)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    report.timing("total", start.elapsed());

    let (outcome, code) = match br.outcome {
        BlockCheckOutcome::Certified => {
            (json!({ "verdict": "certified", "nodes": br.nodes }), 0)
        }
        BlockCheckOutcome::Counterexample(embedding) => (
            json!({
                "verdict": "counterexample",
                "map": embedding.map,
                "nodes": br.nodes,
            }),
            1,
        ),
        BlockCheckOutcome::Inconclusive => {
            (json!({ "verdict": "inconclusive", "nodes": br.nodes }), 2)
        }
    };
    report.outcome = outcome;
    Ok((report, code))
}

fn bench_cmd(suite: SuiteArg, budget_ms: Option<u64>, settings: &Resolved) -> CommandResult {
    let start = Instant::now();
    let (name, result) = match suite {
        SuiteArg::EmbedScaling => {
            ("embed-scaling", bench::embed_scaling(settings.seed, budget_ms)?)
        }
        SuiteArg::CliqueScaling => {
            ("clique-scaling", bench::clique_scaling(settings.seed, budget_ms)?)
        }
        SuiteArg::BudgetEval => ("budget-eval", bench::budget_eval(budget_ms)?),
    };

    let mut report = RunReport::new("bench");
    report.input("suite", name);
    if let Some(b) = budget_ms {
        report.input("budget_ms", b);
    }
    report.seed = Some(settings.seed);
    report.outcome = json!({
        "verdict": if result.truncated { "truncated" } else { "complete" },
        "rows": result.rows.len(),
        "truncated": result.truncated,
        "summary": result.summary,
    });
    report.timing("total", start.elapsed());

    let csv = bench::to_csv(&result);
    let code = if result.truncated { 2 } else { 0 };
    match &settings.out {
        Some(path) => {
            std::fs::write(path, &csv)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            report.artifact(path_str(path));
            Ok((Some(report), code))
        }
        None => {
            // The CSV is the artifact: stream it alone so stdout stays
            // machine-readable, like the generator subcommands.
            print!("{csv}");
            Ok((None, code))
        }
    }
}
