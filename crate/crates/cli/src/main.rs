//! Command-line surface for the sequential coloring library.
//!
//! Subcommands: `color` (run the solver), `audit` (solver with per-firing
//! oracle cross-checks), `sds` (defining-set verification and search),
//! `gadget` (emit gadget instances), `reduce` (build hardness-reduction
//! instances), and `oracle` (brute-force queries).
//!
//! Exit codes: 0 for success / "yes", 1 for failure / "no", 2 for budget
//! breaches, 3 for input errors. Outputs are deterministic: identical
//! invocations produce byte-identical documents.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use seqcol::engine::{
    lists_from_defining_set, solve, OrderedListGraph, Rounds, SolveOptions, SolveOutcome,
    SolveResult,
};
use seqcol::gadgets::{
    build_d, build_f, build_g_xi, build_h, reduce_3col, reduce_vertexcover_rulebase,
    reduce_vertexcover_sds, GadgetInstance, ReductionMode, ReductionOutput,
};
use seqcol::io;
use seqcol::oracle::{ListColoringProblem, Oracle, DEFAULT_ORACLE_CAP};
use seqcol::sds::{
    exists_coloring_with_sdn_le, ssdn, verify_sds, wsdn, ColoringSearchOutcome, SdsMode, SdsQuery,
    SearchOptions, SearchOutcome,
};
use seqcol::{ColorSet, Coloring, Error, VertexId, VertexOrder};

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "seqcol", version, about = "Rule-based sequential graph coloring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sequential solver on an instance.
    Color(ColorArgs),
    /// Run the solver with oracle auditing of every structural rule firing.
    Audit(ColorArgs),
    /// Defining-set verification and exact search.
    Sds(SdsArgs),
    /// Emit a gadget instance.
    Gadget(GadgetArgs),
    /// Build a hardness-reduction instance.
    Reduce(ReduceArgs),
    /// Brute-force oracle queries.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct ColorArgs {
    /// Instance JSON file.
    #[arg(long)]
    input: String,
    /// Rule-base: RT, RG, RT+greedy, or @file.json.
    #[arg(long, default_value = "RT")]
    rulebase: String,
    /// Palette size; defaults to the instance's palette.
    #[arg(long)]
    palette: Option<u32>,
    /// Seed vertices (labels or ids, comma-separated); uses the instance
    /// coloring to pin their lists.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<String>>,
    /// Stop after this many rounds.
    #[arg(long)]
    rounds_cap: Option<u32>,
    /// Include the per-round change trace in the output.
    #[arg(long)]
    trace: bool,
    /// Write the final state as DOT to this path.
    #[arg(long)]
    dot_out: Option<String>,
    /// Write the result document to this path (also printed to stdout).
    #[arg(long)]
    json_out: Option<String>,
}

#[derive(Args)]
struct SdsArgs {
    #[command(subcommand)]
    command: SdsCommand,
}

#[derive(Subcommand)]
enum SdsCommand {
    /// Check one candidate set.
    Verify(SdsCommonArgs),
    /// Minimum defining-set size.
    Wsdn(SdsCommonArgs),
    /// Minimum defining-set index.
    Ssdn(SdsCommonArgs),
    /// Does some proper coloring have a weak number at most xi?
    Colwds(SdsCommonArgs),
    /// Does some proper coloring have a strong number at most xi?
    Colsds(SdsCommonArgs),
}

#[derive(Args)]
struct SdsCommonArgs {
    /// Instance JSON file (needs a coloring except for colwds/colsds).
    #[arg(long)]
    input: String,
    /// Rule-base: RT, RG, RT+greedy, or @file.json.
    #[arg(long, default_value = "RT")]
    rulebase: String,
    #[arg(long)]
    palette: Option<u32>,
    /// Round bound; unbounded when omitted.
    #[arg(long)]
    k: Option<u32>,
    /// Decision bound for colwds/colsds.
    #[arg(long)]
    xi: Option<u32>,
    /// Candidate set for verify (labels or ids).
    #[arg(long, value_delimiter = ',')]
    set: Option<Vec<String>>,
    /// Cap on candidate verifications.
    #[arg(long)]
    budget: Option<u64>,
    /// Worker threads for the subset scan.
    #[arg(long)]
    threads: Option<usize>,
    /// Disable must-contain pruning (exhaustive scan).
    #[arg(long)]
    no_prune: bool,
    #[arg(long)]
    json_out: Option<String>,
}

#[derive(Args)]
struct GadgetArgs {
    /// Family: D, Gxi, F, or H.
    family: GadgetFamily,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    xi: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    json_out: Option<String>,
    #[arg(long)]
    dot_out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetFamily {
    D,
    Gxi,
    F,
    H,
}

#[derive(Args)]
struct ReduceArgs {
    /// Reduction: 3col, vc-sds, or vc-rulebase.
    kind: ReduceKind,
    /// Source graph JSON file.
    #[arg(long)]
    input: String,
    #[arg(long)]
    k: Option<u32>,
    /// Cover-size bound for the vertex-cover reductions.
    #[arg(long)]
    t: Option<u32>,
    /// Weak or strong variant of the 3col reduction.
    #[arg(long, value_enum, default_value_t = Mode::Weak)]
    mode: Mode,
    /// Witness JSON file ({"coloring": {...}} or {"cover": [...]}).
    #[arg(long)]
    witness: Option<String>,
    #[arg(long)]
    json_out: Option<String>,
    #[arg(long)]
    dot_out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceKind {
    #[value(name = "3col")]
    ThreeCol,
    #[value(name = "vc-sds")]
    VcSds,
    #[value(name = "vc-rulebase")]
    VcRulebase,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Mode {
    Weak,
    Strong,
}

#[derive(Args)]
struct OracleArgs {
    #[command(subcommand)]
    command: OracleCommand,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// List every solution of the instance's list problem.
    Enumerate(OracleCommonArgs),
    /// Is the graph uniquely colorable for the palette?
    Ucg(OracleCommonArgs),
    /// Chromatic and clique numbers.
    Chromatic(OracleCommonArgs),
    /// Check a transverse system against the graph.
    TransverseCheck(OracleCommonArgs),
    /// Build and verify the cone graph of a transverse system.
    TransverseBuild(OracleCommonArgs),
}

#[derive(Args)]
struct OracleCommonArgs {
    #[arg(long)]
    input: String,
    /// Vertex cap for enumeration (default 14, or SEQCOL_ORACLE_CAP).
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    palette: Option<u32>,
    /// Stop after this many solutions (enumerate only).
    #[arg(long)]
    count_cap: Option<usize>,
    /// Transverse-system JSON file.
    #[arg(long)]
    transverse: Option<String>,
    #[arg(long)]
    json_out: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_YES };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Color(args) => run_color(args, false),
        Command::Audit(args) => run_color(args, true),
        Command::Sds(args) => run_sds(args),
        Command::Gadget(args) => run_gadget(args),
        Command::Reduce(args) => run_reduce(args),
        Command::Oracle(args) => run_oracle(args),
    }
}

fn read_file(path: &str) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::InvalidDocument(format!("cannot read {path}: {e}")))
}

fn load_instance(path: &str) -> Result<io::Instance, Error> {
    let inst = io::parse_instance(&read_file(path)?)?;
    if !inst.explicit_order && inst.graph.vertex_count() > 0 {
        eprintln!(
            "warning: {path} has no ordering; using the vertex array order (orderings matter for nonstructural rule-bases)"
        );
    }
    Ok(inst)
}

fn oracle_from(cap: Option<usize>) -> Oracle {
    let cap = cap.or_else(|| {
        std::env::var("SEQCOL_ORACLE_CAP")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    Oracle::new(cap.unwrap_or(DEFAULT_ORACLE_CAP))
}

fn emit(value: &Value, json_out: Option<&str>) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).expect("JSON serialization cannot fail");
    println!("{text}");
    if let Some(path) = json_out {
        fs::write(path, format!("{text}\n"))
            .map_err(|e| Error::InvalidDocument(format!("cannot write {path}: {e}")))?;
    }
    Ok(())
}

fn palette_for(inst: &io::Instance, flag: Option<u32>) -> Result<u32, Error> {
    flag.or_else(|| inst.effective_palette()).ok_or_else(|| {
        Error::InvalidDocument(
            "no palette: pass --palette or include palette/lists/coloring in the instance".into(),
        )
    })
}

fn resolve_set(inst: &io::Instance, tokens: &[String]) -> Result<BTreeSet<VertexId>, Error> {
    tokens
        .iter()
        .filter(|t| !t.is_empty())
        .map(|t| inst.resolve_vertex(t))
        .collect()
}

fn display_vertex(inst: &io::Instance, v: VertexId) -> String {
    inst.marks
        .as_ref()
        .and_then(|m| m.label_of(v).cloned())
        .unwrap_or_else(|| v.0.to_string())
}

fn lists_value(lists: &BTreeMap<VertexId, ColorSet>) -> Value {
    Value::Object(
        lists
            .iter()
            .map(|(v, l)| {
                (
                    v.0.to_string(),
                    Value::Array(l.iter().map(|c| json!(c.0)).collect()),
                )
            })
            .collect(),
    )
}

fn coloring_value(c: &Coloring) -> Value {
    Value::Object(
        c.iter()
            .map(|(v, col)| (v.0.to_string(), json!(col.0)))
            .collect(),
    )
}

fn trace_value(result: &SolveResult) -> Value {
    Value::Array(
        result
            .trace
            .iter()
            .enumerate()
            .map(|(i, changes)| {
                json!({
                    "round": i + 1,
                    "changes": changes.iter().map(|ch| json!({
                        "vertex": ch.vertex.0,
                        "old": ch.old.iter().map(|c| c.0).collect::<Vec<_>>(),
                        "new": ch.new.iter().map(|c| c.0).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn outcome_name(outcome: &SolveOutcome) -> &'static str {
    match outcome {
        SolveOutcome::Solved => "solved",
        SolveOutcome::EmptyList { .. } => "empty-list",
        SolveOutcome::Stable => "stable",
        SolveOutcome::RoundCapReached => "round-cap",
    }
}

fn run_color(args: ColorArgs, audit: bool) -> Result<u8, Error> {
    let inst = load_instance(&args.input)?;
    let palette = palette_for(&inst, args.palette)?;
    let rb = io::resolve_rulebase(&args.rulebase, palette)?;

    let lists = match (&args.seeds, &inst.lists) {
        (Some(seeds), _) => {
            let coloring = inst.coloring.as_ref().ok_or_else(|| {
                Error::InvalidDocument("--seeds needs a coloring in the instance".into())
            })?;
            let a = resolve_set(&inst, seeds)?;
            lists_from_defining_set(&inst.graph, coloring, &a)?
        }
        (None, Some(lists)) => lists.clone(),
        (None, None) => inst
            .graph
            .vertices()
            .map(|v| (v, ColorSet::full(palette)))
            .collect(),
    };
    let state = OrderedListGraph::new(inst.graph.clone(), inst.order.clone(), lists, palette)?;
    let opts = SolveOptions {
        round_cap: args.rounds_cap,
        audit: audit.then(|| oracle_from(None)),
    };
    let result = solve(&state, &rb, &opts)?;

    let mut doc = json!({
        "outcome": outcome_name(&result.outcome),
        "rounds": result.rounds,
        "lists": lists_value(&result.lists),
    });
    if let SolveOutcome::EmptyList { vertex } = result.outcome {
        doc["failed_at"] = json!(vertex.0);
    }
    if let Some(coloring) = result.coloring(&inst.graph, palette) {
        doc["coloring"] = coloring_value(&coloring);
    }
    if args.trace {
        doc["trace"] = trace_value(&result);
    }
    if audit {
        doc["audit_violations"] = json!(result
            .audit_violations
            .iter()
            .map(|v| json!({"rule": v.rule, "vertex": v.vertex.0, "round": v.round}))
            .collect::<Vec<_>>());
    }
    emit(&doc, args.json_out.as_deref())?;

    if let Some(path) = &args.dot_out {
        let coloring = result.coloring(&inst.graph, palette);
        let dot = io::to_dot(
            &inst.graph,
            Some(&inst.order),
            coloring.as_ref(),
            Some(&result.lists),
            inst.marks.as_ref(),
        );
        fs::write(path, dot)
            .map_err(|e| Error::InvalidDocument(format!("cannot write {path}: {e}")))?;
    }

    let ok = result.done() && (!audit || result.audit_violations.is_empty());
    Ok(if ok { EXIT_YES } else { EXIT_NO })
}

fn with_threads<T>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    match threads {
        Some(n) if n > 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}

fn witness_value(inst: &io::Instance, w: &seqcol::sds::SdsWitness) -> Value {
    json!({
        "set": w.set.iter().map(|v| v.0).collect::<Vec<_>>(),
        "set_names": w.set.iter().map(|&v| display_vertex(inst, v)).collect::<Vec<_>>(),
        "rounds": w.rounds,
        "index": w.index,
    })
}

fn run_sds(args: SdsArgs) -> Result<u8, Error> {
    let (name, common, mode): (&str, &SdsCommonArgs, Option<SdsMode>) = match &args.command {
        SdsCommand::Verify(c) => ("verify", c, None),
        SdsCommand::Wsdn(c) => ("wsdn", c, Some(SdsMode::Weak)),
        SdsCommand::Ssdn(c) => ("ssdn", c, Some(SdsMode::Strong)),
        SdsCommand::Colwds(c) => ("colwds", c, Some(SdsMode::Weak)),
        SdsCommand::Colsds(c) => ("colsds", c, Some(SdsMode::Strong)),
    };
    let inst = load_instance(&common.input)?;
    let palette = palette_for(&inst, common.palette)?;
    let rb = io::resolve_rulebase(&common.rulebase, palette)?;
    let k = common.k.map_or(Rounds::Unbounded, Rounds::Finite);
    let opts = SearchOptions {
        budget: common.budget,
        prune: !common.no_prune,
        parallel: common.threads.is_some_and(|n| n > 1),
    };

    match (name, mode) {
        ("verify", _) => {
            let coloring = inst.coloring.clone().ok_or_else(|| {
                Error::InvalidDocument("sds verify needs a coloring in the instance".into())
            })?;
            let set = resolve_set(
                &inst,
                common
                    .set
                    .as_deref()
                    .ok_or_else(|| Error::InvalidDocument("sds verify needs --set".into()))?,
            )?;
            let q = SdsQuery::new(&inst.graph, &inst.order, &coloring, &rb, k)?;
            let found = verify_sds(&q, &set)?;
            let doc = match &found {
                Some(w) => {
                    json!({"query": "verify", "is_sds": true, "witness": witness_value(&inst, w)})
                }
                None => json!({"query": "verify", "is_sds": false}),
            };
            emit(&doc, common.json_out.as_deref())?;
            Ok(if found.is_some() { EXIT_YES } else { EXIT_NO })
        }
        ("wsdn", Some(mode)) | ("ssdn", Some(mode)) => {
            let coloring = inst.coloring.clone().ok_or_else(|| {
                Error::InvalidDocument(format!("sds {name} needs a coloring in the instance"))
            })?;
            let q = SdsQuery::new(&inst.graph, &inst.order, &coloring, &rb, k)?;
            let outcome = with_threads(common.threads, || match mode {
                SdsMode::Weak => wsdn(&q, &opts),
                SdsMode::Strong => ssdn(&q, &opts),
            })?;
            let (doc, code) = match &outcome {
                SearchOutcome::Found {
                    number,
                    witness,
                    explored,
                } => (
                    json!({
                        "query": name,
                        "number": number,
                        "witness": witness_value(&inst, witness),
                        "nodes_explored": explored,
                    }),
                    EXIT_YES,
                ),
                SearchOutcome::NoSds { explored } => (
                    json!({"query": name, "number": null, "nodes_explored": explored}),
                    EXIT_NO,
                ),
                SearchOutcome::BudgetExceeded { best, explored } => (
                    json!({
                        "query": name,
                        "outcome": "exceeded-budget",
                        "best": best.as_ref().map(|w| witness_value(&inst, w)),
                        "nodes_explored": explored,
                    }),
                    EXIT_BUDGET,
                ),
            };
            emit(&doc, common.json_out.as_deref())?;
            Ok(code)
        }
        (_, Some(mode)) => {
            let xi = common
                .xi
                .ok_or_else(|| Error::InvalidDocument(format!("sds {name} needs --xi")))?;
            let k = Rounds::Finite(common.k.unwrap_or(1));
            let outcome = with_threads(common.threads, || {
                exists_coloring_with_sdn_le(&inst.graph, &inst.order, &rb, k, xi, mode, &opts)
            })?;
            let (doc, code) = match &outcome {
                ColoringSearchOutcome::Yes {
                    coloring,
                    witness,
                    explored,
                } => (
                    json!({
                        "query": name,
                        "answer": true,
                        "coloring": coloring_value(coloring),
                        "witness": witness_value(&inst, witness),
                        "nodes_explored": explored,
                    }),
                    EXIT_YES,
                ),
                ColoringSearchOutcome::No { explored } => (
                    json!({"query": name, "answer": false, "nodes_explored": explored}),
                    EXIT_NO,
                ),
                ColoringSearchOutcome::BudgetExceeded { explored } => (
                    json!({"query": name, "outcome": "exceeded-budget", "nodes_explored": explored}),
                    EXIT_BUDGET,
                ),
            };
            emit(&doc, common.json_out.as_deref())?;
            Ok(code)
        }
        _ => unreachable!("clap enforces the subcommand set"),
    }
}

fn gadget_documents(inst: &GadgetInstance) -> (Value, String) {
    let mut doc = io::instance_document(
        inst.graph(),
        Some(&inst.order),
        None,
        Some(&inst.coloring),
        Some(&inst.marked),
        Some(inst.coloring.palette()),
    );
    doc.interface = Some(inst.interface.clone());
    let dot = io::to_dot(
        inst.graph(),
        Some(&inst.order),
        Some(&inst.coloring),
        None,
        Some(&inst.marked),
    );
    (serde_json::to_value(&doc).expect("document serialization"), dot)
}

fn run_gadget(args: GadgetArgs) -> Result<u8, Error> {
    let need = |opt: Option<u32>, flag: &str| {
        opt.ok_or_else(|| Error::InvalidParameter(format!("this family needs --{flag}")))
    };
    let inst = match args.family {
        GadgetFamily::D => build_d(need(args.k, "k")?)?,
        GadgetFamily::Gxi => build_g_xi(need(args.xi, "xi")?, need(args.k, "k")?)?,
        GadgetFamily::F => build_f(need(args.k, "k")?)?,
        GadgetFamily::H => build_h(need(args.n, "n")?)?,
    };
    let (doc, dot) = gadget_documents(&inst);
    emit(&doc, args.json_out.as_deref())?;
    if let Some(path) = &args.dot_out {
        fs::write(path, dot)
            .map_err(|e| Error::InvalidDocument(format!("cannot write {path}: {e}")))?;
    }
    Ok(EXIT_YES)
}

fn reduction_document(out: &ReductionOutput) -> Value {
    let mut doc = io::instance_document(
        out.graph(),
        Some(&out.order),
        None,
        out.coloring.as_ref(),
        Some(&out.marked),
        Some(3),
    );
    doc.bound = Some(out.bound);
    doc.base_map = Some(
        out.base_map
            .iter()
            .map(|(from, to)| (from.0.to_string(), to.0))
            .collect(),
    );
    doc.certificate = out
        .certificate
        .as_ref()
        .map(|cert| cert.iter().map(|v| v.0).collect());
    serde_json::to_value(&doc).expect("document serialization")
}

fn run_reduce(args: ReduceArgs) -> Result<u8, Error> {
    let inst = load_instance(&args.input)?;
    let witness = match &args.witness {
        Some(path) => Some(io::parse_witness(&read_file(path)?)?),
        None => None,
    };
    let out = match args.kind {
        ReduceKind::ThreeCol => {
            let k = args.k.unwrap_or(1);
            let mode = match args.mode {
                Mode::Weak => ReductionMode::Weak,
                Mode::Strong => ReductionMode::Strong,
            };
            let coloring = match &witness {
                Some(w) => w.coloring_for(&inst.graph, 3)?,
                None => None,
            };
            reduce_3col(&inst.graph, &inst.order, k, mode, coloring.as_ref())?
        }
        ReduceKind::VcSds => {
            let k = args.k.unwrap_or(2);
            let t = args
                .t
                .ok_or_else(|| Error::InvalidParameter("vc-sds needs --t (cover bound)".into()))?;
            let cover = witness.as_ref().and_then(|w| w.cover_set());
            reduce_vertexcover_sds(&inst.graph, &inst.order, t, k, cover.as_ref())?
        }
        ReduceKind::VcRulebase => {
            let t = args.t.ok_or_else(|| {
                Error::InvalidParameter("vc-rulebase needs --t (cover bound)".into())
            })?;
            let cover = witness.as_ref().and_then(|w| w.cover_set());
            reduce_vertexcover_rulebase(&inst.graph, &inst.order, t, cover.as_ref())?
        }
    };
    let doc = reduction_document(&out);
    emit(&doc, args.json_out.as_deref())?;
    if let Some(path) = &args.dot_out {
        let dot = io::to_dot(
            out.graph(),
            Some(&out.order),
            out.coloring.as_ref(),
            None,
            Some(&out.marked),
        );
        fs::write(path, dot)
            .map_err(|e| Error::InvalidDocument(format!("cannot write {path}: {e}")))?;
    }
    Ok(EXIT_YES)
}

fn run_oracle(args: OracleArgs) -> Result<u8, Error> {
    let (common, which): (&OracleCommonArgs, &str) = match &args.command {
        OracleCommand::Enumerate(c) => (c, "enumerate"),
        OracleCommand::Ucg(c) => (c, "ucg"),
        OracleCommand::Chromatic(c) => (c, "chromatic"),
        OracleCommand::TransverseCheck(c) => (c, "transverse-check"),
        OracleCommand::TransverseBuild(c) => (c, "transverse-build"),
    };
    let inst = load_instance(&common.input)?;
    let oracle = oracle_from(common.cap);

    match which {
        "enumerate" => {
            let palette = palette_for(&inst, common.palette)?;
            let lists = inst.lists.clone().unwrap_or_else(|| {
                inst.graph
                    .vertices()
                    .map(|v| (v, ColorSet::full(palette)))
                    .collect()
            });
            let problem = ListColoringProblem::new(inst.graph.clone(), lists, palette)?;
            let doc = match oracle.enumerate_solutions(&problem, common.count_cap)? {
                seqcol::oracle::Enumeration::Complete(sols) => json!({
                    "count": sols.len(),
                    "solutions": sols.iter().map(|s| Value::Object(
                        s.iter().map(|(v, c)| (v.0.to_string(), json!(c.0))).collect()
                    )).collect::<Vec<_>>(),
                }),
                seqcol::oracle::Enumeration::Overflow { cap } => {
                    json!({"overflow": true, "cap": cap})
                }
            };
            emit(&doc, common.json_out.as_deref())?;
            Ok(EXIT_YES)
        }
        "ucg" => {
            let palette = palette_for(&inst, common.palette)?;
            let is = oracle.is_ucg(&inst.graph, palette)?;
            emit(
                &json!({"palette": palette, "is_ucg": is}),
                common.json_out.as_deref(),
            )?;
            Ok(if is { EXIT_YES } else { EXIT_NO })
        }
        "chromatic" => {
            let (chi, cl) = oracle.chromatic_and_clique(&inst.graph)?;
            emit(
                &json!({"chromatic": chi, "clique": cl}),
                common.json_out.as_deref(),
            )?;
            Ok(EXIT_YES)
        }
        "transverse-check" | "transverse-build" => {
            let path = common
                .transverse
                .as_ref()
                .ok_or_else(|| Error::InvalidDocument("needs --transverse FILE".into()))?;
            let (t, system) = io::parse_transverse(&read_file(path)?)?;
            if which == "transverse-check" {
                let ok = oracle.check_transverse(&inst.graph, &system, t)?;
                emit(&json!({"t": t, "is_transverse": ok}), common.json_out.as_deref())?;
                Ok(if ok { EXIT_YES } else { EXIT_NO })
            } else {
                match oracle.build_from_transverse(&inst.graph, &system, t) {
                    Ok((h, added)) => {
                        let order = VertexOrder::by_id(&h);
                        let doc =
                            io::instance_document(&h, Some(&order), None, None, None, Some(t));
                        let mut value = serde_json::to_value(&doc).expect("document");
                        value["fixed_class"] =
                            json!(added.iter().map(|v| v.0).collect::<Vec<_>>());
                        emit(&value, common.json_out.as_deref())?;
                        Ok(EXIT_YES)
                    }
                    Err(Error::ConstructionRejected(msg)) => {
                        emit(&json!({"rejected": msg}), common.json_out.as_deref())?;
                        Ok(EXIT_NO)
                    }
                    Err(e) => Err(e),
                }
            }
        }
        _ => unreachable!(),
    }
}
