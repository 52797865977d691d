//! `fcx`: command-line front end for the formal concept analysis toolkit.
//!
//! Exit codes: 0 on success, 1 on input/parse errors, 2 when a concept or
//! node cap was hit. All thresholds are decimals in [0, 1], never
//! percentages.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fcx_core::analysis;
use fcx_core::bench::{self, BenchConfig, Pipeline};
use fcx_core::context::FormalContext;
use fcx_core::corpus;
use fcx_core::error::{Error, Result};
use fcx_core::io::{self, ContextFormat};
use fcx_core::lattice::{self, ConceptLattice, Labeling};
use fcx_core::lexicon::{Lexicon, LexiconFormat};
use fcx_core::reduce::{reduce_with_method, ReduceMethod, Strategy};

#[derive(Parser)]
#[command(
    name = "fcx",
    version,
    about = "Formal concept analysis toolkit: build, reduce, and compare concept lattices",
    after_help = "All thresholds are decimals in [0, 1] (0.25 means 25%).\n\
                  Context files are Burmeister .cxt by default; a .csv extension selects CSV."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random context
    Gen(GenArgs),
    /// Build a context from a head\tverb#role\tcount pair file
    Pairs2ctx(PairsArgs),
    /// Reduce a context lexically, by frequency, or both
    Reduce(ReduceArgs),
    /// Build the concept lattice of a context (DOT or JSON)
    Lattice(LatticeArgs),
    /// Print structural invariants of a context or lattice JSON
    Invariants(InvariantsArgs),
    /// Compare an original context against its reduction
    Compare(CompareArgs),
    /// Time lattice pipelines over seeded random contexts
    Bench(BenchArgs),
    /// Cochran sample size for a finite population
    Samplesize(SamplesizeArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of objects (rows)
    #[arg(long)]
    objects: usize,
    /// Number of attributes (columns)
    #[arg(long)]
    attributes: usize,
    /// Probability of each cell being true, in [0, 1]
    #[arg(long)]
    density: f64,
    /// RNG seed; identical seeds reproduce the context exactly
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (.cxt or .csv); stdout as .cxt when omitted
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PairsArgs {
    /// TSV file with head, verb#role, count columns
    input: PathBuf,
    /// Keep pairs whose weight is strictly above this, in [0, 1]
    #[arg(long)]
    threshold: f64,
    /// Output file (.cxt or .csv); stdout as .cxt when omitted
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Context file to reduce
    input: PathBuf,
    /// One of: wordnet, frequency, wn-then-freq, freq-then-wn
    #[arg(long)]
    method: String,
    /// Lexicon file or dictionary directory (lexical methods only)
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Lexicon encoding: tsv or wordnet-dict; inferred from the path when omitted
    #[arg(long)]
    lexicon_format: Option<String>,
    /// How many generalization edges up a lemma may climb
    #[arg(long, default_value_t = 4)]
    hyper_depth: u32,
    /// How many generalization edges down a lemma may climb
    #[arg(long, default_value_t = 4)]
    hypo_depth: u32,
    /// Frequency cut-off in [0, 1]; rows/columns at or below it are dropped
    #[arg(long, default_value_t = 0.2)]
    threshold: f64,
    /// Pair-scan strategy: multidisciplinary or single-dual
    #[arg(long, default_value = "multidisciplinary")]
    strategy: String,
    /// Output file (.cxt or .csv); stdout as .cxt when omitted
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    /// Write the replayable merge trace as JSON here
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Args)]
struct LatticeArgs {
    /// Context file to build from
    input: PathBuf,
    /// Construction algorithm: addintent or nextclosure
    #[arg(long, default_value = "addintent")]
    algorithm: String,
    /// Output format: dot or json
    #[arg(long, default_value = "dot")]
    format: String,
    /// DOT node labels: full (extent and intent) or reduced (each label once)
    #[arg(long, default_value = "full")]
    labeling: String,
    /// Abort with exit code 2 if the lattice would exceed this many concepts
    #[arg(long)]
    cap: Option<usize>,
    /// Output file; stdout when omitted
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InvariantsArgs {
    /// Context file, or a lattice JSON file produced by `fcx lattice --format json`
    input: PathBuf,
    /// Output format: table or json
    #[arg(long, default_value = "table")]
    format: String,
}

#[derive(Args)]
struct CompareArgs {
    /// The original context
    original: PathBuf,
    /// The reduced context
    reduced: PathBuf,
    /// Merge trace JSON written by `fcx reduce --trace-out`
    #[arg(long)]
    trace: PathBuf,
    /// Output format: table or json
    #[arg(long, default_value = "table")]
    format: String,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON benchmark config; fields follow the defaults printed by --help
    #[arg(long)]
    config: Option<PathBuf>,
    /// Objects per generated context
    #[arg(long)]
    objects: Option<usize>,
    /// Comma-separated attribute counts to sweep
    #[arg(long, value_delimiter = ',')]
    sweep: Option<Vec<usize>>,
    /// Comma-separated densities in [0, 1]
    #[arg(long, value_delimiter = ',')]
    densities: Option<Vec<f64>>,
    /// Timed repeats per cell
    #[arg(long)]
    repeats: Option<usize>,
    /// Master seed; per-cell seeds derive from it
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated pipelines: raw-nextclosure, raw-addintent,
    /// wn-then-freq, freq-then-wn, wn-only, freq-only
    #[arg(long, value_delimiter = ',')]
    pipelines: Option<Vec<String>>,
    /// Frequency cut-off for the freq stages, in [0, 1]
    #[arg(long)]
    threshold: Option<f64>,
    /// Generalization climb limit (upward) for the wn stages
    #[arg(long)]
    hyper_depth: Option<u32>,
    /// Generalization climb limit (downward) for the wn stages
    #[arg(long)]
    hypo_depth: Option<u32>,
    /// Pair-scan strategy for the wn stages
    #[arg(long)]
    strategy: Option<String>,
    /// Lexicon file or dictionary directory for the wn stages
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Lexicon encoding: tsv or wordnet-dict; inferred when omitted
    #[arg(long)]
    lexicon_format: Option<String>,
    /// Concept cap per cell; capped cells record "capped" markers
    #[arg(long)]
    concept_cap: Option<usize>,
    /// Worker threads (cells run concurrently when > 1)
    #[arg(long)]
    threads: Option<usize>,
    /// Write the records CSV here; stdout when omitted
    #[arg(long)]
    records_out: Option<PathBuf>,
    /// Also run pairwise significance tests and write their CSV here
    #[arg(long)]
    significance_out: Option<PathBuf>,
}

#[derive(Args)]
struct SamplesizeArgs {
    /// Population size (e.g. article count)
    population: u64,
    /// Confidence level in (0, 1), e.g. 0.95
    confidence: f64,
    /// Margin of error in (0, 1), e.g. 0.05
    margin: f64,
    /// Expected proportion in [0, 1]; 0.5 is the conservative choice
    proportion: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_capacity() { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(args) => gen(args),
        Command::Pairs2ctx(args) => pairs2ctx(args),
        Command::Reduce(args) => reduce(args),
        Command::Lattice(args) => lattice_cmd(args),
        Command::Invariants(args) => invariants_cmd(args),
        Command::Compare(args) => compare_cmd(args),
        Command::Bench(args) => bench_cmd(args),
        Command::Samplesize(args) => {
            let n = analysis::cochran_sample_size(
                args.population,
                args.confidence,
                args.margin,
                args.proportion,
            )?;
            write_stdout(&format!("{n}\n"))
        }
    }
}

/// Writes to stdout, treating a closed pipe (`fcx ... | head`) as a
/// successful, silent end of output.
fn write_stdout(text: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let res = out.write_all(text.as_bytes()).and_then(|()| out.flush());
    match res {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        res => Ok(res?),
    }
}

/// Writes a context to `output` in the format its extension names, or to
/// stdout in `.cxt` form.
fn emit_context(ctx: &FormalContext, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => io::write_context(ctx, path, ContextFormat::from_path(path)),
        None => write_stdout(&io::format_cxt(ctx)),
    }
}

fn emit_text(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(())
        }
        None => write_stdout(text),
    }
}

fn read_context(path: &Path) -> Result<FormalContext> {
    io::read_context(path, ContextFormat::from_path(path))
}

fn load_lexicon(path: &Path, format: Option<&str>) -> Result<Lexicon> {
    let format = match format {
        Some(name) => name.parse()?,
        None if path.is_dir() => LexiconFormat::WordnetDict,
        None => LexiconFormat::Tsv,
    };
    Lexicon::load(path, format)
}

fn build_with(algorithm: &str, ctx: &FormalContext, cap: Option<usize>) -> Result<ConceptLattice> {
    let cap = cap.unwrap_or(lattice::DEFAULT_CONCEPT_CAP);
    match algorithm {
        "addintent" => lattice::build_lattice_addintent_capped(ctx, cap),
        "nextclosure" => lattice::build_lattice_nextclosure_capped(ctx, cap),
        other => Err(Error::input(format!("unknown algorithm {other:?}"))),
    }
}

fn gen(args: GenArgs) -> Result<()> {
    let ctx = FormalContext::random(args.objects, args.attributes, args.density, args.seed)?;
    emit_context(&ctx, args.output.as_deref())
}

fn pairs2ctx(args: PairsArgs) -> Result<()> {
    let pairs = corpus::load_pairs(&args.input)?;
    let weighted = corpus::weigh_pairs(&pairs)?;
    let ctx = corpus::build_context(&weighted, args.threshold)?;
    emit_context(&ctx, args.output.as_deref())
}

fn reduce(args: ReduceArgs) -> Result<()> {
    let method: ReduceMethod = args.method.parse()?;
    let strategy: Strategy = args.strategy.parse()?;
    let lexicon = match (&args.lexicon, method) {
        (_, ReduceMethod::Frequency) => None,
        (Some(path), _) => Some(load_lexicon(path, args.lexicon_format.as_deref())?),
        (None, _) => {
            return Err(Error::input(format!(
                "method {:?} needs --lexicon",
                args.method
            )))
        }
    };
    let ctx = read_context(&args.input)?;
    let (reduced, trace) = reduce_with_method(
        &ctx,
        method,
        lexicon.as_ref(),
        args.hyper_depth,
        args.hypo_depth,
        args.threshold,
        strategy,
    )?;
    emit_context(&reduced, args.output.as_deref())?;
    if let Some(path) = &args.trace_out {
        let mut json = serde_json::to_string_pretty(&trace).expect("trace serializes");
        json.push('\n');
        std::fs::write(path, json)?;
    }
    Ok(())
}

fn lattice_cmd(args: LatticeArgs) -> Result<()> {
    let ctx = read_context(&args.input)?;
    let lat = build_with(&args.algorithm, &ctx, args.cap)?;
    let text = match args.format.as_str() {
        "dot" => {
            let labeling: Labeling = args.labeling.parse()?;
            lattice::export_dot(&lat, &ctx, labeling)
        }
        "json" => lattice::export_json(&lat, &ctx),
        other => return Err(Error::input(format!("unknown lattice format {other:?}"))),
    };
    emit_text(&text, args.output.as_deref())
}

fn render_invariants(inv: &lattice::LatticeInvariants, format: &str) -> Result<String> {
    match format {
        "json" => {
            let mut json = serde_json::to_string_pretty(inv).expect("invariants serialize");
            json.push('\n');
            Ok(json)
        }
        "table" => Ok(format!(
            "concepts  {}\nedges     {}\nheight    {}\nwidth_lo  {}\nwidth_hi  {}\n",
            inv.concept_count, inv.edge_count, inv.height, inv.width_lo, inv.width_hi
        )),
        other => Err(Error::input(format!("unknown output format {other:?}"))),
    }
}

fn invariants_cmd(args: InvariantsArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.input)?;
    let inv = if text.trim_start().starts_with('{') {
        let (n, covers) = lattice::parse_json_covers(&text)?;
        lattice::invariants_from_covers(n, &covers)
    } else {
        let ctx = match ContextFormat::from_path(&args.input) {
            ContextFormat::Cxt => io::parse_cxt(&text)?,
            ContextFormat::Csv => io::parse_csv(&text)?,
        };
        lattice::invariants(&lattice::build_lattice_addintent(&ctx)?)
    };
    write_stdout(&render_invariants(&inv, &args.format)?)
}

fn compare_cmd(args: CompareArgs) -> Result<()> {
    let original = read_context(&args.original)?;
    let reduced = read_context(&args.reduced)?;
    let trace: fcx_core::MergeTrace = serde_json::from_str(&std::fs::read_to_string(&args.trace)?)
        .map_err(|e| Error::parse(e.line(), format!("bad trace JSON: {e}")))?;
    let lat_a = lattice::build_lattice_addintent(&original)?;
    let lat_b = lattice::build_lattice_addintent(&reduced)?;
    let report = analysis::compare(&lat_a, &original, &lat_b, &reduced, &trace)?;
    match args.format.as_str() {
        "json" => {
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            write_stdout(&format!("{json}\n"))
        }
        "table" => write_stdout(&format!("{report}\n")),
        other => Err(Error::input(format!("unknown output format {other:?}"))),
    }
}

fn bench_cmd(args: BenchArgs) -> Result<()> {
    let mut cfg: BenchConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text)
                .map_err(|e| Error::parse(e.line(), format!("bad bench config: {e}")))?
        }
        None => BenchConfig::default(),
    };
    if let Some(v) = args.objects {
        cfg.num_objects = v;
    }
    if let Some(v) = args.sweep {
        cfg.attribute_sweep = v;
    }
    if let Some(v) = args.densities {
        cfg.densities = v;
    }
    if let Some(v) = args.repeats {
        cfg.repeats = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(names) = &args.pipelines {
        cfg.pipelines =
            names.iter().map(|n| n.parse::<Pipeline>()).collect::<Result<Vec<_>>>()?;
    }
    if let Some(v) = args.threshold {
        cfg.threshold = v;
    }
    if let Some(v) = args.hyper_depth {
        cfg.hyper_depth = v;
    }
    if let Some(v) = args.hypo_depth {
        cfg.hypo_depth = v;
    }
    if let Some(name) = &args.strategy {
        cfg.strategy = name.parse()?;
    }
    if let Some(path) = args.lexicon {
        cfg.lexicon_path = Some(path);
    }
    if let Some(v) = args.concept_cap {
        cfg.concept_cap = v;
    }
    if let Some(v) = args.threads {
        cfg.threads = v;
    }
    cfg.validate()?;

    let lexicon = match &cfg.lexicon_path {
        Some(path) => Some(load_lexicon(path, args.lexicon_format.as_deref())?),
        None => None,
    };
    let records = bench::run_benchmark(&cfg, lexicon.as_ref())?;
    emit_text(&bench::records_to_csv(&records), args.records_out.as_deref())?;
    if let Some(path) = &args.significance_out {
        let rows = bench::significance_report(&records)?;
        std::fs::write(path, bench::significance_to_csv(&rows))?;
    }
    Ok(())
}
