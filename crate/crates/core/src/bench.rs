//! Benchmark harness: seeded random contexts over attribute sweeps and
//! densities, timed reduce/build pipelines, CSV records, and paired
//! significance tests between pipelines.

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analysis::stats::paired_t_test;
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lattice::{
    build_lattice_addintent_capped, build_lattice_nextclosure_capped, ConceptLattice,
    DEFAULT_CONCEPT_CAP,
};
use crate::lexicon::Lexicon;
use crate::reduce::{freq_reduce, hybrid_reduce, wordnet_reduce, HybridOrder, Strategy};

/// One end-to-end configuration: which reduction (if any) runs before
/// which lattice builder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    RawNextclosure,
    RawAddintent,
    WnThenFreq,
    FreqThenWn,
    WnOnly,
    FreqOnly,
}

pub const ALL_PIPELINES: [Pipeline; 6] = [
    Pipeline::RawNextclosure,
    Pipeline::RawAddintent,
    Pipeline::WnThenFreq,
    Pipeline::FreqThenWn,
    Pipeline::WnOnly,
    Pipeline::FreqOnly,
];

impl Pipeline {
    pub fn id(self) -> &'static str {
        match self {
            Pipeline::RawNextclosure => "raw_nextclosure",
            Pipeline::RawAddintent => "raw_addintent",
            Pipeline::WnThenFreq => "wn_then_freq",
            Pipeline::FreqThenWn => "freq_then_wn",
            Pipeline::WnOnly => "wn_only",
            Pipeline::FreqOnly => "freq_only",
        }
    }

    pub fn needs_lexicon(self) -> bool {
        matches!(self, Pipeline::WnThenFreq | Pipeline::FreqThenWn | Pipeline::WnOnly)
    }
}

impl std::fmt::Display for Pipeline {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let canon = s.replace('-', "_");
        ALL_PIPELINES
            .into_iter()
            .find(|p| p.id() == canon)
            .ok_or_else(|| Error::input(format!("unknown pipeline {s:?}")))
    }
}

fn default_num_objects() -> usize {
    100
}

fn default_attribute_sweep() -> Vec<usize> {
    (4..=11).map(|e| 1usize << e).collect()
}

fn default_densities() -> Vec<f64> {
    vec![0.10, 0.25, 0.50]
}

/// Above these densities the sweep is truncated, keeping dense cells
/// (whose lattices blow up combinatorially) at desk scale.
fn default_density_attribute_caps() -> Vec<(f64, usize)> {
    vec![(0.25, 512), (0.50, 128)]
}

fn default_repeats() -> usize {
    3
}

fn default_pipelines() -> Vec<Pipeline> {
    vec![Pipeline::RawAddintent, Pipeline::FreqOnly]
}

fn default_depth() -> u32 {
    4
}

fn default_threshold() -> f64 {
    0.2
}

fn default_strategy() -> Strategy {
    Strategy::Multidisciplinary
}

fn default_concept_cap() -> usize {
    DEFAULT_CONCEPT_CAP
}

fn default_threads() -> usize {
    1
}

/// Everything a benchmark run depends on. All fields have defaults, so a
/// JSON config may name only what it overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default = "default_num_objects")]
    pub num_objects: usize,
    #[serde(default = "default_attribute_sweep")]
    pub attribute_sweep: Vec<usize>,
    #[serde(default = "default_densities")]
    pub densities: Vec<f64>,
    #[serde(default = "default_density_attribute_caps")]
    pub density_attribute_caps: Vec<(f64, usize)>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_pipelines")]
    pub pipelines: Vec<Pipeline>,
    #[serde(default = "default_depth")]
    pub hyper_depth: u32,
    #[serde(default = "default_depth")]
    pub hypo_depth: u32,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_strategy")]
    pub strategy: Strategy,
    #[serde(default)]
    pub lexicon_path: Option<PathBuf>,
    #[serde(default = "default_concept_cap")]
    pub concept_cap: usize,
    #[serde(default = "default_threads")]
    pub threads: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty config deserializes")
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_objects < 1 {
            return Err(Error::input("num_objects must be at least 1"));
        }
        if self.repeats < 1 {
            return Err(Error::input("repeats must be at least 1"));
        }
        if self.attribute_sweep.is_empty() {
            return Err(Error::input("attribute_sweep must not be empty"));
        }
        if self.attribute_sweep.iter().any(|&m| m < 1) {
            return Err(Error::input("attribute_sweep values must be at least 1"));
        }
        if self.densities.is_empty() {
            return Err(Error::input("densities must not be empty"));
        }
        if self.densities.iter().any(|d| !(0.0..=1.0).contains(d)) {
            return Err(Error::input("densities must lie within [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::input("threshold must lie within [0, 1]"));
        }
        if self.pipelines.is_empty() {
            return Err(Error::input("at least one pipeline must be selected"));
        }
        if self.concept_cap < 1 {
            return Err(Error::input("concept_cap must be at least 1"));
        }
        if self.threads < 1 {
            return Err(Error::input("threads must be at least 1"));
        }
        Ok(())
    }

    /// Largest attribute count the sweep allows at this density.
    fn attribute_cap(&self, density: f64) -> usize {
        self.density_attribute_caps
            .iter()
            .filter(|&&(d, _)| density >= d - 1e-12)
            .map(|&(_, cap)| cap)
            .min()
            .unwrap_or(usize::MAX)
    }
}

/// Deterministic per-cell seed so every pipeline sees the identical
/// context for a given (attribute count, density, repeat) cell (FNV-1a
/// over the cell coordinates).
pub fn cell_seed(master_seed: u64, attributes: usize, density: f64, repeat: usize) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for word in [master_seed, attributes as u64, density.to_bits(), repeat as u64] {
        for byte in word.to_le_bytes() {
            h = (h ^ u64::from(byte)).wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// One timed cell. `build_ms`, `total_ms`, `concepts`, and `edges` are
/// `None` when the builder hit the concept cap; `reduce_ms` is 0 for the
/// raw pipelines.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub pipeline: Pipeline,
    pub objects: usize,
    pub attributes: usize,
    pub density: f64,
    pub seed: u64,
    pub reduce_ms: f64,
    pub build_ms: Option<f64>,
    pub total_ms: Option<f64>,
    pub concepts: Option<usize>,
    pub edges: Option<usize>,
}

fn run_pipeline(
    pipeline: Pipeline,
    cfg: &BenchConfig,
    lexicon: Option<&Lexicon>,
    ctx: &FormalContext,
) -> Result<(f64, Result<ConceptLattice>)> {
    let reduce_start = Instant::now();
    let reduced: Option<FormalContext> = match pipeline {
        Pipeline::RawNextclosure | Pipeline::RawAddintent => None,
        Pipeline::WnOnly => {
            let lex = lexicon.expect("validated");
            Some(wordnet_reduce(ctx, lex, cfg.hyper_depth, cfg.hypo_depth, cfg.strategy)?.0)
        }
        Pipeline::FreqOnly => Some(freq_reduce(ctx, cfg.threshold)?.0),
        Pipeline::WnThenFreq | Pipeline::FreqThenWn => {
            let lex = lexicon.expect("validated");
            let order = if pipeline == Pipeline::WnThenFreq {
                HybridOrder::WnThenFreq
            } else {
                HybridOrder::FreqThenWn
            };
            Some(
                hybrid_reduce(
                    ctx,
                    lex,
                    cfg.hyper_depth,
                    cfg.hypo_depth,
                    cfg.threshold,
                    cfg.strategy,
                    order,
                )?
                .0,
            )
        }
    };
    let reduce_ms = match reduced {
        Some(_) => reduce_start.elapsed().as_secs_f64() * 1e3,
        None => 0.0,
    };
    let target = reduced.as_ref().unwrap_or(ctx);
    let lattice = if pipeline == Pipeline::RawNextclosure {
        build_lattice_nextclosure_capped(target, cfg.concept_cap)
    } else {
        build_lattice_addintent_capped(target, cfg.concept_cap)
    };
    Ok((reduce_ms, lattice))
}

fn run_group(
    cfg: &BenchConfig,
    lexicon: Option<&Lexicon>,
    pipeline: Pipeline,
    attributes: usize,
    density: f64,
) -> Result<Vec<BenchRecord>> {
    // One untimed warm-up per group soaks up first-touch noise.
    let warm_ctx =
        FormalContext::random(cfg.num_objects, attributes, density, cell_seed(cfg.seed, attributes, density, 0))?;
    match run_pipeline(pipeline, cfg, lexicon, &warm_ctx)? {
        (_, Ok(_)) | (_, Err(Error::Capacity { .. })) => {}
        (_, Err(e)) => return Err(e),
    }

    let mut records = Vec::with_capacity(cfg.repeats);
    for repeat in 0..cfg.repeats {
        let seed = cell_seed(cfg.seed, attributes, density, repeat);
        let ctx = FormalContext::random(cfg.num_objects, attributes, density, seed)?;
        let build_start = Instant::now();
        let (reduce_ms, lattice) = run_pipeline(pipeline, cfg, lexicon, &ctx)?;
        let mut record = BenchRecord {
            pipeline,
            objects: cfg.num_objects,
            attributes,
            density,
            seed,
            reduce_ms,
            build_ms: None,
            total_ms: None,
            concepts: None,
            edges: None,
        };
        match lattice {
            Ok(lat) => {
                let build_ms = build_start.elapsed().as_secs_f64() * 1e3 - reduce_ms;
                record.build_ms = Some(build_ms);
                record.total_ms = Some(reduce_ms + build_ms);
                record.concepts = Some(lat.concepts.len());
                record.edges = Some(lat.covers.len());
            }
            Err(e) if e.is_capacity() => {}
            Err(e) => return Err(e),
        }
        records.push(record);
    }
    Ok(records)
}

/// Runs every configured (pipeline, attribute count, density, repeat)
/// cell and returns the records in deterministic order: pipelines in
/// config order, then the attribute sweep, then densities, then repeats.
///
/// Contexts are derived from [`cell_seed`], so two runs of the same
/// config differ only in wall-clock fields, and each pipeline times the
/// identical context in a given cell.
pub fn run_benchmark(cfg: &BenchConfig, lexicon: Option<&Lexicon>) -> Result<Vec<BenchRecord>> {
    cfg.validate()?;
    if lexicon.is_none() && cfg.pipelines.iter().any(|p| p.needs_lexicon()) {
        return Err(Error::input("the selected pipelines require a lexicon"));
    }

    let mut groups = Vec::new();
    for &pipeline in &cfg.pipelines {
        for &attributes in &cfg.attribute_sweep {
            for &density in &cfg.densities {
                if attributes <= cfg.attribute_cap(density) {
                    groups.push((pipeline, attributes, density));
                }
            }
        }
    }

    let results: Vec<Result<Vec<BenchRecord>>> = if cfg.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::input(format!("could not start {} worker threads: {e}", cfg.threads)))?;
        pool.install(|| {
            use rayon::prelude::*;
            groups
                .par_iter()
                .map(|&(p, m, d)| run_group(cfg, lexicon, p, m, d))
                .collect()
        })
    } else {
        groups.iter().map(|&(p, m, d)| run_group(cfg, lexicon, p, m, d)).collect()
    };

    let mut records = Vec::new();
    for group in results {
        records.extend(group?);
    }
    Ok(records)
}

pub const RECORDS_CSV_HEADER: &str =
    "pipeline,objects,attributes,density,seed,reduce_ms,build_ms,total_ms,concepts,edges";

/// Marker written in place of time and count fields for cells where the
/// builder gave up at the concept cap.
const CAPPED: &str = "capped";

fn opt_field<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| CAPPED.to_string(), T::to_string)
}

pub fn records_to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(RECORDS_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.pipeline,
            r.objects,
            r.attributes,
            r.density,
            r.seed,
            r.reduce_ms,
            opt_field(&r.build_ms),
            opt_field(&r.total_ms),
            opt_field(&r.concepts),
            opt_field(&r.edges),
        ));
    }
    out
}

fn parse_opt<T: std::str::FromStr>(field: &str, name: &str, line: usize) -> Result<Option<T>> {
    if field == CAPPED {
        return Ok(None);
    }
    field
        .parse()
        .map(Some)
        .map_err(|_| Error::parse(line, format!("bad {name} field {field:?}")))
}

pub fn records_from_csv(text: &str) -> Result<Vec<BenchRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == RECORDS_CSV_HEADER => {}
        other => {
            return Err(Error::parse(
                1,
                format!("expected header {RECORDS_CSV_HEADER:?}, found {:?}", other.map(|(_, h)| h)),
            ))
        }
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(Error::parse(line_no, format!("expected 10 fields, found {}", fields.len())));
        }
        fn num<T: std::str::FromStr>(fields: &[&str], i: usize, name: &str, line: usize) -> Result<T> {
            fields[i]
                .parse()
                .map_err(|_| Error::parse(line, format!("bad {name} field {:?}", fields[i])))
        }
        records.push(BenchRecord {
            pipeline: fields[0]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("unknown pipeline {:?}", fields[0])))?,
            objects: num(&fields, 1, "objects", line_no)?,
            attributes: num(&fields, 2, "attributes", line_no)?,
            density: num(&fields, 3, "density", line_no)?,
            seed: num(&fields, 4, "seed", line_no)?,
            reduce_ms: num(&fields, 5, "reduce_ms", line_no)?,
            build_ms: parse_opt(fields[6], "build_ms", line_no)?,
            total_ms: parse_opt(fields[7], "total_ms", line_no)?,
            concepts: parse_opt(fields[8], "concepts", line_no)?,
            edges: parse_opt(fields[9], "edges", line_no)?,
        });
    }
    Ok(records)
}

/// Paired t-test verdict for one pipeline pair on total runtime.
#[derive(Clone, Debug, PartialEq)]
pub struct SignificanceRow {
    pub pipeline_a: Pipeline,
    pub pipeline_b: Pipeline,
    pub metric: &'static str,
    pub t: f64,
    pub df: usize,
    pub p: f64,
    pub significant: bool,
}

/// Compares every pair of pipelines appearing in `records` with a paired
/// t-test on `total_ms`, pairing cells by (objects, attributes, density,
/// seed). Cells capped on either side are excluded pairwise; beyond
/// that, the two pipelines must cover exactly the same cells.
pub fn significance_report(records: &[BenchRecord]) -> Result<Vec<SignificanceRow>> {
    use std::collections::BTreeMap;
    type CellKey = (usize, usize, u64, u64);

    let mut pipelines: Vec<Pipeline> = Vec::new();
    let mut by_pipeline: BTreeMap<usize, BTreeMap<CellKey, Option<f64>>> = BTreeMap::new();
    for r in records {
        let idx = match pipelines.iter().position(|&p| p == r.pipeline) {
            Some(i) => i,
            None => {
                pipelines.push(r.pipeline);
                pipelines.len() - 1
            }
        };
        let key = (r.objects, r.attributes, r.density.to_bits(), r.seed);
        if by_pipeline.entry(idx).or_default().insert(key, r.total_ms).is_some() {
            return Err(Error::input(format!(
                "duplicate cell for pipeline {}: attributes {}, density {}, seed {}",
                r.pipeline, r.attributes, r.density, r.seed
            )));
        }
    }

    let mut rows = Vec::new();
    for a in 0..pipelines.len() {
        for b in (a + 1)..pipelines.len() {
            let cells_a = &by_pipeline[&a];
            let cells_b = &by_pipeline[&b];
            if cells_a.len() != cells_b.len() || cells_a.keys().ne(cells_b.keys()) {
                return Err(Error::input(format!(
                    "pipelines {} and {} cover different benchmark cells",
                    pipelines[a], pipelines[b]
                )));
            }
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for (key, &ta) in cells_a {
                if let (Some(ta), Some(tb)) = (ta, cells_b[key]) {
                    xs.push(ta);
                    ys.push(tb);
                }
            }
            let test = paired_t_test(&xs, &ys)?;
            rows.push(SignificanceRow {
                pipeline_a: pipelines[a],
                pipeline_b: pipelines[b],
                metric: "total_ms",
                t: test.t,
                df: test.df,
                p: test.p,
                significant: test.p < 0.05,
            });
        }
    }
    Ok(rows)
}

pub const SIGNIFICANCE_CSV_HEADER: &str = "pipeline_a,pipeline_b,metric,t,df,p,significant";

pub fn significance_to_csv(rows: &[SignificanceRow]) -> String {
    let mut out = String::from(SIGNIFICANCE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.pipeline_a, r.pipeline_b, r.metric, r.t, r.df, r.p, r.significant
        ));
    }
    out
}

/// Aligned text rendering of a significance report.
pub fn significance_table(rows: &[SignificanceRow]) -> String {
    let mut out = format!(
        "{:<32} {:>10} {:>10} {:>4} {:>12} {:>12}\n",
        "comparison", "metric", "t", "df", "p-value", "significant"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<32} {:>10} {:>10.4} {:>4} {:>12.6} {:>12}\n",
            format!("{} vs {}", r.pipeline_a, r.pipeline_b),
            r.metric,
            r.t,
            r.df,
            r.p,
            if r.significant { "yes" } else { "no" }
        ));
    }
    out
}
