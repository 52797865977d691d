//! Context reduction: lexical merging of related rows/columns (bitwise
//! OR), frequency-based filtering, and the two hybrid orderings. Every
//! reduction returns a [`MergeTrace`] that replays to the same output.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lexicon::{most_generic, Lexicon, Relation};

/// Pair-scan strategy for the lexical reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Repeatedly merge the first related pair found by a reverse-order
    /// pair scan, restarting after every merge.
    SingleDual,
    /// For each pivot in ascending order, merge the pivot with everything
    /// related to it in one step.
    Multidisciplinary,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single-dual" | "single_dual" => Ok(Strategy::SingleDual),
            "multidisciplinary" => Ok(Strategy::Multidisciplinary),
            other => Err(Error::input(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Which reduction produced a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReduceMethod {
    Wordnet,
    Frequency,
    WnThenFreq,
    FreqThenWn,
}

impl FromStr for ReduceMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wordnet" => Ok(ReduceMethod::Wordnet),
            "frequency" => Ok(ReduceMethod::Frequency),
            "wn-then-freq" | "wn_then_freq" => Ok(ReduceMethod::WnThenFreq),
            "freq-then-wn" | "freq_then_wn" => Ok(ReduceMethod::FreqThenWn),
            other => Err(Error::input(format!("unknown reduce method {other:?}"))),
        }
    }
}

/// Ordering of the two stages in a hybrid reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HybridOrder {
    WnThenFreq,
    FreqThenWn,
}

/// One merge action: the labels that were combined and the label of the
/// resulting row/column. Outputs of earlier groups may appear as inputs
/// of later ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeGroup {
    pub inputs: Vec<String>,
    pub output: String,
}

/// Parameters the reduction ran with. Fields a method does not use hold
/// neutral values (zero depths, zero threshold, multidisciplinary).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceParams {
    pub hyper_depth: u32,
    pub hypo_depth: u32,
    pub threshold: f64,
    pub strategy: Strategy,
}

/// Complete audit record of a reduction. Replaying it against the input
/// context reproduces the output context exactly; see [`MergeTrace::apply`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MergeTrace {
    pub method: ReduceMethod,
    pub parameters: TraceParams,
    pub object_merges: Vec<MergeGroup>,
    pub attribute_merges: Vec<MergeGroup>,
    pub removed_objects: Vec<String>,
    pub removed_attributes: Vec<String>,
}

impl MergeTrace {
    fn new(method: ReduceMethod, parameters: TraceParams) -> Self {
        MergeTrace {
            method,
            parameters,
            object_merges: Vec::new(),
            attribute_merges: Vec::new(),
            removed_objects: Vec::new(),
            removed_attributes: Vec::new(),
        }
    }

    /// Replays the recorded actions against `ctx`: merges and removals are
    /// applied by label, in the stage order the method used.
    pub fn apply(&self, ctx: &FormalContext) -> Result<FormalContext> {
        let mut current = ctx.clone();
        match self.method {
            ReduceMethod::Wordnet => {
                current = self.replay_merges(&current)?;
            }
            ReduceMethod::Frequency => {
                current = self.replay_removals(&current)?;
            }
            ReduceMethod::WnThenFreq => {
                current = self.replay_merges(&current)?;
                current = self.replay_removals(&current)?;
            }
            ReduceMethod::FreqThenWn => {
                current = self.replay_removals(&current)?;
                current = self.replay_merges(&current)?;
            }
        }
        Ok(current)
    }

    fn replay_merges(&self, ctx: &FormalContext) -> Result<FormalContext> {
        let mut current = ctx.clone();
        for (groups, axis) in [
            (&self.object_merges, Axis::Objects),
            (&self.attribute_merges, Axis::Attributes),
        ] {
            for group in groups {
                let indices = group
                    .inputs
                    .iter()
                    .map(|label| {
                        axis.index_of(&current, label).ok_or_else(|| {
                            Error::input(format!("trace label {label:?} not found in context"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                current = axis.merge(&current, &indices, &group.output)?;
            }
        }
        Ok(current)
    }

    fn replay_removals(&self, ctx: &FormalContext) -> Result<FormalContext> {
        let keep = |labels: &[String], removed: &[String]| -> Result<Vec<usize>> {
            for r in removed {
                if !labels.contains(r) {
                    return Err(Error::input(format!("trace label {r:?} not found in context")));
                }
            }
            Ok((0..labels.len()).filter(|&i| !removed.contains(&labels[i])).collect())
        };
        let rows = keep(ctx.objects(), &self.removed_objects)?;
        let cols = keep(ctx.attributes(), &self.removed_attributes)?;
        Ok(select(ctx, &rows, &cols))
    }

    /// Where an original attribute label ends up: the final label it is
    /// merged into, or `None` if the reduction removed it.
    pub fn translate_attribute(&self, label: &str) -> Option<String> {
        let removed = |l: &str| self.removed_attributes.iter().any(|r| r == l);
        let mut current = label.to_string();
        if matches!(self.method, ReduceMethod::Frequency | ReduceMethod::FreqThenWn)
            && removed(&current)
        {
            return None;
        }
        for group in &self.attribute_merges {
            if group.inputs.contains(&current) {
                current = group.output.clone();
            }
        }
        if matches!(self.method, ReduceMethod::WnThenFreq) && removed(&current) {
            return None;
        }
        Some(current)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Axis {
    Objects,
    Attributes,
}

impl Axis {
    fn labels<'a>(self, ctx: &'a FormalContext) -> &'a [String] {
        match self {
            Axis::Objects => ctx.objects(),
            Axis::Attributes => ctx.attributes(),
        }
    }

    fn index_of(self, ctx: &FormalContext, label: &str) -> Option<usize> {
        match self {
            Axis::Objects => ctx.object_index(label),
            Axis::Attributes => ctx.attribute_index(label),
        }
    }

    fn merge(self, ctx: &FormalContext, group: &[usize], label: &str) -> Result<FormalContext> {
        match self {
            Axis::Objects => merge_rows(ctx, group, label),
            Axis::Attributes => merge_cols(ctx, group, label),
        }
    }
}

fn checked_group(group: &[usize], len: usize) -> Result<Vec<usize>> {
    let mut idx = group.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.len() < 2 {
        return Err(Error::input("merge group needs at least two distinct members"));
    }
    if let Some(&bad) = idx.iter().find(|&&i| i >= len) {
        return Err(Error::input(format!("merge index {bad} out of range (size {len})")));
    }
    Ok(idx)
}

/// Replaces the object rows in `group` by their bitwise OR, labeled
/// `label` and placed at the position of the group's first member.
pub fn merge_rows(ctx: &FormalContext, group: &[usize], label: &str) -> Result<FormalContext> {
    let idx = checked_group(group, ctx.num_objects())?;
    for (g, existing) in ctx.objects().iter().enumerate() {
        if !idx.contains(&g) && existing == label {
            return Err(Error::input(format!("merged label {label:?} collides with a survivor")));
        }
    }
    let mut merged = ctx.row(idx[0]).clone();
    for &g in &idx[1..] {
        merged.union_with(ctx.row(g));
    }
    let mut objects = Vec::with_capacity(ctx.num_objects() - idx.len() + 1);
    let mut rows = Vec::with_capacity(objects.capacity());
    for g in 0..ctx.num_objects() {
        if g == idx[0] {
            objects.push(label.to_string());
            rows.push(merged.clone());
        } else if !idx.contains(&g) {
            objects.push(ctx.objects()[g].clone());
            rows.push(ctx.row(g).clone());
        }
    }
    FormalContext::new(objects, ctx.attributes().to_vec(), rows)
}

/// Dual of [`merge_rows`] for attribute columns.
pub fn merge_cols(ctx: &FormalContext, group: &[usize], label: &str) -> Result<FormalContext> {
    let idx = checked_group(group, ctx.num_attributes())?;
    for (j, existing) in ctx.attributes().iter().enumerate() {
        if !idx.contains(&j) && existing == label {
            return Err(Error::input(format!("merged label {label:?} collides with a survivor")));
        }
    }
    let kept: Vec<usize> =
        (0..ctx.num_attributes()).filter(|j| *j == idx[0] || !idx.contains(j)).collect();
    let mut attributes = Vec::with_capacity(kept.len());
    for &j in &kept {
        attributes.push(if j == idx[0] { label.to_string() } else { ctx.attributes()[j].clone() });
    }
    let rows = (0..ctx.num_objects())
        .map(|g| {
            let row = ctx.row(g);
            let mut out = BitSet::empty(kept.len());
            for (new_j, &old_j) in kept.iter().enumerate() {
                let value = if old_j == idx[0] {
                    idx.iter().any(|&k| row.contains(k))
                } else {
                    row.contains(old_j)
                };
                if value {
                    out.insert(new_j);
                }
            }
            out
        })
        .collect();
    FormalContext::new(ctx.objects().to_vec(), attributes, rows)
}

/// Keeps only the given row/column indices (in order).
fn select(ctx: &FormalContext, rows: &[usize], cols: &[usize]) -> FormalContext {
    let objects = rows.iter().map(|&g| ctx.objects()[g].clone()).collect();
    let attributes = cols.iter().map(|&j| ctx.attributes()[j].clone()).collect();
    let bit_rows = rows
        .iter()
        .map(|&g| {
            let row = ctx.row(g);
            let mut out = BitSet::empty(cols.len());
            for (new_j, &old_j) in cols.iter().enumerate() {
                if row.contains(old_j) {
                    out.insert(new_j);
                }
            }
            out
        })
        .collect();
    FormalContext::new(objects, attributes, bit_rows)
        .expect("selection preserves label validity")
}

/// How two possibly-composite labels relate: components (split on `/`)
/// are compared pairwise and the strongest relation wins (synonymy, then
/// second-generalizes-first, then first-generalizes-second).
fn label_relation(lex: &Lexicon, a: &str, b: &str, hyper_depth: u32, hypo_depth: u32) -> Relation {
    let mut second = false;
    let mut first = false;
    for ca in a.split('/') {
        for cb in b.split('/') {
            match lex.hypernym_related(ca, cb, hyper_depth, hypo_depth) {
                Relation::Synonym => return Relation::Synonym,
                Relation::SecondGeneralizesFirst => second = true,
                Relation::FirstGeneralizesSecond => first = true,
                Relation::None => {}
            }
        }
    }
    if second {
        Relation::SecondGeneralizesFirst
    } else if first {
        Relation::FirstGeneralizesSecond
    } else {
        Relation::None
    }
}

/// Folds a merge group into its output label, starting from the pivot.
/// If depth limits leave some accumulated pair unrelated, the labels are
/// joined like synonyms to stay total.
fn group_label(lex: &Lexicon, members: &[&str], hyper_depth: u32, hypo_depth: u32) -> String {
    let mut acc = members[0].to_string();
    for &m in &members[1..] {
        let rel = match label_relation(lex, &acc, m, hyper_depth, hypo_depth) {
            Relation::None => Relation::Synonym,
            rel => rel,
        };
        acc = most_generic(&acc, m, rel).expect("relation is never None here");
    }
    acc
}

fn merge_pass(
    ctx: FormalContext,
    lex: &Lexicon,
    hyper_depth: u32,
    hypo_depth: u32,
    strategy: Strategy,
    axis: Axis,
) -> Result<(FormalContext, Vec<MergeGroup>)> {
    let mut current = ctx;
    let mut groups = Vec::new();
    match strategy {
        Strategy::SingleDual => 'scan: loop {
            let labels = axis.labels(&current).to_vec();
            let n = labels.len();
            for i in (0..n.saturating_sub(1)).rev() {
                for j in ((i + 1)..n).rev() {
                    let rel = label_relation(lex, &labels[i], &labels[j], hyper_depth, hypo_depth);
                    if rel != Relation::None {
                        let output = most_generic(&labels[i], &labels[j], rel)?;
                        current = axis.merge(&current, &[i, j], &output)?;
                        groups.push(MergeGroup {
                            inputs: vec![labels[i].clone(), labels[j].clone()],
                            output,
                        });
                        continue 'scan;
                    }
                }
            }
            break;
        },
        Strategy::Multidisciplinary => {
            let mut pivot = 0;
            while pivot < axis.labels(&current).len() {
                let labels = axis.labels(&current).to_vec();
                let related: Vec<usize> = (0..labels.len())
                    .filter(|&j| {
                        j != pivot
                            && label_relation(lex, &labels[pivot], &labels[j], hyper_depth, hypo_depth)
                                != Relation::None
                    })
                    .collect();
                if related.is_empty() {
                    pivot += 1;
                    continue;
                }
                let mut group: Vec<usize> = related.clone();
                group.push(pivot);
                group.sort_unstable();
                let mut ordered: Vec<&str> = vec![&labels[pivot]];
                ordered.extend(related.iter().map(|&j| labels[j].as_str()));
                let output = group_label(lex, &ordered, hyper_depth, hypo_depth);
                current = axis.merge(&current, &group, &output)?;
                groups.push(MergeGroup {
                    inputs: group.iter().map(|&g| labels[g].clone()).collect(),
                    output,
                });
                pivot = group[0] + 1;
            }
        }
    }
    Ok((current, groups))
}

/// Merges lexically related objects, then lexically related attributes.
pub fn wordnet_reduce(
    ctx: &FormalContext,
    lex: &Lexicon,
    hyper_depth: u32,
    hypo_depth: u32,
    strategy: Strategy,
) -> Result<(FormalContext, MergeTrace)> {
    let params =
        TraceParams { hyper_depth, hypo_depth, threshold: 0.0, strategy };
    let mut trace = MergeTrace::new(ReduceMethod::Wordnet, params);
    let (current, object_merges) =
        merge_pass(ctx.clone(), lex, hyper_depth, hypo_depth, strategy, Axis::Objects)?;
    let (current, attribute_merges) =
        merge_pass(current, lex, hyper_depth, hypo_depth, strategy, Axis::Attributes)?;
    trace.object_merges = object_merges;
    trace.attribute_merges = attribute_merges;
    Ok((current, trace))
}

/// Drops every object and attribute whose frequency in the INPUT context
/// is not strictly above the threshold. Both filters are applied against
/// the input frequencies in one simultaneous step; frequencies are not
/// recomputed as rows and columns disappear.
pub fn freq_reduce(ctx: &FormalContext, threshold: f64) -> Result<(FormalContext, MergeTrace)> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::input(format!("threshold {threshold} outside [0, 1]")));
    }
    let n = ctx.num_objects();
    let m = ctx.num_attributes();
    let row_kept: Vec<usize> = (0..n)
        .filter(|&g| m > 0 && ctx.row(g).count() as f64 / m as f64 > threshold)
        .collect();
    let col_kept: Vec<usize> = (0..m)
        .filter(|&j| n > 0 && ctx.col(j).count() as f64 / n as f64 > threshold)
        .collect();
    let params = TraceParams {
        hyper_depth: 0,
        hypo_depth: 0,
        threshold,
        strategy: Strategy::Multidisciplinary,
    };
    let mut trace = MergeTrace::new(ReduceMethod::Frequency, params);
    trace.removed_objects = (0..n)
        .filter(|g| !row_kept.contains(g))
        .map(|g| ctx.objects()[g].clone())
        .collect();
    trace.removed_attributes = (0..m)
        .filter(|j| !col_kept.contains(j))
        .map(|j| ctx.attributes()[j].clone())
        .collect();
    Ok((select(ctx, &row_kept, &col_kept), trace))
}

/// Runs the lexical and frequency reductions in the requested order and
/// concatenates their traces.
pub fn hybrid_reduce(
    ctx: &FormalContext,
    lex: &Lexicon,
    hyper_depth: u32,
    hypo_depth: u32,
    threshold: f64,
    strategy: Strategy,
    order: HybridOrder,
) -> Result<(FormalContext, MergeTrace)> {
    let params = TraceParams { hyper_depth, hypo_depth, threshold, strategy };
    match order {
        HybridOrder::WnThenFreq => {
            let (mid, wn) = wordnet_reduce(ctx, lex, hyper_depth, hypo_depth, strategy)?;
            let (out, freq) = freq_reduce(&mid, threshold)?;
            let mut trace = MergeTrace::new(ReduceMethod::WnThenFreq, params);
            trace.object_merges = wn.object_merges;
            trace.attribute_merges = wn.attribute_merges;
            trace.removed_objects = freq.removed_objects;
            trace.removed_attributes = freq.removed_attributes;
            Ok((out, trace))
        }
        HybridOrder::FreqThenWn => {
            let (mid, freq) = freq_reduce(ctx, threshold)?;
            let (out, wn) = wordnet_reduce(&mid, lex, hyper_depth, hypo_depth, strategy)?;
            let mut trace = MergeTrace::new(ReduceMethod::FreqThenWn, params);
            trace.removed_objects = freq.removed_objects;
            trace.removed_attributes = freq.removed_attributes;
            trace.object_merges = wn.object_merges;
            trace.attribute_merges = wn.attribute_merges;
            Ok((out, trace))
        }
    }
}

/// Dispatches to the reduction named by `method`. Lexical methods require
/// a lexicon.
pub fn reduce_with_method(
    ctx: &FormalContext,
    method: ReduceMethod,
    lex: Option<&Lexicon>,
    hyper_depth: u32,
    hypo_depth: u32,
    threshold: f64,
    strategy: Strategy,
) -> Result<(FormalContext, MergeTrace)> {
    let need_lex = || lex.ok_or_else(|| Error::input("this reduce method requires a lexicon"));
    match method {
        ReduceMethod::Wordnet => wordnet_reduce(ctx, need_lex()?, hyper_depth, hypo_depth, strategy),
        ReduceMethod::Frequency => freq_reduce(ctx, threshold),
        ReduceMethod::WnThenFreq => hybrid_reduce(
            ctx,
            need_lex()?,
            hyper_depth,
            hypo_depth,
            threshold,
            strategy,
            HybridOrder::WnThenFreq,
        ),
        ReduceMethod::FreqThenWn => hybrid_reduce(
            ctx,
            need_lex()?,
            hyper_depth,
            hypo_depth,
            threshold,
            strategy,
            HybridOrder::FreqThenWn,
        ),
    }
}
