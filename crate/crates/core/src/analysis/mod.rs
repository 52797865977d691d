//! Comparing an original lattice against the lattice of a reduced
//! context: structural invariants and their deltas, isomorphism and
//! homeomorphism checks, and an order-preservation score.

pub mod isomorphism;
pub mod stats;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use isomorphism::{
    is_homeomorphic, is_homeomorphic_covers, is_isomorphic, is_isomorphic_covers, DEFAULT_NODE_CAP,
};
pub use stats::{
    cochran_sample_size, erf, ln_gamma, normal_cdf, normal_quantile, paired_t_test, reg_inc_beta,
    t_two_tailed_p, TTest,
};

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lattice::{invariants, ConceptLattice, LatticeInvariants};
use crate::reduce::MergeTrace;

/// Fraction of the original lattice's cover edges whose order survives
/// the reduction.
///
/// Every original concept is sent to the reduced side by translating its
/// intent labels through `trace` (dropped labels vanish) and closing the
/// result in the reduced context. A cover `c ⋖ p` counts as preserved
/// when the images still satisfy `image(c) ≤ image(p)`. A lattice with no
/// cover edges scores 1.0.
///
/// `original_ctx` must be the context `original` was built from; an
/// attribute whose translation is missing from `reduced_ctx` is an input
/// error.
pub fn similarity(
    original: &ConceptLattice,
    original_ctx: &FormalContext,
    reduced_ctx: &FormalContext,
    trace: &MergeTrace,
) -> Result<f64> {
    if original.concepts.is_empty() {
        return Ok(1.0);
    }
    if original.concepts[0].intent.universe() != original_ctx.num_attributes() {
        return Err(Error::input(format!(
            "lattice intents range over {} attributes but the context has {}",
            original.concepts[0].intent.universe(),
            original_ctx.num_attributes()
        )));
    }
    if original.covers.is_empty() {
        return Ok(1.0);
    }

    // Original attribute index -> reduced attribute index, if it survives.
    let mut mapping = Vec::with_capacity(original_ctx.num_attributes());
    for label in original_ctx.attributes() {
        match trace.translate_attribute(label) {
            None => mapping.push(None),
            Some(target) => match reduced_ctx.attribute_index(&target) {
                Some(j) => mapping.push(Some(j)),
                None => {
                    return Err(Error::input(format!(
                        "attribute {label:?} translates to {target:?}, which the reduced \
                         context does not contain"
                    )))
                }
            },
        }
    }

    let images: Vec<BitSet> = original
        .concepts
        .iter()
        .map(|c| {
            let mut attrs = BitSet::empty(reduced_ctx.num_attributes());
            for j in c.intent.iter() {
                if let Some(t) = mapping[j] {
                    attrs.insert(t);
                }
            }
            reduced_ctx.closure_of(&attrs)
        })
        .collect();

    // c ≤ p in concept order is intent(p) ⊆ intent(c).
    let preserved = original
        .covers
        .iter()
        .filter(|&&(c, p)| images[p].is_subset(&images[c]))
        .count();
    Ok(preserved as f64 / original.covers.len() as f64)
}

/// Signed differences between two invariant summaries (original minus
/// reduced), plus percentage reductions relative to the original.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantDelta {
    pub concept_count: i64,
    pub edge_count: i64,
    pub height: i64,
    pub width_lo: i64,
    pub width_hi: i64,
    pub concept_reduction_pct: f64,
    pub edge_reduction_pct: f64,
}

fn pct(a: usize, b: usize) -> f64 {
    if a == 0 {
        0.0
    } else {
        100.0 * (a as f64 - b as f64) / a as f64
    }
}

impl InvariantDelta {
    fn between(a: &LatticeInvariants, b: &LatticeInvariants) -> Self {
        let d = |x: usize, y: usize| x as i64 - y as i64;
        InvariantDelta {
            concept_count: d(a.concept_count, b.concept_count),
            edge_count: d(a.edge_count, b.edge_count),
            height: d(a.height, b.height),
            width_lo: d(a.width_lo, b.width_lo),
            width_hi: d(a.width_hi, b.width_hi),
            concept_reduction_pct: pct(a.concept_count, b.concept_count),
            edge_reduction_pct: pct(a.edge_count, b.edge_count),
        }
    }
}

/// Everything [`compare`] measures about an original/reduced lattice pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub invariants_a: LatticeInvariants,
    pub invariants_b: LatticeInvariants,
    pub delta: InvariantDelta,
    pub isomorphic: bool,
    pub homeomorphic: bool,
    pub similarity: f64,
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<12} {:>10} {:>10} {:>8}", "metric", "original", "reduced", "delta")?;
        let rows = [
            ("concepts", self.invariants_a.concept_count, self.invariants_b.concept_count),
            ("edges", self.invariants_a.edge_count, self.invariants_b.edge_count),
            ("height", self.invariants_a.height, self.invariants_b.height),
            ("width_lo", self.invariants_a.width_lo, self.invariants_b.width_lo),
            ("width_hi", self.invariants_a.width_hi, self.invariants_b.width_hi),
        ];
        for (name, a, b) in rows {
            writeln!(f, "{:<12} {:>10} {:>10} {:>8}", name, a, b, a as i64 - b as i64)?;
        }
        writeln!(f, "concept reduction: {:.1}%", self.delta.concept_reduction_pct)?;
        writeln!(f, "edge reduction: {:.1}%", self.delta.edge_reduction_pct)?;
        writeln!(f, "isomorphic: {}", if self.isomorphic { "yes" } else { "no" })?;
        writeln!(f, "homeomorphic: {}", if self.homeomorphic { "yes" } else { "no" })?;
        write!(f, "order similarity: {:.4}", self.similarity)
    }
}

/// Full comparison of an original lattice `a` against the lattice `b` of
/// the context that `trace` reduced `ctx_a` into.
pub fn compare(
    lat_a: &ConceptLattice,
    ctx_a: &FormalContext,
    lat_b: &ConceptLattice,
    ctx_b: &FormalContext,
    trace: &MergeTrace,
) -> Result<ComparisonReport> {
    let invariants_a = invariants(lat_a);
    let invariants_b = invariants(lat_b);
    Ok(ComparisonReport {
        invariants_a,
        invariants_b,
        delta: InvariantDelta::between(&invariants_a, &invariants_b),
        isomorphic: is_isomorphic(lat_a, lat_b)?,
        homeomorphic: is_homeomorphic(lat_a, lat_b)?,
        similarity: similarity(lat_a, ctx_a, ctx_b, trace)?,
    })
}
