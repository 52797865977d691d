//! Concept lattices: enumeration, incremental construction with cover
//! edges, structural invariants, and DOT/JSON export.

mod add_intent;
mod cover;
mod export;
mod invariants;
mod next_closure;

pub use cover::covering_relation;
pub use export::{export_dot, export_json, parse_json_covers, Labeling};
pub use invariants::{invariants, invariants_from_covers, LatticeInvariants};

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};

/// Default ceiling on enumerated concepts; construction aborts with a
/// capacity error instead of exhausting memory on dense inputs.
pub const DEFAULT_CONCEPT_CAP: usize = 1 << 20;

/// A formal concept: a maximal extent/intent pair, each closed under
/// derivation in its context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalConcept {
    pub extent: BitSet,
    pub intent: BitSet,
}

/// A concept lattice: all concepts of a context ordered by extent
/// inclusion, with the covering relation made explicit.
///
/// Concepts are kept in lectic order of intents, so the top concept (full
/// extent) is first and the bottom concept (full intent) is last. Cover
/// pairs are `(child, parent)` with the child's extent strictly contained
/// in the parent's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConceptLattice {
    pub concepts: Vec<FormalConcept>,
    pub covers: Vec<(usize, usize)>,
    pub top: usize,
    pub bottom: usize,
}

impl ConceptLattice {
    /// Assembles a lattice from a complete concept set, sorting lectically
    /// and computing the covering relation from scratch.
    pub fn from_concepts(mut concepts: Vec<FormalConcept>) -> Result<Self> {
        if concepts.is_empty() {
            return Err(Error::input("a concept lattice needs at least one concept"));
        }
        concepts.sort_by(|a, b| a.intent.lectic_cmp(&b.intent));
        let covers = covering_relation(&concepts)?;
        Self::assemble(concepts, covers)
    }

    fn assemble(concepts: Vec<FormalConcept>, mut covers: Vec<(usize, usize)>) -> Result<Self> {
        covers.sort_unstable();
        covers.dedup();
        let num_objects = concepts[0].extent.universe();
        let num_attributes = concepts[0].intent.universe();
        let full_extent = BitSet::full(num_objects);
        let full_intent = BitSet::full(num_attributes);
        let top = concepts
            .iter()
            .position(|c| c.extent == full_extent)
            .ok_or_else(|| Error::input("concept set has no top (full-extent) concept"))?;
        let bottom = concepts
            .iter()
            .position(|c| c.intent == full_intent)
            .ok_or_else(|| Error::input("concept set has no bottom (full-intent) concept"))?;
        Ok(ConceptLattice { concepts, covers, top, bottom })
    }

    pub fn concept_count(&self) -> usize {
        self.concepts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.covers.len()
    }

    /// Upper-cover adjacency: `parents[i]` lists the concepts covering `i`.
    pub fn parents(&self) -> Vec<Vec<usize>> {
        let mut parents = vec![Vec::new(); self.concepts.len()];
        for &(c, p) in &self.covers {
            parents[c].push(p);
        }
        parents
    }

    /// Lower-cover adjacency: `children[i]` lists the concepts covered by `i`.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.concepts.len()];
        for &(c, p) in &self.covers {
            children[p].push(c);
        }
        children
    }
}

/// All concepts of `ctx` in lectic order of intents, via closure-jumping
/// enumeration. Uses the default concept cap.
pub fn enumerate_concepts(ctx: &FormalContext) -> Result<Vec<FormalConcept>> {
    next_closure::enumerate(ctx, DEFAULT_CONCEPT_CAP)
}

/// As [`enumerate_concepts`] with an explicit concept cap.
pub fn enumerate_concepts_capped(ctx: &FormalContext, cap: usize) -> Result<Vec<FormalConcept>> {
    next_closure::enumerate(ctx, cap)
}

/// Builds the lattice object-by-object, maintaining cover edges
/// incrementally. The preferred builder for large contexts.
pub fn build_lattice_addintent(ctx: &FormalContext) -> Result<ConceptLattice> {
    add_intent::build(ctx, DEFAULT_CONCEPT_CAP)
}

/// As [`build_lattice_addintent`] with an explicit concept cap.
pub fn build_lattice_addintent_capped(ctx: &FormalContext, cap: usize) -> Result<ConceptLattice> {
    add_intent::build(ctx, cap)
}

/// Builds the lattice by enumerating concepts first and then computing the
/// covering relation pairwise.
pub fn build_lattice_nextclosure(ctx: &FormalContext) -> Result<ConceptLattice> {
    build_lattice_nextclosure_capped(ctx, DEFAULT_CONCEPT_CAP)
}

/// As [`build_lattice_nextclosure`] with an explicit concept cap.
pub fn build_lattice_nextclosure_capped(ctx: &FormalContext, cap: usize) -> Result<ConceptLattice> {
    let concepts = next_closure::enumerate(ctx, cap)?;
    let covers = covering_relation(&concepts)?;
    ConceptLattice::assemble(concepts, covers)
}

#[cfg(test)]
mod tests;
