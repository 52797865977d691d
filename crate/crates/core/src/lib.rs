//! Formal concept analysis on binary contexts: context construction from
//! head/predicate corpora, lexical and frequency-based context reduction,
//! concept lattice construction, structural invariants and lattice
//! comparison, and reproducible benchmarks of reduce-then-build pipelines.

pub mod analysis;
pub mod bench;
pub mod bitset;
pub mod context;
pub mod corpus;
pub mod error;
pub mod io;
pub mod lattice;
pub mod lexicon;
pub mod reduce;

pub use analysis::ComparisonReport;
pub use bitset::BitSet;
pub use context::FormalContext;
pub use error::{Error, Result};
pub use lattice::{ConceptLattice, FormalConcept, LatticeInvariants};
pub use lexicon::Lexicon;
pub use reduce::MergeTrace;
