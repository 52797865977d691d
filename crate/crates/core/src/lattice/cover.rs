//! The covering relation of a concept set: `(child, parent)` pairs of
//! extent inclusion with no concept strictly between.

use crate::error::{Error, Result};
use crate::lattice::FormalConcept;

/// Computes all cover pairs of a complete concept set.
///
/// Candidates are scanned in order of extent cardinality: a strict superset
/// is a cover unless a smaller, already-confirmed parent sits inside it,
/// which prunes most subset checks without comparing all pairs against all.
pub fn covering_relation(concepts: &[FormalConcept]) -> Result<Vec<(usize, usize)>> {
    let n = concepts.len();
    {
        let mut seen = std::collections::HashSet::with_capacity(n);
        for c in concepts {
            if !seen.insert(&c.extent) {
                return Err(Error::input("duplicate concept in input"));
            }
        }
    }

    // Indices grouped by extent cardinality, ascending.
    let mut by_size: Vec<(usize, usize)> = concepts
        .iter()
        .enumerate()
        .map(|(i, c)| (c.extent.count(), i))
        .collect();
    by_size.sort_unstable();

    let mut covers = Vec::new();
    let mut parents: Vec<usize> = Vec::new();
    for &(size, child) in &by_size {
        parents.clear();
        for &(candidate_size, candidate) in &by_size {
            if candidate_size <= size {
                continue;
            }
            if !concepts[child].extent.is_subset(&concepts[candidate].extent) {
                continue;
            }
            if parents.iter().any(|&p| concepts[p].extent.is_subset(&concepts[candidate].extent)) {
                continue;
            }
            parents.push(candidate);
            covers.push((child, candidate));
        }
    }
    covers.sort_unstable();
    Ok(covers)
}
