//! Concept enumeration by closure jumping: starting from the closure of the
//! empty attribute set, repeatedly compute the lectically next closed intent
//! until the full attribute set is reached.

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lattice::FormalConcept;

pub fn enumerate(ctx: &FormalContext, cap: usize) -> Result<Vec<FormalConcept>> {
    let num_attributes = ctx.num_attributes();
    let mut concepts = Vec::new();

    let mut extent = ctx.extent_of(&BitSet::empty(num_attributes));
    let mut intent = ctx.intent_of(&extent);
    loop {
        if concepts.len() >= cap {
            return Err(Error::Capacity { reached: concepts.len(), cap });
        }
        concepts.push(FormalConcept { extent: extent.clone(), intent: intent.clone() });
        match next_closed(ctx, &intent) {
            Some((e, i)) => {
                extent = e;
                intent = i;
            }
            None => break,
        }
    }
    Ok(concepts)
}

/// The lectically smallest closed intent greater than `current`, with its
/// extent, or `None` once the full intent has been reached.
fn next_closed(ctx: &FormalContext, current: &BitSet) -> Option<(BitSet, BitSet)> {
    let num_attributes = ctx.num_attributes();
    let mut work = current.clone();
    for i in (0..num_attributes).rev() {
        if work.contains(i) {
            work.remove(i);
        } else {
            // Candidate prefix (current ∩ {0..i-1}) ∪ {i}.
            work.insert(i);
            let extent = ctx.extent_of(&work);
            let closed = ctx.intent_of(&extent);
            // Canonical iff closing added no attribute before i.
            let canonical = match closed.difference_min(&work) {
                None => true,
                Some(min) => min > i,
            };
            if canonical {
                return Some((extent, closed));
            }
            work.remove(i);
        }
    }
    None
}
