//! Incremental lattice construction: objects are inserted one at a time and
//! the cover relation is maintained throughout, so no separate covering pass
//! is needed afterwards.

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lattice::{ConceptLattice, FormalConcept};

pub fn build(ctx: &FormalContext, cap: usize) -> Result<ConceptLattice> {
    let num_objects = ctx.num_objects();
    let num_attributes = ctx.num_attributes();

    let mut builder = Builder {
        cap,
        extents: Vec::new(),
        intents: Vec::new(),
        upper: Vec::new(),
        lower: Vec::new(),
        visited: Vec::new(),
        stamp: 0,
    };
    // Start from the one-concept lattice of the empty object set.
    let bottom = builder.push(BitSet::empty(num_objects), BitSet::full(num_attributes))?;

    for g in 0..num_objects {
        let concept = builder.add_intent(ctx.row(g).clone(), bottom)?;
        builder.add_object_upward(g, concept);
    }

    builder.into_lattice()
}

struct Builder {
    cap: usize,
    extents: Vec<BitSet>,
    intents: Vec<BitSet>,
    /// Upper covers (larger extents).
    upper: Vec<Vec<usize>>,
    /// Lower covers (smaller extents).
    lower: Vec<Vec<usize>>,
    visited: Vec<u64>,
    stamp: u64,
}

impl Builder {
    fn push(&mut self, extent: BitSet, intent: BitSet) -> Result<usize> {
        if self.extents.len() >= self.cap {
            return Err(Error::Capacity { reached: self.extents.len(), cap: self.cap });
        }
        self.extents.push(extent);
        self.intents.push(intent);
        self.upper.push(Vec::new());
        self.lower.push(Vec::new());
        self.visited.push(0);
        Ok(self.extents.len() - 1)
    }

    fn link(&mut self, child: usize, parent: usize) {
        self.upper[child].push(parent);
        self.lower[parent].push(child);
    }

    fn unlink(&mut self, child: usize, parent: usize) {
        self.upper[child].retain(|&p| p != parent);
        self.lower[parent].retain(|&c| c != child);
    }

    /// Walks upward from `start` to the greatest concept whose intent
    /// contains `intent`.
    fn maximal_concept(&self, intent: &BitSet, start: usize) -> usize {
        let mut current = start;
        'climb: loop {
            for &p in &self.upper[current] {
                if intent.is_subset(&self.intents[p]) {
                    current = p;
                    continue 'climb;
                }
            }
            return current;
        }
    }

    /// Inserts the concept with the given (closed) intent, recursively
    /// materializing any missing meets, and returns its index.
    fn add_intent(&mut self, intent: BitSet, generator: usize) -> Result<usize> {
        let generator = self.maximal_concept(&intent, generator);
        if self.intents[generator] == intent {
            return Ok(generator);
        }

        let candidates = self.upper[generator].clone();
        let mut new_parents: Vec<usize> = Vec::new();
        for mut candidate in candidates {
            if !self.intents[candidate].is_subset(&intent) {
                let meet = self.intents[candidate].and(&intent);
                candidate = self.add_intent(meet, candidate)?;
            }
            // Keep only the minimal concepts above the new one.
            let mut add = true;
            let mut i = 0;
            while i < new_parents.len() {
                let p = new_parents[i];
                if self.intents[candidate].is_subset(&self.intents[p]) {
                    add = false;
                    break;
                } else if self.intents[p].is_subset(&self.intents[candidate]) {
                    new_parents.swap_remove(i);
                } else {
                    i += 1;
                }
            }
            if add {
                new_parents.push(candidate);
            }
        }

        let new_extent = self.extents[generator].clone();
        let new_concept = self.push(new_extent, intent)?;
        for p in new_parents {
            self.unlink(generator, p);
            self.link(new_concept, p);
        }
        self.link(generator, new_concept);
        Ok(new_concept)
    }

    /// Adds object `g` to the extent of `start` and every concept above it.
    fn add_object_upward(&mut self, g: usize, start: usize) {
        self.stamp += 1;
        let mut stack = vec![start];
        self.visited[start] = self.stamp;
        while let Some(c) = stack.pop() {
            self.extents[c].insert(g);
            for &p in &self.upper[c] {
                if self.visited[p] != self.stamp {
                    self.visited[p] = self.stamp;
                    stack.push(p);
                }
            }
        }
    }

    fn into_lattice(self) -> Result<ConceptLattice> {
        let n = self.extents.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.intents[a].lectic_cmp(&self.intents[b]));
        let mut new_index = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }

        let mut concepts = Vec::with_capacity(n);
        for &old in &order {
            concepts.push(FormalConcept {
                extent: self.extents[old].clone(),
                intent: self.intents[old].clone(),
            });
        }
        let mut covers = Vec::new();
        for (child, parents) in self.upper.iter().enumerate() {
            for &parent in parents {
                covers.push((new_index[child], new_index[parent]));
            }
        }
        ConceptLattice::assemble(concepts, covers)
    }
}
