//! Structural invariants of a lattice: size, edge count, height, and a
//! width interval.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::lattice::ConceptLattice;

/// Shape summary of a lattice.
///
/// `height` counts the nodes on a longest bottom-to-top chain. `width_lo` is
/// the size of the largest rank level (ranking by longest distance from the
/// bottom), a cheap antichain witness; `width_hi` is the exact maximum
/// antichain size, so `width_lo <= width_hi` always holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeInvariants {
    pub concept_count: usize,
    pub edge_count: usize,
    pub height: usize,
    pub width_lo: usize,
    pub width_hi: usize,
}

pub fn invariants(lattice: &ConceptLattice) -> LatticeInvariants {
    invariants_from_covers(lattice.concepts.len(), &lattice.covers)
}

/// Invariants computed from the cover digraph alone; `covers` are
/// `(child, parent)` pairs over `n` nodes.
pub fn invariants_from_covers(n: usize, covers: &[(usize, usize)]) -> LatticeInvariants {
    if n == 0 {
        return LatticeInvariants {
            concept_count: 0,
            edge_count: 0,
            height: 0,
            width_lo: 0,
            width_hi: 0,
        };
    }

    let order = topological_order(n, covers);
    let rank = ranks(n, covers, &order);

    let height = rank.iter().max().copied().unwrap_or(0) + 1;
    let mut level_sizes = vec![0usize; height];
    for &r in &rank {
        level_sizes[r] += 1;
    }
    let width_lo = level_sizes.iter().max().copied().unwrap_or(0);

    // Strict ancestors of every node, walking down from the top.
    let mut above = vec![BitSet::empty(n); n];
    let mut parents = vec![Vec::new(); n];
    for &(c, p) in covers {
        parents[c].push(p);
    }
    for &v in order.iter().rev() {
        let mut set = BitSet::empty(n);
        for &p in &parents[v] {
            set.insert(p);
            set.union_with(&above[p]);
        }
        above[v] = set;
    }

    // Minimum chain cover = n - maximum matching on the comparability
    // graph; by duality that chain count equals the maximum antichain.
    let width_hi = n - hopcroft_karp(n, &above);

    LatticeInvariants {
        concept_count: n,
        edge_count: covers.len(),
        height,
        width_lo,
        width_hi,
    }
}

/// Kahn's algorithm over child->parent edges; bottoms come first.
fn topological_order(n: usize, covers: &[(usize, usize)]) -> Vec<usize> {
    let mut indegree = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for &(c, p) in covers {
        indegree[p] += 1;
        out[c].push(p);
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop() {
        order.push(v);
        for &p in &out[v] {
            indegree[p] -= 1;
            if indegree[p] == 0 {
                queue.push(p);
            }
        }
    }
    debug_assert_eq!(order.len(), n, "cover relation must be acyclic");
    order
}

/// Longest edge distance from any minimal node.
fn ranks(n: usize, covers: &[(usize, usize)], order: &[usize]) -> Vec<usize> {
    let mut out = vec![Vec::new(); n];
    for &(c, p) in covers {
        out[c].push(p);
    }
    let mut rank = vec![0usize; n];
    for &v in order {
        for &p in &out[v] {
            rank[p] = rank[p].max(rank[v] + 1);
        }
    }
    rank
}

/// Maximum bipartite matching where node `v` on the left connects to its
/// strict ancestors on the right.
fn hopcroft_karp(n: usize, above: &[BitSet]) -> usize {
    const NIL: usize = usize::MAX;
    let mut match_left = vec![NIL; n];
    let mut match_right = vec![NIL; n];
    let mut dist = vec![usize::MAX; n];
    let mut matching = 0;

    loop {
        // BFS from free left nodes to build layers.
        let mut queue = std::collections::VecDeque::new();
        for v in 0..n {
            if match_left[v] == NIL {
                dist[v] = 0;
                queue.push_back(v);
            } else {
                dist[v] = usize::MAX;
            }
        }
        let mut found_augmenting = false;
        while let Some(v) = queue.pop_front() {
            for u in above[v].iter() {
                let w = match_right[u];
                if w == NIL {
                    found_augmenting = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found_augmenting {
            break;
        }

        fn dfs(
            v: usize,
            above: &[BitSet],
            match_left: &mut [usize],
            match_right: &mut [usize],
            dist: &mut [usize],
        ) -> bool {
            for u in above[v].iter() {
                let w = match_right[u];
                if w == NIL || (dist[w] == dist[v] + 1 && dfs(w, above, match_left, match_right, dist))
                {
                    match_left[v] = u;
                    match_right[u] = v;
                    return true;
                }
            }
            dist[v] = usize::MAX;
            false
        }

        for v in 0..n {
            if match_left[v] == NIL && dfs(v, above, &mut match_left, &mut match_right, &mut dist) {
                matching += 1;
            }
        }
    }
    matching
}
