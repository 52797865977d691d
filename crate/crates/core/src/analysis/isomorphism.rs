//! Digraph isomorphism and homeomorphism checks on cover relations.
//!
//! Exact isomorphism uses backtracking over nodes grouped by structural
//! invariants; homeomorphism smooths away interior degree-(1,1) nodes on
//! both sides first. Both checks refuse graphs above a node cap, since
//! backtracking has no useful worst-case bound.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::lattice::ConceptLattice;

/// Largest graph the backtracking search will accept.
pub const DEFAULT_NODE_CAP: usize = 200;

/// Whether two lattices have isomorphic cover digraphs.
pub fn is_isomorphic(a: &ConceptLattice, b: &ConceptLattice) -> Result<bool> {
    is_isomorphic_covers(a.concepts.len(), &a.covers, b.concepts.len(), &b.covers, DEFAULT_NODE_CAP)
}

/// Whether two lattices have homeomorphic cover digraphs.
pub fn is_homeomorphic(a: &ConceptLattice, b: &ConceptLattice) -> Result<bool> {
    is_homeomorphic_covers(
        a.concepts.len(),
        &a.covers,
        b.concepts.len(),
        &b.covers,
        DEFAULT_NODE_CAP,
    )
}

/// Per-node invariant: anything unequal here rules the pair out before
/// the search starts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
struct NodeSignature {
    indeg: usize,
    outdeg: usize,
    from_source: usize,
    to_sink: usize,
}

struct Digraph {
    n: usize,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    edges: HashSet<(usize, usize)>,
}

impl Digraph {
    fn new(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let mut edges = HashSet::with_capacity(covers.len());
        for &(u, v) in covers {
            if u >= n || v >= n {
                return Err(Error::input(format!(
                    "cover edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if edges.insert((u, v)) {
                out[u].push(v);
                inc[v].push(u);
            }
        }
        Ok(Digraph { n, out, inc, edges })
    }

    /// Longest-path distances from sources and to sinks, via one Kahn
    /// pass. Errors if the edge set has a cycle.
    fn signatures(&self) -> Result<Vec<NodeSignature>> {
        let mut indeg: Vec<usize> = self.inc.iter().map(Vec::len).collect();
        let mut queue: Vec<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(self.n);
        while let Some(v) = queue.pop() {
            topo.push(v);
            for &w in &self.out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        if topo.len() != self.n {
            return Err(Error::input("cover relation contains a cycle"));
        }
        let mut from_source = vec![0usize; self.n];
        for &v in &topo {
            for &w in &self.out[v] {
                from_source[w] = from_source[w].max(from_source[v] + 1);
            }
        }
        let mut to_sink = vec![0usize; self.n];
        for &v in topo.iter().rev() {
            for &w in &self.out[v] {
                to_sink[v] = to_sink[v].max(to_sink[w] + 1);
            }
        }
        Ok((0..self.n)
            .map(|v| NodeSignature {
                indeg: self.inc[v].len(),
                outdeg: self.out[v].len(),
                from_source: from_source[v],
                to_sink: to_sink[v],
            })
            .collect())
    }
}

/// Exact isomorphism between two cover digraphs given as edge lists over
/// `0..n`. Size or edge-count mismatches return `false` outright; graphs
/// larger than `cap` are refused with a capacity error.
pub fn is_isomorphic_covers(
    n_a: usize,
    covers_a: &[(usize, usize)],
    n_b: usize,
    covers_b: &[(usize, usize)],
    cap: usize,
) -> Result<bool> {
    let ga = Digraph::new(n_a, covers_a)?;
    let gb = Digraph::new(n_b, covers_b)?;
    if ga.n != gb.n || ga.edges.len() != gb.edges.len() {
        return Ok(false);
    }
    if ga.n > cap {
        return Err(Error::Capacity { reached: ga.n, cap });
    }
    if ga.n == 0 {
        return Ok(true);
    }
    let sig_a = ga.signatures()?;
    let sig_b = gb.signatures()?;
    let mut sorted_a = sig_a.clone();
    let mut sorted_b = sig_b.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return Ok(false);
    }

    // Candidate lists per node of A: nodes of B with the same signature.
    let candidates: Vec<Vec<usize>> = sig_a
        .iter()
        .map(|s| (0..gb.n).filter(|&v| sig_b[v] == *s).collect())
        .collect();

    // Assign nodes in BFS order from the most constrained one, so each
    // new node usually touches an already-mapped neighbor.
    let start = (0..ga.n)
        .min_by_key(|&v| (candidates[v].len(), v))
        .expect("nonempty graph");
    let mut order = Vec::with_capacity(ga.n);
    let mut seen = vec![false; ga.n];
    let mut frontier = vec![start];
    seen[start] = true;
    while let Some(v) = frontier.pop() {
        order.push(v);
        let mut next: Vec<usize> = ga.out[v]
            .iter()
            .chain(&ga.inc[v])
            .copied()
            .filter(|&w| !seen[w])
            .collect();
        next.sort_unstable();
        next.dedup();
        for &w in &next {
            seen[w] = true;
        }
        // Reverse so the smallest id is popped first.
        frontier.extend(next.into_iter().rev());
        if frontier.is_empty() {
            if let Some(v) = (0..ga.n).filter(|&v| !seen[v]).min_by_key(|&v| candidates[v].len()) {
                seen[v] = true;
                frontier.push(v);
            }
        }
    }

    let mut mapping = vec![usize::MAX; ga.n];
    let mut used = vec![false; gb.n];
    Ok(extend(&ga, &gb, &candidates, &order, 0, &mut mapping, &mut used))
}

fn extend(
    ga: &Digraph,
    gb: &Digraph,
    candidates: &[Vec<usize>],
    order: &[usize],
    depth: usize,
    mapping: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let u = order[depth];
    'cand: for &v in &candidates[u] {
        if used[v] {
            continue;
        }
        // Edges to already-mapped nodes must match in both directions.
        for &w in order[..depth].iter() {
            let img = mapping[w];
            if ga.edges.contains(&(u, w)) != gb.edges.contains(&(v, img))
                || ga.edges.contains(&(w, u)) != gb.edges.contains(&(img, v))
            {
                continue 'cand;
            }
        }
        mapping[u] = v;
        used[v] = true;
        if extend(ga, gb, candidates, order, depth + 1, mapping, used) {
            return true;
        }
        mapping[u] = usize::MAX;
        used[v] = false;
    }
    false
}

/// Smooth a cover digraph: repeatedly delete any interior node with
/// exactly one parent and one child, rewiring child → parent, as long as
/// that shortcut edge is not already present (deleting it then would
/// collapse genuinely distinct paths). Returns the compacted node count
/// and edge list.
pub(crate) fn smooth_covers(n: usize, covers: &[(usize, usize)]) -> Result<(usize, Vec<(usize, usize)>)> {
    use std::collections::BTreeSet;
    let mut up: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut down: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(u, v) in covers {
        if u >= n || v >= n {
            return Err(Error::input(format!(
                "cover edge ({u}, {v}) references a node outside 0..{n}"
            )));
        }
        up[u].insert(v);
        down[v].insert(u);
    }
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            if !alive[v] || down[v].len() != 1 || up[v].len() != 1 {
                continue;
            }
            let child = *down[v].iter().next().expect("one child");
            let parent = *up[v].iter().next().expect("one parent");
            if up[child].contains(&parent) {
                continue;
            }
            alive[v] = false;
            up[child].remove(&v);
            down[parent].remove(&v);
            up[v].clear();
            down[v].clear();
            up[child].insert(parent);
            down[parent].insert(child);
            changed = true;
        }
        if !changed {
            break;
        }
    }
    let mut renumber = vec![usize::MAX; n];
    let mut kept = 0;
    for v in 0..n {
        if alive[v] {
            renumber[v] = kept;
            kept += 1;
        }
    }
    let mut edges = Vec::new();
    for v in 0..n {
        if alive[v] {
            for &p in &up[v] {
                edges.push((renumber[v], renumber[p]));
            }
        }
    }
    edges.sort_unstable();
    Ok((kept, edges))
}

/// Homeomorphism between cover digraphs: both sides are smoothed, then
/// compared for exact isomorphism. The node cap applies to the smoothed
/// graphs.
pub fn is_homeomorphic_covers(
    n_a: usize,
    covers_a: &[(usize, usize)],
    n_b: usize,
    covers_b: &[(usize, usize)],
    cap: usize,
) -> Result<bool> {
    let (sn_a, sc_a) = smooth_covers(n_a, covers_a)?;
    let (sn_b, sc_b) = smooth_covers(n_b, covers_b)?;
    is_isomorphic_covers(sn_a, &sc_a, sn_b, &sc_b, cap)
}
