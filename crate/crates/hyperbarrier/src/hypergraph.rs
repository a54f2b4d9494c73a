//! k-uniform hypergraphs and levelled set systems (k-systems / k-complexes).

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::{Error, Result};

/// An edge is a strictly increasing list of vertices from `0..n`.
pub type Edge = Vec<usize>;

/// Sorts and validates a vertex set, rejecting repeats and out-of-range vertices.
pub fn normalize_edge(mut e: Edge, n: usize) -> Result<Edge> {
    e.sort_unstable();
    if e.iter().any(|&v| v >= n) {
        return Err(Error::InvalidInput(format!("vertex out of range in {e:?} (n = {n})")));
    }
    if e.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput(format!("repeated vertex in {e:?}")));
    }
    Ok(e)
}

/// Insert `v` into sorted edge `e`, returning the sorted union. `v` must not be in `e`.
pub fn edge_plus(e: &[usize], v: usize) -> Edge {
    let mut out = Vec::with_capacity(e.len() + 1);
    let pos = e.partition_point(|&u| u < v);
    out.extend_from_slice(&e[..pos]);
    out.push(v);
    out.extend_from_slice(&e[pos..]);
    out
}

/// A k-uniform hypergraph on vertex set `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGraph {
    n: usize,
    k: usize,
    edges: BTreeSet<Edge>,
}

impl KGraph {
    pub fn new(n: usize, k: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        if k == 0 || k > n.max(1) {
            return Err(Error::InvalidInput(format!("uniformity k = {k} out of range for n = {n}")));
        }
        let mut set = BTreeSet::new();
        for e in edges {
            let e = normalize_edge(e, n)?;
            if e.len() != k {
                return Err(Error::InvalidInput(format!("edge {e:?} does not have size {k}")));
            }
            set.insert(e);
        }
        Ok(KGraph { n, k, edges: set })
    }

    pub fn complete(n: usize, k: usize) -> Self {
        let edges = (0..n).combinations(k).collect();
        KGraph { n, k, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn contains(&self, e: &[usize]) -> bool {
        self.edges.contains(e)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Minimum codegree: the least number of edges containing any fixed (k-1)-set.
    pub fn min_codegree(&self) -> usize {
        (0..self.n)
            .combinations(self.k - 1)
            .map(|e| {
                (0..self.n)
                    .filter(|&v| !e.contains(&v) && self.contains(&edge_plus(&e, v)))
                    .count()
            })
            .min()
            .unwrap_or(0)
    }
}

/// A k-system: levels `J_0, ..., J_k` with `J_r` a family of r-sets and the
/// empty edge always present at level 0. `is_complex` records whether every
/// level is downward closed into the one below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KComplex {
    n: usize,
    k: usize,
    levels: Vec<BTreeSet<Edge>>,
    is_complex: bool,
}

impl KComplex {
    /// Builds a k-system from explicit levels. Missing levels are treated as empty;
    /// the empty edge is inserted at level 0 unconditionally.
    pub fn from_levels(n: usize, k: usize, levels: Vec<Vec<Edge>>) -> Result<Self> {
        if levels.len() > k + 1 {
            return Err(Error::InvalidInput(format!(
                "{} levels supplied but k = {k} admits only {}",
                levels.len(),
                k + 1
            )));
        }
        let mut sets: Vec<BTreeSet<Edge>> = vec![BTreeSet::new(); k + 1];
        for (r, level) in levels.into_iter().enumerate() {
            for e in level {
                let e = normalize_edge(e, n)?;
                if e.len() != r {
                    return Err(Error::InvalidInput(format!("edge {e:?} listed at level {r}")));
                }
                sets[r].insert(e);
            }
        }
        sets[0].insert(vec![]);
        let is_complex = check_closed(&sets);
        Ok(KComplex { n, k, levels: sets, is_complex })
    }

    /// Builds a k-system whose only populated levels are 0 (the empty edge) and k.
    pub fn from_top(g: &KGraph) -> Self {
        let mut levels = vec![BTreeSet::new(); g.k + 1];
        levels[0].insert(vec![]);
        levels[g.k] = g.edges.clone();
        let is_complex = check_closed(&levels);
        KComplex { n: g.n, k: g.k, levels, is_complex }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn level(&self, r: usize) -> &BTreeSet<Edge> {
        &self.levels[r]
    }

    pub fn is_complex(&self) -> bool {
        self.is_complex
    }

    pub fn contains(&self, e: &[usize]) -> bool {
        e.len() <= self.k && self.levels[e.len()].contains(e)
    }

    /// The top level as a k-uniform hypergraph.
    pub fn top(&self) -> KGraph {
        KGraph { n: self.n, k: self.k, edges: self.levels[self.k].clone() }
    }

    /// All edges across levels, lowest level first.
    pub fn all_edges(&self) -> impl Iterator<Item = &Edge> {
        self.levels.iter().flatten()
    }
}

fn check_closed(levels: &[BTreeSet<Edge>]) -> bool {
    for r in 1..levels.len() {
        for e in &levels[r] {
            for i in 0..e.len() {
                let mut sub = e.clone();
                sub.remove(i);
                if !levels[r - 1].contains(&sub) {
                    return false;
                }
            }
        }
    }
    true
}

/// The downward closure of a k-uniform edge set: level r consists of all
/// r-subsets of edges. The result is always a k-complex.
pub fn downward_closure(g: &KGraph) -> KComplex {
    let mut levels: Vec<BTreeSet<Edge>> = vec![BTreeSet::new(); g.k + 1];
    levels[g.k] = g.edges.clone();
    for r in (0..g.k).rev() {
        let (lower, upper) = levels.split_at_mut(r + 1);
        for e in upper[0].iter() {
            for i in 0..e.len() {
                let mut sub = e.clone();
                sub.remove(i);
                lower[r].insert(sub);
            }
        }
    }
    levels[0].insert(vec![]);
    KComplex { n: g.n, k: g.k, levels, is_complex: true }
}

/// The clique r-complex of a k-graph: level i holds the i-sets all of whose
/// k-subsets are edges (so levels below k are complete). Requires `r >= k`.
pub fn clique_complex(g: &KGraph, r: usize) -> Result<KComplex> {
    if r < g.k {
        return Err(Error::InvalidInput(format!("clique complex order {r} below uniformity {}", g.k)));
    }
    let mut levels: Vec<BTreeSet<Edge>> = Vec::with_capacity(r + 1);
    for i in 0..g.k.min(r + 1) {
        levels.push((0..g.n).combinations(i).collect());
    }
    levels.push(g.edges.clone());
    for i in g.k + 1..=r {
        let mut next = BTreeSet::new();
        for e in &levels[i - 1] {
            let start = e.last().map_or(0, |&v| v + 1);
            for v in start..g.n {
                // e is already a clique, so only the k-subsets through v need checking
                if e.iter().combinations(g.k - 1).all(|sub| {
                    let cand = edge_plus(&sub.into_iter().copied().collect::<Vec<_>>(), v);
                    g.contains(&cand)
                }) {
                    next.insert(edge_plus(e, v));
                }
            }
        }
        levels.push(next);
    }
    let is_complex = check_closed(&levels);
    Ok(KComplex { n: g.n, k: r, levels, is_complex })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_edge_always_present() {
        let j = KComplex::from_levels(4, 2, vec![]).unwrap();
        assert!(j.contains(&[]));
        assert_eq!(j.level(0).len(), 1);
    }

    #[test]
    fn closure_of_complete_graph_has_binomial_levels() {
        let g = KGraph::complete(5, 3);
        let j = downward_closure(&g);
        assert!(j.is_complex());
        let expect = [1, 5, 10, 10];
        for (r, want) in expect.iter().enumerate() {
            assert_eq!(j.level(r).len(), *want, "level {r}");
        }
    }

    #[test]
    fn closure_is_idempotent_on_top_level() {
        let g = KGraph::new(5, 2, vec![vec![0, 1], vec![2, 3], vec![1, 2]]).unwrap();
        let j = downward_closure(&g);
        assert_eq!(j.top(), g);
        assert_eq!(downward_closure(&j.top()), j);
    }

    #[test]
    fn partial_system_detected_as_non_complex() {
        let j = KComplex::from_levels(4, 2, vec![vec![], vec![], vec![vec![0, 1]]]).unwrap();
        assert!(!j.is_complex());
    }

    #[test]
    fn clique_complex_counts_triangles() {
        // 4-cycle: no triangles
        let g = KGraph::new(4, 2, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap();
        let j = clique_complex(&g, 3).unwrap();
        assert_eq!(j.level(3).len(), 0);
        assert_eq!(j.level(2).len(), 4);

        let complete = clique_complex(&KGraph::complete(5, 2), 4).unwrap();
        assert_eq!(complete.level(3).len(), 10);
        assert_eq!(complete.level(4).len(), 5);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(KGraph::new(3, 2, vec![vec![0, 3]]).is_err());
        assert!(KGraph::new(3, 2, vec![vec![1, 1]]).is_err());
        assert!(KGraph::new(3, 2, vec![vec![0, 1, 2]]).is_err());
    }
}
