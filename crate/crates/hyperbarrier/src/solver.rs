//! Exact matching and packing solvers with obstruction detectors: exact-cover
//! backtracking for perfect matchings, branch-and-bound maximum matchings with
//! a fractional upper bound, and searches for vertex-set containment caps and
//! incomplete edge-index lattices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::degree::{degree_sequence, Degree};
use crate::density::binomial;
use crate::hypergraph::{clique_complex, Edge, KComplex, KGraph};
use crate::lattice::{classify, robust_edge_lattice, IntegerLattice};
use crate::lp;
use crate::partition::VertexPartition;
use crate::{Error, Result};

/// A set of pairwise-disjoint edges of a host graph.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Matching {
    edges: Vec<Edge>,
}

impl Matching {
    pub fn new(g: &KGraph, edges: Vec<Edge>) -> Result<Self> {
        let mut seen = vec![false; g.n()];
        let mut sorted = edges;
        for e in &sorted {
            if !g.contains(e) {
                return Err(Error::InvalidInput(format!("{e:?} is not an edge of the graph")));
            }
            for &v in e {
                if seen[v] {
                    return Err(Error::InvalidInput(format!("vertex {v} is covered twice")));
                }
                seen[v] = true;
            }
        }
        sorted.sort();
        Ok(Self { edges: sorted })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Number of vertices the matching covers.
    pub fn covered(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn is_perfect(&self, g: &KGraph) -> bool {
        self.covered() == g.n()
    }
}

struct CoverSearch<'a> {
    edges: Vec<&'a Edge>,
    /// Edge indices through each vertex.
    incident: Vec<Vec<usize>>,
    covered: Vec<bool>,
    chosen: Vec<usize>,
}

impl<'a> CoverSearch<'a> {
    fn new(g: &'a KGraph) -> Self {
        let edges: Vec<&Edge> = g.edges().iter().collect();
        let mut incident = vec![Vec::new(); g.n()];
        for (i, e) in edges.iter().enumerate() {
            for &v in e.iter() {
                incident[v].push(i);
            }
        }
        Self { edges, incident, covered: vec![false; g.n()], chosen: Vec::new() }
    }

    fn candidates(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident[v]
            .iter()
            .copied()
            .filter(|&i| self.edges[i].iter().all(|&u| !self.covered[u]))
    }

    /// Uncovered vertex with the fewest available edges, lowest index on ties.
    fn branch_vertex(&self) -> Option<(usize, usize)> {
        (0..self.covered.len())
            .filter(|&v| !self.covered[v])
            .map(|v| (self.candidates(v).count(), v))
            .min()
            .map(|(c, v)| (v, c))
    }

    fn take(&mut self, i: usize) {
        for &v in self.edges[i] {
            self.covered[v] = true;
        }
        self.chosen.push(i);
    }

    fn untake(&mut self, i: usize) {
        for &v in self.edges[i] {
            self.covered[v] = false;
        }
        self.chosen.pop();
    }

    fn matching(&self, g: &KGraph) -> Matching {
        let edges = self.chosen.iter().map(|&i| self.edges[i].clone()).collect();
        Matching::new(g, edges).expect("search state is a valid matching")
    }

    /// Exact cover: every vertex must be covered. Stops after `cap` complete
    /// matchings; branching on a fixed vertex per node visits each one once.
    fn perfect(&mut self, g: &KGraph, cap: usize, out: &mut Vec<Matching>) {
        let Some((v, count)) = self.branch_vertex() else {
            out.push(self.matching(g));
            return;
        };
        if count == 0 {
            return;
        }
        let cands: Vec<usize> = self.candidates(v).collect();
        for i in cands {
            self.take(i);
            self.perfect(g, cap, out);
            self.untake(i);
            if out.len() >= cap {
                return;
            }
        }
    }
}

/// Any perfect matching, or proof that none exists; exact-cover backtracking
/// branching on the uncovered vertex with the fewest candidates.
pub fn perfect_matching(h: &KGraph) -> Result<Option<Matching>> {
    if h.k() == 0 || h.n() % h.k() != 0 {
        return Err(Error::InvalidInput(format!(
            "a perfect matching needs {} to divide {}",
            h.k(),
            h.n()
        )));
    }
    let mut out = Vec::new();
    CoverSearch::new(h).perfect(h, 1, &mut out);
    Ok(out.into_iter().next())
}

/// Every perfect matching, each found exactly once, in the deterministic
/// order of the exact-cover search.
pub fn all_perfect_matchings(h: &KGraph) -> Result<Vec<Matching>> {
    if h.k() == 0 || h.n() % h.k() != 0 {
        return Err(Error::InvalidInput(format!(
            "a perfect matching needs {} to divide {}",
            h.k(),
            h.n()
        )));
    }
    let mut out = Vec::new();
    CoverSearch::new(h).perfect(h, usize::MAX, &mut out);
    Ok(out)
}

/// Rounded-down optimum of the fractional relaxation: maximize the total
/// edge weight subject to unit coverage caps.
fn fractional_matching_bound(h: &KGraph) -> usize {
    use num_traits::ToPrimitive;
    if h.is_empty() {
        return 0;
    }
    let edges: Vec<&Edge> = h.edges().iter().collect();
    let c = vec![lp::int(1); edges.len()];
    let mut rows = vec![vec![lp::int(0); edges.len()]; h.n()];
    for (i, e) in edges.iter().enumerate() {
        for &v in e.iter() {
            rows[v][i] = lp::int(1);
        }
    }
    let b = vec![lp::int(1); h.n()];
    let (value, _) = lp::maximize_leq(&c, &rows, &b).expect("coverage polytope is bounded");
    value.floor().to_integer().to_usize().expect("matching bound fits in usize")
}

/// Maximum-cardinality matching by branch and bound: greedy start, fractional
/// upper bound at the root, and a vertices-remaining bound inside the tree.
pub fn max_matching(h: &KGraph) -> Matching {
    if h.is_empty() {
        return Matching { edges: Vec::new() };
    }
    let edges: Vec<&Edge> = h.edges().iter().collect();
    let k = h.k();
    let n = h.n();

    let mut greedy: Vec<usize> = Vec::new();
    let mut covered = vec![false; n];
    for (i, e) in edges.iter().enumerate() {
        if e.iter().all(|&v| !covered[v]) {
            for &v in e.iter() {
                covered[v] = true;
            }
            greedy.push(i);
        }
    }

    let root_bound = fractional_matching_bound(h);
    let best = greedy;
    if best.len() >= root_bound {
        let m = best.iter().map(|&i| edges[i].clone()).collect();
        return Matching::new(h, m).expect("greedy edges are disjoint");
    }

    // decide vertices in increasing order: cover v by an edge or mark it
    // skipped; skipped vertices admit no incident edge later
    struct State<'a> {
        edges: &'a [&'a Edge],
        k: usize,
        root_bound: usize,
        blocked: Vec<bool>,
        chosen: Vec<usize>,
        best: Vec<usize>,
    }
    impl State<'_> {
        fn go(&mut self, v: usize) {
            let n = self.blocked.len();
            let free = (v..n).filter(|&u| !self.blocked[u]).count();
            if self.chosen.len() + free / self.k <= self.best.len() {
                return;
            }
            let Some(v) = (v..n).find(|&u| !self.blocked[u]) else {
                if self.chosen.len() > self.best.len() {
                    self.best = self.chosen.clone();
                }
                return;
            };
            for (i, e) in self.edges.iter().enumerate() {
                if e.contains(&v) && e.iter().all(|&u| !self.blocked[u]) {
                    for &u in e.iter() {
                        self.blocked[u] = true;
                    }
                    self.chosen.push(i);
                    self.go(v + 1);
                    self.chosen.pop();
                    for &u in e.iter() {
                        self.blocked[u] = false;
                    }
                    if self.best.len() >= self.root_bound {
                        return;
                    }
                }
            }
            // leave v uncovered
            self.blocked[v] = true;
            self.go(v + 1);
            self.blocked[v] = false;
        }
    }
    let mut state =
        State { edges: &edges, k, root_bound, blocked: vec![false; n], chosen: Vec::new(), best };
    state.go(0);
    let m = state.best.iter().map(|&i| edges[i].clone()).collect();
    Matching::new(h, m).expect("branch-and-bound edges are disjoint")
}

/// Perfect packing by h-cliques, reduced to a perfect matching on the top
/// level of the clique complex.
pub fn perfect_clique_packing(g: &KGraph, h: usize) -> Result<Option<Matching>> {
    if h < g.k() {
        return Err(Error::InvalidInput(format!(
            "clique size {h} is below the edge size {}",
            g.k()
        )));
    }
    if h == 0 || g.n() % h != 0 {
        return Err(Error::InvalidInput(format!("a perfect packing needs {h} to divide {}", g.n())));
    }
    let complex = clique_complex(g, h)?;
    let cliques = KGraph::new(g.n(), h, complex.level(h).iter().cloned())?;
    perfect_matching(&cliques)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchRegime {
    Exhaustive,
    LocalSearch,
}

impl SearchRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchRegime::Exhaustive => "exhaustive",
            SearchRegime::LocalSearch => "local-search",
        }
    }
}

/// A vertex set capping the matching size: few top-level edges carry more
/// than `j` of its vertices.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SpaceCertificate {
    pub j: usize,
    pub s: Vec<usize>,
    /// Exact number of top-level edges with more than `j` vertices in `s`.
    pub violation_count: usize,
    pub regime: SearchRegime,
}

const LOCAL_SEARCH_RESTARTS: u64 = 8;

fn violation_count(edge_masks: &[u128], s_mask: u128, j: usize) -> usize {
    edge_masks.iter().filter(|&&m| (m & s_mask).count_ones() as usize > j).count()
}

fn mask_of(vs: &[usize]) -> u128 {
    vs.iter().fold(0u128, |m, &v| m | (1u128 << v))
}

/// For each j, finds a vertex set S of size floor(j*n/k) minimizing the number
/// of top-level edges with more than j vertices in S; certifies when that
/// count is at most beta * n^k. Exhaustive for n <= 14, steepest-descent swap
/// search with fixed restarts above.
pub fn detect_space_barrier(j_complex: &KComplex, beta: &BigRational) -> Result<Option<SpaceCertificate>> {
    let n = j_complex.n();
    let k = j_complex.k();
    if n > 128 {
        return Err(Error::InvalidInput("barrier search supports at most 128 vertices".into()));
    }
    if beta.is_negative() {
        return Err(Error::InvalidInput("beta must be non-negative".into()));
    }
    let edge_masks: Vec<u128> = j_complex.level(k).iter().map(|e| mask_of(e)).collect();
    let allowance = beta * BigRational::from_integer(BigInt::from(n).pow(k as u32));
    let exhaustive = n <= 14;

    for j in 1..k {
        let s_size = j * n / k;
        let (best_s, best_count) = if exhaustive {
            let mut best: Option<(Vec<usize>, usize)> = None;
            for s in (0..n).combinations(s_size) {
                let count = violation_count(&edge_masks, mask_of(&s), j);
                if best.as_ref().map_or(true, |(_, c)| count < *c) {
                    best = Some((s, count));
                }
            }
            best.expect("at least the lexicographically first set is scanned")
        } else {
            let mut best: Option<(Vec<usize>, usize)> = None;
            for restart in 0..LOCAL_SEARCH_RESTARTS {
                let mut rng = ChaCha8Rng::seed_from_u64(restart);
                let mut s: Vec<usize> = rand::seq::index::sample(&mut rng, n, s_size).into_vec();
                s.sort_unstable();
                let mut count = violation_count(&edge_masks, mask_of(&s), j);
                loop {
                    let mut improved = None;
                    for (pos, &out) in s.iter().enumerate() {
                        for inn in 0..n {
                            if s.contains(&inn) {
                                continue;
                            }
                            let mask = mask_of(&s) & !(1u128 << out) | (1u128 << inn);
                            let c = violation_count(&edge_masks, mask, j);
                            if c < count {
                                improved = Some((pos, inn, c));
                            }
                        }
                    }
                    let Some((pos, inn, c)) = improved else { break };
                    s[pos] = inn;
                    s.sort_unstable();
                    count = c;
                }
                if best.as_ref().map_or(true, |(_, c)| count < *c) {
                    best = Some((s, count));
                }
            }
            best.expect("restart loop always produces a candidate")
        };
        if BigRational::from_integer(BigInt::from(best_count)) <= allowance {
            return Ok(Some(SpaceCertificate {
                j,
                s: best_s,
                violation_count: best_count,
                regime: if exhaustive { SearchRegime::Exhaustive } else { SearchRegime::LocalSearch },
            }));
        }
    }
    Ok(None)
}

/// A vertex partition whose robust edge-index lattice misses a divisibility
/// requirement, capping which residue classes matchings can reach.
#[derive(Debug, Clone)]
pub struct DivisibilityCertificate {
    pub partition: VertexPartition,
    pub lattice: IntegerLattice,
    /// A required vector missing from the lattice.
    pub witness: Vec<BigInt>,
    pub regime: SearchRegime,
}

/// Visits every partition of `items` into at most `max_parts` parts with every
/// part of size at least `min_part`, parts ordered by least element; stops
/// early when the callback returns true.
fn for_each_partition(
    items: &[usize],
    max_parts: usize,
    min_part: usize,
    f: &mut impl FnMut(&[Vec<usize>]) -> bool,
) -> bool {
    fn rec(
        items: &[usize],
        at: usize,
        max_parts: usize,
        min_part: usize,
        parts: &mut Vec<Vec<usize>>,
        f: &mut impl FnMut(&[Vec<usize>]) -> bool,
    ) -> bool {
        if at == items.len() {
            return parts.iter().all(|p| p.len() >= min_part) && f(parts);
        }
        // filling every deficient part must remain possible
        let deficit: usize =
            parts.iter().map(|p| min_part.saturating_sub(p.len())).sum();
        if deficit > items.len() - at {
            return false;
        }
        for i in 0..parts.len() {
            parts[i].push(items[at]);
            if rec(items, at + 1, max_parts, min_part, parts, f) {
                return true;
            }
            parts[i].pop();
        }
        if parts.len() < max_parts {
            parts.push(vec![items[at]]);
            if rec(items, at + 1, max_parts, min_part, parts, f) {
                return true;
            }
            parts.pop();
        }
        false
    }
    rec(items, 0, max_parts, min_part, &mut Vec::new(), f)
}

/// Partitions refining `blocks` (each block split independently), with a
/// global cap on the number of parts.
fn for_each_refining_partition(
    blocks: &[Vec<usize>],
    max_parts: usize,
    min_part: usize,
    f: &mut impl FnMut(&[Vec<usize>]) -> bool,
) -> bool {
    fn rec(
        blocks: &[Vec<usize>],
        at: usize,
        budget: usize,
        min_part: usize,
        acc: &mut Vec<Vec<usize>>,
        f: &mut impl FnMut(&[Vec<usize>]) -> bool,
    ) -> bool {
        if at == blocks.len() {
            return f(acc);
        }
        let reserve = blocks.len() - at - 1; // later blocks need one part each
        if budget <= reserve {
            return false;
        }
        let mut found = false;
        for_each_partition(&blocks[at], budget - reserve, min_part, &mut |parts| {
            let before = acc.len();
            acc.extend(parts.iter().cloned());
            let stop = rec(blocks, at + 1, budget - parts.len(), min_part, acc, f);
            acc.truncate(before);
            if stop {
                found = true;
            }
            stop
        });
        found
    }
    rec(blocks, 0, max_parts, min_part, &mut Vec::new(), f)
}

fn incompleteness_witness(
    g: &KGraph,
    parts: &[Vec<usize>],
    mu: &BigRational,
    classes: Option<&VertexPartition>,
) -> Result<Option<DivisibilityCertificate>> {
    let p = VertexPartition::new(g.n(), parts.to_vec())?;
    let lattice = robust_edge_lattice(g, &p, mu)?;
    let missing = match classes {
        None => classify(&lattice, g.k()).incompleteness_witness,
        Some(cs) => crate::lattice::is_complete_wrt(&lattice, &p, cs)?.1,
    };
    Ok(missing.map(|witness| DivisibilityCertificate {
        partition: p,
        lattice,
        witness,
        regime: SearchRegime::Exhaustive,
    }))
}

/// Searches vertex partitions (at most k parts, or k per class when `classes`
/// is given) for one whose robust edge lattice is incomplete; exhaustive in
/// canonical order for n <= 12, seeded single-vertex-move descent above. The
/// first incomplete partition found is returned.
pub fn detect_divisibility_barrier(
    g: &KGraph,
    mu: &BigRational,
    min_part: usize,
    classes: Option<&VertexPartition>,
) -> Result<Option<DivisibilityCertificate>> {
    if min_part < 1 {
        return Err(Error::InvalidInput("part-size floor must be at least 1".into()));
    }
    if let Some(cs) = classes {
        if cs.n() != g.n() {
            return Err(Error::InvalidInput("partition is over a different vertex set".into()));
        }
    }
    let n = g.n();
    let verts: Vec<usize> = (0..n).collect();

    if n <= 12 {
        let mut cert = None;
        let mut run = |parts: &[Vec<usize>]| -> bool {
            if parts.len() < 2 {
                return false;
            }
            match incompleteness_witness(g, parts, mu, classes) {
                Ok(Some(c)) => {
                    cert = Some(Ok(c));
                    true
                }
                Ok(None) => false,
                Err(e) => {
                    cert = Some(Err(e));
                    true
                }
            }
        };
        match classes {
            None => {
                for_each_partition(&verts, g.k(), min_part, &mut run);
            }
            Some(cs) => {
                let blocks: Vec<Vec<usize>> = cs.parts().to_vec();
                let cap = g.k() * cs.d();
                for_each_refining_partition(&blocks, cap, min_part, &mut run);
            }
        }
        return cert.transpose();
    }

    // seeded descent: move single vertices to reduce how many required
    // difference vectors the robust lattice contains
    let blocks: Vec<Vec<usize>> = match classes {
        None => vec![verts],
        Some(cs) => cs.parts().to_vec(),
    };
    let score = |parts: &[Vec<usize>]| -> Result<usize> {
        let p = VertexPartition::new(n, parts.to_vec())?;
        let lattice = robust_edge_lattice(g, &p, mu)?;
        let d = parts.len();
        let mut present = 0;
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                let mut v = vec![BigInt::from(0); d];
                v[i] = BigInt::from(1);
                v[j] = BigInt::from(-1);
                if lattice.contains(&v) {
                    present += 1;
                }
            }
        }
        Ok(present)
    };
    for restart in 0..LOCAL_SEARCH_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(restart);
        // split every block into two random halves
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for block in &blocks {
            let mut items = block.clone();
            for i in (1..items.len()).rev() {
                items.swap(i, rng.gen_range(0..=i));
            }
            let cut = (items.len() / 2).max(min_part.min(items.len()));
            let (a, b) = items.split_at(cut.min(items.len()));
            if b.len() >= min_part && !a.is_empty() {
                parts.push(a.to_vec());
                parts.push(b.to_vec());
            } else {
                parts.push(items.clone());
            }
        }
        parts.iter_mut().for_each(|p| p.sort_unstable());
        let mut current = score(&parts)?;
        for _ in 0..200 {
            if let Some(c) = incompleteness_witness(g, &parts, mu, classes)? {
                return Ok(Some(DivisibilityCertificate { regime: SearchRegime::LocalSearch, ..c }));
            }
            // best single-vertex move between parts of a common block
            let mut improved: Option<(usize, usize, usize, usize)> = None;
            let mut best = current;
            for from in 0..parts.len() {
                if parts[from].len() <= min_part {
                    continue;
                }
                for idx in 0..parts[from].len() {
                    for to in 0..parts.len() {
                        if to == from || !same_block(&blocks, parts[from][idx], parts[to][0]) {
                            continue;
                        }
                        let mut trial = parts.clone();
                        let v = trial[from].remove(idx);
                        trial[to].push(v);
                        trial[to].sort_unstable();
                        let s = score(&trial)?;
                        if s < best {
                            best = s;
                            improved = Some((from, idx, to, s));
                        }
                    }
                }
            }
            let Some((from, idx, to, s)) = improved else { break };
            let v = parts[from].remove(idx);
            parts[to].push(v);
            parts[to].sort_unstable();
            current = s;
        }
        if let Some(c) = incompleteness_witness(g, &parts, mu, classes)? {
            return Ok(Some(DivisibilityCertificate { regime: SearchRegime::LocalSearch, ..c }));
        }
    }
    Ok(None)
}

fn same_block(blocks: &[Vec<usize>], u: usize, v: usize) -> bool {
    blocks.iter().any(|b| b.contains(&u) && b.contains(&v))
}

/// Tuning knobs for the combined analysis.
#[derive(Debug, Clone)]
pub struct AnalyzeParams {
    /// Allowed fraction of violating edges for the containment barrier.
    pub beta: BigRational,
    /// Robustness fraction for the lattice barrier.
    pub mu: BigRational,
    /// Part-size floor; derived from the codegree when absent.
    pub min_part: Option<usize>,
}

/// Combined verdict: a perfect matching, one or both obstructions, or nothing
/// conclusive at this size.
#[derive(Debug, Clone)]
pub struct BarrierReport {
    pub matching: Option<Matching>,
    pub space: Option<SpaceCertificate>,
    pub divisibility: Option<DivisibilityCertificate>,
    pub params: AnalyzeParams,
}

impl BarrierReport {
    pub fn outcome_label(&self) -> &'static str {
        if self.matching.is_some() {
            "perfect-matching"
        } else if self.space.is_some() && self.divisibility.is_some() {
            "space-and-divisibility-barrier"
        } else if self.space.is_some() {
            "space-barrier"
        } else if self.divisibility.is_some() {
            "divisibility-barrier"
        } else {
            "inconclusive"
        }
    }

    /// 0 = matching, 2 = barrier, 3 = inconclusive.
    pub fn exit_code(&self) -> i32 {
        if self.matching.is_some() {
            0
        } else if self.space.is_some() || self.divisibility.is_some() {
            2
        } else {
            3
        }
    }
}

/// Part-size floor from the codegree: ceil(delta_{k-1} - mu * n), at least 1.
pub fn default_min_part(j: &KComplex, mu: &BigRational) -> usize {
    use num_traits::ToPrimitive;
    let deg = degree_sequence(j);
    match deg.0.last() {
        Some(Degree::Finite(d)) => {
            let bound = BigRational::from_integer(BigInt::from(*d))
                - mu * BigRational::from_integer(BigInt::from(j.n()));
            bound.ceil().to_integer().to_usize().unwrap_or(0).max(1)
        }
        _ => 1,
    }
}

/// Looks for a perfect matching in the top level; failing that, runs both
/// obstruction detectors and reports every certificate found.
pub fn analyze(j: &KComplex, params: AnalyzeParams) -> Result<BarrierReport> {
    if j.k() == 0 || j.n() % j.k() != 0 {
        return Err(Error::InvalidInput(format!(
            "a perfect matching needs {} to divide {}",
            j.k(),
            j.n()
        )));
    }
    let top = j.top();
    if let Some(m) = perfect_matching(&top)? {
        return Ok(BarrierReport { matching: Some(m), space: None, divisibility: None, params });
    }
    let space = detect_space_barrier(j, &params.beta)?;
    let min_part = params.min_part.unwrap_or_else(|| default_min_part(j, &params.mu));
    let divisibility = detect_divisibility_barrier(&top, &params.mu, min_part, None)?;
    Ok(BarrierReport { matching: None, space, divisibility, params })
}

/// Edge and triangle densities of a 2-graph with the quadratic lower bound
/// t >= d(2d - 1), checked exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodmanReport {
    pub edge_density: BigRational,
    pub triangle_density: BigRational,
    pub bound: BigRational,
    pub satisfied: bool,
}

pub fn goodman_check(g: &KGraph) -> Result<GoodmanReport> {
    if g.k() != 2 {
        return Err(Error::InvalidInput("density check is for 2-graphs".into()));
    }
    let n = g.n();
    if n < 3 {
        return Err(Error::InvalidInput("density check needs at least 3 vertices".into()));
    }
    let mut adj = vec![0u128; n];
    for e in g.edges() {
        adj[e[0]] |= 1u128 << e[1];
        adj[e[1]] |= 1u128 << e[0];
    }
    let mut triangles = 0u64;
    for e in g.edges() {
        let above = !((1u128 << (e[1] + 1)) - 1);
        triangles += (adj[e[0]] & adj[e[1]] & above).count_ones() as u64;
    }
    let edge_density = BigRational::new(BigInt::from(g.len()), binomial(n, 2));
    let triangle_density = BigRational::new(BigInt::from(triangles), binomial(n, 3));
    let bound = &edge_density * (BigRational::from_integer(BigInt::from(2)) * &edge_density - lp::int(1));
    let satisfied = triangle_density >= bound;
    Ok(GoodmanReport { edge_density, triangle_density, bound, satisfied })
}

/// Count of top-level edges with more than `j` vertices inside `s`, as used
/// by the containment certificate.
pub fn space_violations(j_complex: &KComplex, s: &[usize], j: usize) -> usize {
    let masks: Vec<u128> = j_complex.level(j_complex.k()).iter().map(|e| mask_of(e)).collect();
    violation_count(&masks, mask_of(s), j)
}
