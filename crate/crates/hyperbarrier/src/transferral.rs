//! Transferrals between a k-graph and a fixed perfect matching: verification,
//! breadth-first search over imbalance vectors, transferral digraphs, and the
//! cancellation/completion pipeline that upgrades b-fold transferrals to
//! simple ones between all pairs inside prescribed vertex classes.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use crate::digraph::{receiving_partition, Digraph};
use crate::hypergraph::{normalize_edge, Edge, KGraph};
use crate::lattice::{edge_lattice, is_complete_wrt, IntegerLattice};
use crate::partition::VertexPartition;
use crate::{Error, Result};

/// A k-graph together with a perfect matching inside it.
#[derive(Debug, Clone)]
pub struct MatchedSystem {
    graph: KGraph,
    matching: Vec<Edge>,
}

impl MatchedSystem {
    /// Validates that `matching` consists of disjoint edges of `graph`
    /// covering every vertex.
    pub fn new(graph: KGraph, matching: Vec<Edge>) -> Result<Self> {
        let n = graph.n();
        let mut covered = vec![false; n];
        let mut m = Vec::with_capacity(matching.len());
        for e in matching {
            let e = normalize_edge(e, n)?;
            if e.len() != graph.k() {
                return Err(Error::InvalidInput(format!(
                    "matching edge {e:?} does not have {} vertices",
                    graph.k()
                )));
            }
            if !graph.contains(&e) {
                return Err(Error::InvalidInput(format!("matching edge {e:?} is not an edge")));
            }
            for &v in &e {
                if covered[v] {
                    return Err(Error::InvalidInput(format!("vertex {v} is covered twice")));
                }
                covered[v] = true;
            }
            m.push(e);
        }
        if let Some(v) = covered.iter().position(|&c| !c) {
            return Err(Error::InvalidInput(format!("vertex {v} is not covered")));
        }
        m.sort();
        Ok(Self { graph, matching: m })
    }

    pub fn graph(&self) -> &KGraph {
        &self.graph
    }

    /// The matching edges, sorted.
    pub fn matching(&self) -> &[Edge] {
        &self.matching
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn k(&self) -> usize {
        self.graph.k()
    }

    /// True when every edge index (under `p`) is attained by some matching
    /// edge, so that index-matched substitutions are always available.
    pub fn is_proper(&self, p: &VertexPartition) -> Result<bool> {
        if p.n() != self.n() {
            return Err(Error::InvalidInput("partition is over a different vertex set".into()));
        }
        let attained: std::collections::BTreeSet<_> =
            self.matching.iter().map(|e| p.index_vector(e)).collect();
        Ok(self.graph.edges().iter().all(|e| attained.contains(&p.index_vector(e))))
    }
}

/// Multiset of edges with explicit multiplicities.
pub type EdgeMultiset = BTreeMap<Edge, usize>;

pub fn multiset_insert(ms: &mut EdgeMultiset, e: &Edge, count: usize) {
    if count > 0 {
        *ms.entry(e.clone()).or_insert(0) += count;
    }
}

pub fn multiset_size(ms: &EdgeMultiset) -> usize {
    ms.values().sum()
}

/// Coordinatewise vertex-coverage counts.
pub fn multiset_chi(ms: &EdgeMultiset, n: usize) -> Vec<i64> {
    let mut chi = vec![0i64; n];
    for (e, &count) in ms {
        for &v in e {
            chi[v] += count as i64;
        }
    }
    chi
}

pub fn multiset_sum(a: &EdgeMultiset, b: &EdgeMultiset) -> EdgeMultiset {
    let mut out = a.clone();
    for (e, &count) in b {
        multiset_insert(&mut out, e, count);
    }
    out
}

pub fn multiset_scaled(a: &EdgeMultiset, factor: usize) -> EdgeMultiset {
    if factor == 0 {
        return EdgeMultiset::new();
    }
    a.iter().map(|(e, &c)| (e.clone(), c * factor)).collect()
}

/// Checked multiset difference; errors unless `b` is contained in `a`.
pub fn multiset_difference(a: &EdgeMultiset, b: &EdgeMultiset) -> Result<EdgeMultiset> {
    let mut out = a.clone();
    for (e, &count) in b {
        match out.get_mut(e) {
            Some(c) if *c >= count => *c -= count,
            _ => {
                return Err(Error::InvalidInput(format!(
                    "multiset does not contain {count} copies of {e:?}"
                )))
            }
        }
    }
    out.retain(|_, c| *c > 0);
    Ok(out)
}

pub fn multiset_contains(a: &EdgeMultiset, b: &EdgeMultiset) -> bool {
    b.iter().all(|(e, &count)| a.get(e).copied().unwrap_or(0) >= count)
}

/// A pair of equal-size edge multisets whose coverage counts agree everywhere
/// except at `u` (covered `b` more times by `t`) and `v` (covered `b` more
/// times by `t_prime`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transferral {
    pub u: usize,
    pub v: usize,
    pub b: usize,
    /// Multiset of graph edges.
    pub t: EdgeMultiset,
    /// Multiset of matching edges.
    pub t_prime: EdgeMultiset,
}

impl Transferral {
    /// The trivial transferral carried by the empty multisets.
    pub fn empty(u: usize) -> Self {
        Self { u, v: u, b: 1, t: EdgeMultiset::new(), t_prime: EdgeMultiset::new() }
    }

    pub fn size(&self) -> usize {
        multiset_size(&self.t)
    }

    pub fn is_simple(&self) -> bool {
        self.b == 1
    }
}

/// Exact coverage-count check of a claimed transferral. Multisets touching
/// non-edges are rejected as errors, distinct from a clean `false`.
pub fn verify_transferral(sys: &MatchedSystem, t: &Transferral) -> Result<bool> {
    if t.b == 0 {
        return Err(Error::InvalidInput("fold count b must be positive".into()));
    }
    if t.u >= sys.n() || t.v >= sys.n() {
        return Err(Error::InvalidInput("endpoint is not a vertex".into()));
    }
    for e in t.t.keys() {
        if !sys.graph().contains(e) {
            return Err(Error::InvalidInput(format!("{e:?} is not an edge of the graph")));
        }
    }
    for e in t.t_prime.keys() {
        if !sys.matching.contains(e) {
            return Err(Error::InvalidInput(format!("{e:?} is not a matching edge")));
        }
    }
    let mut want = vec![0i64; sys.n()];
    want[t.u] += t.b as i64;
    want[t.v] -= t.b as i64;
    let chi_t = multiset_chi(&t.t, sys.n());
    let chi_tp = multiset_chi(&t.t_prime, sys.n());
    let diff: Vec<i64> = chi_t.iter().zip(&chi_tp).map(|(a, b)| a - b).collect();
    Ok(diff == want)
}

#[derive(Debug, Clone, Copy)]
enum Pick {
    Graph(u32),
    Matching(u32),
}

struct SearchNode {
    depth: u32,
    via: Option<Pick>,
}

/// Breadth-first search over net imbalance vectors chi(T) - chi(T'), where T
/// picks edges of the graph and T' picks matching edges. One search answers
/// transferral queries for every vertex pair and every fold count b <= b_max.
///
/// States are deduplicated by vector; entries are clipped to
/// [-(b_max + k c_max), b_max + k c_max] and states too far (in l1 norm) from
/// every admissible goal are pruned. Neither cut can discard a shortest path
/// to a goal: partial coverage counts of a valid multiset pair stay within
/// the clip range, and each pick moves the l1 norm by at most k.
pub struct TransferralSearch<'a> {
    sys: &'a MatchedSystem,
    b_max: usize,
    c_max: usize,
    graph_edges: Vec<&'a Edge>,
    table: HashMap<Vec<i64>, SearchNode>,
}

impl<'a> TransferralSearch<'a> {
    pub fn new(sys: &'a MatchedSystem, b_max: usize, c_max: usize) -> Self {
        let n = sys.n();
        let k = sys.k() as i64;
        let clip = (b_max + sys.k() * c_max) as i64;
        let norm_budget = |depth: usize| (2 * c_max - depth) as i64 * k + 2 * b_max as i64;

        let graph_edges: Vec<&Edge> = sys.graph().edges().iter().collect();
        let mut moves: Vec<(Pick, &Edge, i64)> = Vec::new();
        for (i, e) in graph_edges.iter().enumerate() {
            moves.push((Pick::Graph(i as u32), e, 1));
        }
        for (i, e) in sys.matching.iter().enumerate() {
            moves.push((Pick::Matching(i as u32), e, -1));
        }

        let mut table = HashMap::new();
        table.insert(vec![0i64; n], SearchNode { depth: 0, via: None });
        let mut frontier = vec![vec![0i64; n]];
        for depth in 1..=(2 * c_max) {
            let budget = norm_budget(depth);
            let mut next = Vec::new();
            for w in &frontier {
                for &(pick, e, sign) in &moves {
                    let mut w2 = w.clone();
                    let mut ok = true;
                    for &v in e.iter() {
                        w2[v] += sign;
                        if w2[v].abs() > clip {
                            ok = false;
                            break;
                        }
                    }
                    if !ok || w2.iter().map(|x| x.abs()).sum::<i64>() > budget {
                        continue;
                    }
                    if !table.contains_key(&w2) {
                        table.insert(w2.clone(), SearchNode { depth: depth as u32, via: Some(pick) });
                        next.push(w2);
                    }
                }
            }
            frontier = next;
        }
        Self { sys, b_max, c_max, graph_edges, table }
    }

    pub fn b_max(&self) -> usize {
        self.b_max
    }

    pub fn c_max(&self) -> usize {
        self.c_max
    }

    fn goal(&self, u: usize, v: usize, b: usize) -> Vec<i64> {
        let mut g = vec![0i64; self.sys.n()];
        g[u] += b as i64;
        g[v] -= b as i64;
        g
    }

    /// Size of the smallest b-fold (u, v)-transferral for this exact fold
    /// count, if one exists within the size cap.
    pub fn size_for_fold(&self, u: usize, v: usize, b: usize) -> Option<usize> {
        if u == v {
            return Some(0);
        }
        let node = self.table.get(&self.goal(u, v, b))?;
        // any reachable balanced state sits at even depth: each pick changes
        // the coordinate sum by exactly +-k
        debug_assert_eq!(node.depth % 2, 0);
        Some(node.depth as usize / 2)
    }

    /// Minimum-size transferral over all fold counts b <= b_max, ties broken
    /// towards smaller b. The stored parent picks reproduce one witness path.
    pub fn find(&self, u: usize, v: usize) -> Option<Transferral> {
        if u == v {
            return Some(Transferral::empty(u));
        }
        let mut best: Option<(usize, usize)> = None;
        for b in 1..=self.b_max {
            if let Some(size) = self.size_for_fold(u, v, b) {
                if best.map_or(true, |cur| (size, b) < cur) {
                    best = Some((size, b));
                }
            }
        }
        let (_, b) = best?;
        let mut t = EdgeMultiset::new();
        let mut t_prime = EdgeMultiset::new();
        let mut cur = self.goal(u, v, b);
        loop {
            let node = &self.table[&cur];
            let Some(pick) = node.via else { break };
            let (edge, sign) = match pick {
                Pick::Graph(i) => (self.graph_edges[i as usize], 1),
                Pick::Matching(i) => (&self.sys.matching[i as usize], -1),
            };
            match pick {
                Pick::Graph(_) => multiset_insert(&mut t, edge, 1),
                Pick::Matching(_) => multiset_insert(&mut t_prime, edge, 1),
            }
            for &x in edge.iter() {
                cur[x] -= sign;
            }
        }
        let out = Transferral { u, v, b, t, t_prime };
        debug_assert_eq!(verify_transferral(self.sys, &out), Ok(true));
        Some(out)
    }
}

/// Minimum-size transferral from `u` to `v` with fold count at most `b_max`
/// and size at most `c_max`; ties broken by size, then fold count, with the
/// witness path following sorted edge order.
pub fn find_transferral(
    sys: &MatchedSystem,
    u: usize,
    v: usize,
    b_max: usize,
    c_max: usize,
) -> Option<Transferral> {
    TransferralSearch::new(sys, b_max, c_max).find(u, v)
}

/// Digraph with an arc u -> v whenever a simple (u, v)-transferral of size at
/// most `ell` exists. Loops are always present via the empty transferral.
#[derive(Debug, Clone)]
pub struct TransferralDigraph {
    pub ell: usize,
    pub digraph: Digraph,
}

impl TransferralDigraph {
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.digraph.has_edge(u, v)
    }
}

pub fn transferral_digraph(sys: &MatchedSystem, ell: usize) -> TransferralDigraph {
    let search = TransferralSearch::new(sys, 1, ell);
    digraph_from_search(&search, ell)
}

fn digraph_from_search(search: &TransferralSearch, ell: usize) -> TransferralDigraph {
    let n = search.sys.n();
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u == v || search.size_for_fold(u, v, 1).is_some() {
                d.add_edge(u, v);
            }
        }
    }
    TransferralDigraph { ell, digraph: d }
}

/// Concatenates a simple (u, w)-transferral with a simple (w, v)-transferral.
pub fn compose_simple(sys: &MatchedSystem, t1: &Transferral, t2: &Transferral) -> Result<Transferral> {
    if !t1.is_simple() || !t2.is_simple() {
        return Err(Error::InvalidInput("composition requires simple transferrals".into()));
    }
    if t1.v != t2.u {
        return Err(Error::InvalidInput(format!(
            "endpoint mismatch: first ends at {} but second starts at {}",
            t1.v, t2.u
        )));
    }
    for t in [t1, t2] {
        if verify_transferral(sys, t)? != true {
            return Err(Error::InvalidInput("input transferral fails verification".into()));
        }
    }
    let out = Transferral {
        u: t1.u,
        v: t2.v,
        b: 1,
        t: multiset_sum(&t1.t, &t2.t),
        t_prime: multiset_sum(&t1.t_prime, &t2.t_prime),
    };
    debug_assert_eq!(verify_transferral(sys, &out), Ok(true));
    Ok(out)
}

/// Converts a b-fold (u, v)-transferral of size c into a simple one of size
/// exactly (b-1)c' + c, consuming b-1 copies of a simple reverse transferral
/// of size c'.
pub fn bidirectional_downgrade(
    sys: &MatchedSystem,
    t_bfold: &Transferral,
    t_rev: &Transferral,
) -> Result<Transferral> {
    if !t_rev.is_simple() {
        return Err(Error::InvalidInput("reverse transferral must be simple".into()));
    }
    if t_rev.u != t_bfold.v || t_rev.v != t_bfold.u {
        return Err(Error::InvalidInput(format!(
            "reverse transferral must run from {} to {}",
            t_bfold.v, t_bfold.u
        )));
    }
    for t in [t_bfold, t_rev] {
        if verify_transferral(sys, t)? != true {
            return Err(Error::InvalidInput("input transferral fails verification".into()));
        }
    }
    if t_bfold.b == 1 {
        return Ok(t_bfold.clone());
    }
    let copies = t_bfold.b - 1;
    let out = Transferral {
        u: t_bfold.u,
        v: t_bfold.v,
        b: 1,
        t: multiset_sum(&t_bfold.t, &multiset_scaled(&t_rev.t, copies)),
        t_prime: multiset_sum(&t_bfold.t_prime, &multiset_scaled(&t_rev.t_prime, copies)),
    };
    debug_assert_eq!(out.size(), copies * t_rev.size() + t_bfold.size());
    debug_assert_eq!(verify_transferral(sys, &out), Ok(true));
    Ok(out)
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Occurrence list of a multiset's vertices in part `q`, sorted, with one
/// entry per covered slot.
fn part_occurrences(ms: &EdgeMultiset, p: &VertexPartition, q: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for (e, &count) in ms {
        for &v in e {
            if p.part_of(v) == q {
                for _ in 0..count {
                    out.push(v);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Grows the multisets `a` (graph edges) and `a_prime` (matching edges) into
/// a pair (T, T') with equal coverage counts, A inside T and A' inside T'.
///
/// Every edge of `a` is first mirrored by the least matching edge with the
/// same index under `p`; the leftover vertex imbalances are then paired off
/// within parts and cancelled by b_max!-fold combinations of searched
/// transferrals with fold count at most `b_max` and size at most `c_max`.
/// Fails with a not-found error if a needed pair has no such transferral or
/// the result would exceed `size_cap`.
pub fn cancel_and_extend(
    sys: &MatchedSystem,
    p: &VertexPartition,
    a: &EdgeMultiset,
    a_prime: &EdgeMultiset,
    b_max: usize,
    c_max: usize,
    size_cap: usize,
) -> Result<(EdgeMultiset, EdgeMultiset)> {
    if b_max == 0 {
        return Err(Error::InvalidInput("fold cap must be positive".into()));
    }
    for e in a.keys() {
        if !sys.graph().contains(e) {
            return Err(Error::InvalidInput(format!("{e:?} is not an edge of the graph")));
        }
    }
    for e in a_prime.keys() {
        if !sys.matching().contains(e) {
            return Err(Error::InvalidInput(format!("{e:?} is not a matching edge")));
        }
    }
    if !sys.is_proper(p)? {
        return Err(Error::InvalidInput(
            "matching does not attain every edge index of the graph".into(),
        ));
    }

    // mirror each edge of a by the least matching edge of equal index
    let s = multiset_sum(a, a_prime);
    let mut s_prime = a_prime.clone();
    for (e, &count) in a {
        let idx = p.index_vector(e);
        let mirror = sys
            .matching()
            .iter()
            .find(|m| p.index_vector(m) == idx)
            .expect("properness guarantees an index-matched matching edge");
        multiset_insert(&mut s_prime, mirror, count);
    }

    let fact = factorial(b_max);
    let mut t = multiset_scaled(&s, fact);
    let mut t_prime = multiset_scaled(&s_prime, fact);

    let search = TransferralSearch::new(sys, b_max, c_max);
    for q in 0..p.d() {
        let from = part_occurrences(&s, p, q);
        let to = part_occurrences(&s_prime, p, q);
        debug_assert_eq!(from.len(), to.len());
        for (&u, &v) in from.iter().zip(&to) {
            if u == v {
                continue;
            }
            // the surplus coverage sits at u on the graph side and at v on
            // the matching side, so the correction runs from v to u
            let tr = search.find(v, u).ok_or_else(|| {
                Error::NotFound(format!(
                    "no transferral from {v} to {u} with fold count <= {b_max}, size <= {c_max}"
                ))
            })?;
            debug_assert_eq!(fact % tr.b, 0);
            let copies = fact / tr.b;
            t = multiset_sum(&t, &multiset_scaled(&tr.t, copies));
            t_prime = multiset_sum(&t_prime, &multiset_scaled(&tr.t_prime, copies));
        }
    }

    debug_assert_eq!(multiset_chi(&t, sys.n()), multiset_chi(&t_prime, sys.n()));
    debug_assert_eq!(multiset_size(&t), multiset_size(&t_prime));
    debug_assert!(multiset_contains(&t, a) && multiset_contains(&t_prime, a_prime));
    if multiset_size(&t) > size_cap {
        return Err(Error::NotFound(format!(
            "cancelled pair has size {} exceeding the cap {size_cap}",
            multiset_size(&t)
        )));
    }
    Ok((t, t_prime))
}

type HalfState = (Vec<i64>, i64);

struct HalfNode {
    picks: u32,
    via: Option<(u32, i64)>,
}

/// Writes `x` as a difference of two multisets drawn from `vectors`, each of
/// at most `s` elements, minimizing the total number of summands.
///
/// Two half-depth tables of signed partial sums are joined in the middle;
/// states carry the surplus of positive picks so the per-side caps stay
/// checkable after the join.
pub fn small_sum_representation(
    vectors: &[Vec<i64>],
    x: &[i64],
    s: usize,
) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    let d = x.len();
    let mut pool: Vec<Vec<i64>> = vectors.to_vec();
    pool.sort();
    pool.dedup();
    if pool.iter().any(|v| v.len() != d) {
        return Err(Error::InvalidInput("vector dimensions disagree".into()));
    }
    let refs: Vec<&[i64]> = pool.iter().map(|v| v.as_slice()).collect();
    let lattice = IntegerLattice::from_i64(d, &refs)?;
    if !lattice.contains_i64(x) {
        return Err(Error::OutsideLattice);
    }

    // half-depth table of all signed partial sums with at most s picks
    let mut table: HashMap<HalfState, HalfNode> = HashMap::new();
    table.insert((vec![0i64; d], 0), HalfNode { picks: 0, via: None });
    let mut frontier = vec![(vec![0i64; d], 0i64)];
    for picks in 1..=s {
        let mut next = Vec::new();
        for (w, diff) in &frontier {
            for (i, v) in pool.iter().enumerate() {
                for sign in [1i64, -1] {
                    let w2: Vec<i64> =
                        w.iter().zip(v).map(|(a, b)| a + sign * b).collect();
                    let state = (w2, diff + sign);
                    if !table.contains_key(&state) {
                        next.push(state.clone());
                        table.insert(state, HalfNode { picks: picks as u32, via: Some((i as u32, sign)) });
                    }
                }
            }
        }
        frontier = next;
    }

    // join: first half reaches w, second half contributes x - w
    let mut keys: Vec<&HalfState> = table.keys().collect();
    keys.sort();
    let mut best: Option<(usize, HalfState, HalfState)> = None;
    for k1 in keys {
        let n1 = &table[k1];
        let (w1, d1) = k1;
        let w2: Vec<i64> = x.iter().zip(w1).map(|(a, b)| a - b).collect();
        for d2 in -(s as i64)..=(s as i64) {
            let k2 = (w2.clone(), d2);
            let Some(n2) = table.get(&k2) else { continue };
            let total = (n1.picks + n2.picks) as usize;
            let plus = (n1.picks as i64 + d1 + n2.picks as i64 + d2) / 2;
            let minus = total as i64 - plus;
            if plus as usize > s || minus < 0 || minus as usize > s {
                continue;
            }
            if best.as_ref().map_or(true, |(t, _, _)| total < *t) {
                best = Some((total, k1.clone(), k2));
            }
        }
    }
    let Some((_, k1, k2)) = best else {
        return Err(Error::NotFound(format!("no representation with at most {s} summands per side")));
    };

    let mut plus_side = Vec::new();
    let mut minus_side = Vec::new();
    for key in [k1, k2] {
        let (mut w, mut diff) = key;
        loop {
            let node = &table[&(w.clone(), diff)];
            let Some((i, sign)) = node.via else { break };
            let v = &pool[i as usize];
            if sign > 0 {
                plus_side.push(v.clone());
            } else {
                minus_side.push(v.clone());
            }
            for (a, b) in w.iter_mut().zip(v) {
                *a -= sign * b;
            }
            diff -= sign;
        }
    }
    plus_side.sort();
    minus_side.sort();
    Ok((plus_side, minus_side))
}

/// Caps for the transferral completion pipeline: fold and size caps for the
/// searched transferrals, the digraph size bound used for the refinement, and
/// the size budget for the final witnesses.
#[derive(Debug, Clone, Copy)]
pub struct PipelineParams {
    pub b_max: usize,
    pub c_max: usize,
    pub ell: usize,
    pub size_budget: usize,
}

/// Per-side summand cap used when expressing a unit difference of refined
/// parts over the attained edge indices.
const SMALL_SUM_CAP: usize = 12;

/// Fraction of the vertex count allowed as shortfall when carving the
/// receiving partition.
const RECEIVING_ALPHA: (i64, i64) = (1, 4);

#[derive(Debug)]
pub enum PipelineOutcome {
    /// Simple transferrals exist between all pairs inside each class; the
    /// digraph restricted to the classes is complete, with one verified
    /// witness per ordered pair.
    Complete {
        digraph: TransferralDigraph,
        witnesses: BTreeMap<(usize, usize), Transferral>,
        refinement: VertexPartition,
        irreducibility_regime: &'static str,
    },
    /// Some pair inside a class has no transferral within the fold and size
    /// caps.
    IrreducibilityFailure { pair: (usize, usize), regime: &'static str },
    /// The lattice of edge indices over the refined partition misses a unit
    /// difference required inside a class; the witness is that vector.
    LatticeIncomplete { witness: Vec<BigInt>, refinement: VertexPartition },
}

/// Number of pair probes attempted per class in the sampled irreducibility
/// regime.
const SAMPLED_PAIRS: usize = 200;

/// Runs the completion pipeline on a matched system whose classes are the
/// parts of `classes`: checks irreducibility, builds the size-`ell`
/// transferral digraph, carves receiving partitions inside each class,
/// tests the refined edge-index lattice, and stitches cross-part transferrals
/// from small index representations. Failures of the two structural stages
/// are reported as normal outcomes, not errors.
pub fn complete_transferral_digraph(
    sys: &MatchedSystem,
    classes: &VertexPartition,
    params: PipelineParams,
) -> Result<PipelineOutcome> {
    let n = sys.n();
    if classes.n() != n {
        return Err(Error::InvalidInput("partition is over a different vertex set".into()));
    }
    if params.ell < 2 {
        return Err(Error::InvalidInput("digraph size bound must be at least 2".into()));
    }
    if !sys.is_proper(classes)? {
        return Err(Error::InvalidInput(
            "matching does not attain every edge index of the graph".into(),
        ));
    }

    // irreducibility inside each class: exact at small n, sampled above
    let search_bc = TransferralSearch::new(sys, params.b_max, params.c_max);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for part in classes.parts() {
        for &u in part {
            for &v in part {
                if u != v {
                    pairs.push((u, v));
                }
            }
        }
    }
    let regime = if n <= 12 { "exact" } else { "sampled" };
    let stride = if n <= 12 { 1 } else { (pairs.len() / SAMPLED_PAIRS).max(1) };
    for pair in pairs.iter().step_by(stride) {
        if search_bc.find(pair.0, pair.1).is_none() {
            return Ok(PipelineOutcome::IrreducibilityFailure { pair: *pair, regime });
        }
    }

    // transferral digraph and a receiving partition inside each class
    let search_ell = TransferralSearch::new(sys, 1, params.ell);
    let dl = digraph_from_search(&search_ell, params.ell);
    let alpha = crate::lp::rational(RECEIVING_ALPHA.0, RECEIVING_ALPHA.1);
    let mut refined_parts: Vec<Vec<usize>> = Vec::new();
    let mut receivers: Vec<usize> = Vec::new();
    for class in classes.parts() {
        let (sub, labels) = dl.digraph.induced(class);
        let rp = receiving_partition(&sub, params.ell, &alpha)?;
        for (part, &recv) in rp.parts.iter().zip(&rp.receivers) {
            let mut global: Vec<usize> = part.iter().map(|&l| labels[l]).collect();
            global.sort_unstable();
            refined_parts.push(global);
            receivers.push(labels[recv]);
        }
    }
    let refinement = VertexPartition::new(n, refined_parts)?;
    let refined_parts: Vec<Vec<usize>> = refinement.parts().to_vec();
    // parts are disjoint, so membership recovers each part's receiver
    let receiver_of = |part: &[usize]| -> usize {
        *receivers.iter().find(|&&r| part.contains(&r)).expect("receiver lies in its part")
    };

    // simple transferrals within each refined part, through its receiver
    let mut witnesses: BTreeMap<(usize, usize), Transferral> = BTreeMap::new();
    for part in &refined_parts {
        let recv = receiver_of(part);
        let mut to_receiver: BTreeMap<usize, Transferral> = BTreeMap::new();
        for &u in part {
            let path = dl
                .digraph
                .shortest_path(u, recv)
                .ok_or_else(|| Error::NotFound(format!("no digraph path from {u} to {recv}")))?;
            let mut acc = Transferral::empty(u);
            for step in path.windows(2) {
                let leg = search_ell
                    .find(step[0], step[1])
                    .expect("digraph edges carry simple transferrals");
                acc = compose_simple(sys, &acc, &leg)?;
            }
            to_receiver.insert(u, acc);
        }
        for &u in part {
            for &v in part {
                let w = if u == v {
                    Transferral::empty(u)
                } else if v == recv {
                    to_receiver[&u].clone()
                } else {
                    let bfold = match search_bc.find(recv, v) {
                        Some(t) => t,
                        None => {
                            return Ok(PipelineOutcome::IrreducibilityFailure {
                                pair: (recv, v),
                                regime,
                            })
                        }
                    };
                    let downgraded = bidirectional_downgrade(sys, &bfold, &to_receiver[&v])?;
                    compose_simple(sys, &to_receiver[&u], &downgraded)?
                };
                witnesses.insert((u, v), w);
            }
        }
    }

    // the refined edge-index lattice must span unit differences inside classes
    let lattice = edge_lattice(sys.graph(), &refinement)?;
    let (complete, witness) = is_complete_wrt(&lattice, &refinement, classes)?;
    if !complete {
        return Ok(PipelineOutcome::LatticeIncomplete {
            witness: witness.expect("incompleteness carries a witness"),
            refinement,
        });
    }

    // cross-part pairs: realize each unit difference as a small signed sum of
    // attained edge indices, then cancel the leftover vertex imbalances
    let mut index_rep: BTreeMap<Vec<i64>, Edge> = BTreeMap::new();
    for e in sys.graph().edges() {
        let idx: Vec<i64> = refinement.index_vector(e).0.iter().map(|&c| c as i64).collect();
        index_rep.entry(idx).or_insert_with(|| e.clone());
    }
    let attained: Vec<Vec<i64>> = index_rep.keys().cloned().collect();
    let class_of_part: Vec<usize> = refinement.refinement_map(classes)?;

    for pi in 0..refined_parts.len() {
        for pj in 0..refined_parts.len() {
            if pi == pj || class_of_part[pi] != class_of_part[pj] {
                continue;
            }
            let mut x = vec![0i64; refined_parts.len()];
            x[pi] += 1;
            x[pj] -= 1;
            let (plus, minus) = small_sum_representation(&attained, &x, SMALL_SUM_CAP)?;
            let mut s_edges = EdgeMultiset::new();
            for idx in &plus {
                multiset_insert(&mut s_edges, &index_rep[idx], 1);
            }
            let mut t_edges = EdgeMultiset::new();
            for idx in &minus {
                multiset_insert(&mut t_edges, &index_rep[idx], 1);
            }

            // pair off the covered vertex slots of both sides, part by part;
            // the plus side has one spare slot in part pi, the minus side one
            // in part pj
            let mut u1 = None;
            let mut v1 = None;
            let mut pair_list: Vec<(usize, usize)> = Vec::new();
            for q in 0..refined_parts.len() {
                let mut from = part_occurrences(&s_edges, &refinement, q);
                let mut to = part_occurrences(&t_edges, &refinement, q);
                if q == pi {
                    u1 = from.pop();
                } else if q == pj {
                    v1 = to.pop();
                }
                debug_assert_eq!(from.len(), to.len());
                pair_list.extend(from.into_iter().zip(to));
            }
            let (u1, v1) = (
                u1.ok_or_else(|| Error::NotFound("no spare slot in the source part".into()))?,
                v1.ok_or_else(|| Error::NotFound("no spare slot in the target part".into()))?,
            );

            let (a1, a1_prime) = cancel_and_extend(
                sys,
                &refinement,
                &s_edges,
                &EdgeMultiset::new(),
                params.b_max,
                params.c_max,
                params.size_budget,
            )?;
            let mut t = multiset_sum(&multiset_difference(&a1, &s_edges)?, &t_edges);
            let mut t_prime = a1_prime;
            for (a, b) in pair_list {
                if a == b {
                    continue;
                }
                let leg = witnesses
                    .get(&(a, b))
                    .ok_or_else(|| Error::NotFound(format!("no intra-part witness ({a}, {b})")))?;
                t = multiset_sum(&t, &leg.t);
                t_prime = multiset_sum(&t_prime, &leg.t_prime);
            }
            let base = Transferral { u: v1, v: u1, b: 1, t, t_prime };
            if verify_transferral(sys, &base)? != true {
                return Err(Error::NotFound(format!(
                    "stitched transferral between parts {pi} and {pj} fails verification"
                )));
            }

            // extend to every ordered pair from part pj to part pi
            for &a in &refined_parts[pj] {
                for &b in &refined_parts[pi] {
                    let w = compose_simple(
                        sys,
                        &compose_simple(sys, &witnesses[&(a, v1)], &base)?,
                        &witnesses[&(u1, b)],
                    )?;
                    if w.size() > params.size_budget {
                        return Err(Error::NotFound(format!(
                            "witness for ({a}, {b}) has size {} over budget {}",
                            w.size(),
                            params.size_budget
                        )));
                    }
                    witnesses.insert((a, b), w);
                }
            }
        }
    }

    // assemble the digraph over all witnessed pairs
    let mut d = Digraph::new(n);
    let mut max_size = 0;
    for ((u, v), w) in &witnesses {
        d.add_edge(*u, *v);
        max_size = max_size.max(w.size());
    }
    for v in 0..n {
        d.add_edge(v, v);
    }
    Ok(PipelineOutcome::Complete {
        digraph: TransferralDigraph { ell: max_size, digraph: d },
        witnesses,
        refinement,
        irreducibility_regime: regime,
    })
}
