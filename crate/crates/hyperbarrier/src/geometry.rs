//! Fractional perfect matchings and their duals, balanced variants over an
//! allocation, and exact Caratheodory reduction of convex combinations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::allocation::Allocation;
use crate::hypergraph::{Edge, KGraph};
use crate::lp::{self, dot, EqFeasibility};
use crate::partition::{IndexVector, VertexPartition};
use crate::{Error, Result};

/// Non-negative edge weights summing to exactly one at every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalMatching {
    /// Only edges with non-zero weight are listed.
    pub weights: BTreeMap<Edge, BigRational>,
    /// When produced by the balanced solver: the distinct index vectors over
    /// which the per-index weight totals agree (after dividing multiplicities).
    pub balanced_over: Option<Vec<IndexVector>>,
}

impl FractionalMatching {
    /// Exact re-check of the matching conditions against a host graph.
    pub fn verify(&self, g: &KGraph) -> Result<()> {
        let mut sums = vec![BigRational::zero(); g.n()];
        for (e, w) in &self.weights {
            if !g.contains(e) {
                return Err(Error::InvalidInput(format!("weighted non-edge {e:?}")));
            }
            if w.is_negative() || w.is_zero() {
                return Err(Error::InvalidInput(format!("non-positive weight on {e:?}")));
            }
            for &v in e {
                sums[v] += w;
            }
        }
        for (v, s) in sums.iter().enumerate() {
            if !s.is_one() {
                return Err(Error::InvalidInput(format!("vertex {v} has weight sum {s}")));
            }
        }
        Ok(())
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    /// Total weight per index vector, divided by the index multiplicity.
    pub fn index_shares(
        &self,
        p: &VertexPartition,
        f: &Allocation,
    ) -> BTreeMap<IndexVector, BigRational> {
        let mut shares: BTreeMap<IndexVector, BigRational> =
            f.index_multiset().keys().map(|i| (i.clone(), BigRational::zero())).collect();
        for (e, w) in &self.weights {
            let i = p.index_vector(e);
            if let Some(s) = shares.get_mut(&i) {
                *s += w;
            }
        }
        for (i, s) in shares.iter_mut() {
            let m = f.index_multiset()[i];
            *s /= BigRational::from_integer(BigInt::from(m));
        }
        shares
    }
}

/// A dual witness that no fractional perfect matching exists: a vertex
/// weighting that is non-negative on every edge yet negative in total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub a: Vec<BigRational>,
}

impl FarkasCertificate {
    pub fn verify(&self, g: &KGraph) -> Result<()> {
        if self.a.len() != g.n() {
            return Err(Error::InvalidInput("certificate length differs from n".into()));
        }
        let total: BigRational = self.a.iter().sum();
        if !total.is_negative() {
            return Err(Error::InvalidInput(format!("certificate has total {total} >= 0")));
        }
        for e in g.edges() {
            let s: BigRational = e.iter().map(|&v| self.a[v].clone()).sum();
            if s.is_negative() {
                return Err(Error::InvalidInput(format!("certificate is negative on edge {e:?}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum FpmOutcome {
    Matching(FractionalMatching),
    Certificate(FarkasCertificate),
}

/// Decides, exactly, whether the edge characteristic vectors positively span
/// the all-ones vector. Exactly one of the two outcomes exists.
pub fn fpm_or_certificate(g: &KGraph) -> FpmOutcome {
    let edges: Vec<&Edge> = g.edges().iter().collect();
    let mut a = vec![vec![BigRational::zero(); edges.len()]; g.n()];
    for (j, e) in edges.iter().enumerate() {
        for &v in e.iter() {
            a[v][j] = BigRational::one();
        }
    }
    let b = vec![BigRational::one(); g.n()];
    match lp::equality_feasibility(&a, &b) {
        EqFeasibility::Feasible(w) => {
            let weights = edges
                .iter()
                .zip(&w)
                .filter(|(_, wi)| !wi.is_zero())
                .map(|(e, wi)| ((*e).clone(), wi.clone()))
                .collect();
            FpmOutcome::Matching(FractionalMatching { weights, balanced_over: None })
        }
        EqFeasibility::Infeasible(farkas) => {
            FpmOutcome::Certificate(FarkasCertificate { a: farkas })
        }
    }
}

pub fn fractional_perfect_matching(g: &KGraph) -> Option<FractionalMatching> {
    match fpm_or_certificate(g) {
        FpmOutcome::Matching(m) => Some(m),
        FpmOutcome::Certificate(_) => None,
    }
}

pub fn farkas_certificate(g: &KGraph) -> Option<FarkasCertificate> {
    match fpm_or_certificate(g) {
        FpmOutcome::Matching(_) => None,
        FpmOutcome::Certificate(c) => Some(c),
    }
}

/// Fractional perfect matching whose per-index weight shares agree across the
/// allocation's index vectors. Every edge must have an admissible index.
/// A basic solution is returned, so the support stays within the number of
/// constraint rows.
pub fn f_balanced_fpm(
    g: &KGraph,
    p: &VertexPartition,
    f: &Allocation,
) -> Result<Option<FractionalMatching>> {
    if p.n() != g.n() {
        return Err(Error::InvalidInput("partition is over a different vertex set".into()));
    }
    if p.d() != f.r() {
        return Err(Error::InvalidInput(format!(
            "allocation has {} classes but partition has {} parts",
            f.r(),
            p.d()
        )));
    }
    if f.k() != g.k() {
        return Err(Error::InvalidInput("allocation arity differs from graph uniformity".into()));
    }
    let indices: Vec<&IndexVector> = f.index_multiset().keys().collect();
    let edges: Vec<&Edge> = g.edges().iter().collect();
    let edge_index: Vec<usize> = edges
        .iter()
        .map(|e| {
            let i = p.index_vector(e);
            indices
                .iter()
                .position(|&cand| cand == &i)
                .ok_or_else(|| Error::InvalidInput(format!("edge {e:?} has inadmissible index {:?}", i.0)))
        })
        .collect::<Result<_>>()?;

    let t = indices.len();
    let rows = g.n() + t.saturating_sub(1);
    let mut a = vec![vec![BigRational::zero(); edges.len()]; rows];
    let mut b = vec![BigRational::zero(); rows];
    for (j, e) in edges.iter().enumerate() {
        for &v in e.iter() {
            a[v][j] = BigRational::one();
        }
    }
    for v in 0..g.n() {
        b[v] = BigRational::one();
    }
    // share(i_0) - share(i_s) = 0 for s = 1..t, with share = total / multiplicity
    let inv_mult = |s: usize| {
        BigRational::new(BigInt::one(), BigInt::from(f.index_multiset()[indices[s]]))
    };
    for s in 1..t {
        for (j, &ei) in edge_index.iter().enumerate() {
            if ei == 0 {
                a[g.n() + s - 1][j] = inv_mult(0);
            } else if ei == s {
                a[g.n() + s - 1][j] = -inv_mult(s);
            }
        }
    }
    match lp::equality_feasibility(&a, &b) {
        EqFeasibility::Feasible(w) => {
            let weights: BTreeMap<Edge, BigRational> = edges
                .iter()
                .zip(&w)
                .filter(|(_, wi)| !wi.is_zero())
                .map(|(e, wi)| ((*e).clone(), wi.clone()))
                .collect();
            debug_assert!(weights.len() <= rows);
            let fm = FractionalMatching {
                weights,
                balanced_over: Some(indices.into_iter().cloned().collect()),
            };
            Ok(Some(fm))
        }
        EqFeasibility::Infeasible(_) => Ok(None),
    }
}

/// A transversal family: sets of edges, one per index vector of the
/// allocation, with positive coefficients; the weighted characteristic
/// vectors of the sets sum to all-ones.
pub type UniformCover = Vec<(Vec<Edge>, BigRational)>;

/// Rebuilds, from a balanced fractional perfect matching, an explicit convex
/// generation of the all-ones vector by transversal edge sets: repeatedly take
/// the least-weight edge, complete it to one edge per index vector, and
/// subtract. Requires every index multiplicity to be one.
pub fn balanced_matching_to_cover(
    fm: &FractionalMatching,
    p: &VertexPartition,
    f: &Allocation,
) -> Result<UniformCover> {
    if f.index_multiset().values().any(|&m| m != 1) {
        return Err(Error::InvalidInput("index multiset has repeated vectors".into()));
    }
    let mut weights: BTreeMap<Edge, BigRational> = fm.weights.clone();
    let mut cover: UniformCover = Vec::new();
    loop {
        weights.retain(|_, w| !w.is_zero());
        let Some((e0, w0)) = weights
            .iter()
            .min_by(|(ea, wa), (eb, wb)| wa.cmp(wb).then_with(|| ea.cmp(eb)))
            .map(|(e, w)| (e.clone(), w.clone()))
        else {
            break;
        };
        let i0 = p.index_vector(&e0);
        let mut t_set = vec![e0.clone()];
        for i in f.indices() {
            if *i == i0 {
                continue;
            }
            let pick = weights
                .iter()
                .find(|(e, w)| !w.is_zero() && &p.index_vector(e) == i)
                .map(|(e, _)| e.clone())
                .ok_or_else(|| {
                    Error::NotFound(format!("no remaining weight at index {:?}", i.0))
                })?;
            t_set.push(pick);
        }
        for e in &t_set {
            let w = weights.get_mut(e).expect("member edge has weight");
            *w -= &w0;
        }
        cover.push((t_set, w0));
    }
    Ok(cover)
}

/// A convex combination certificate: support indices into the point list,
/// exact coefficients, and the denominator bound they satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexCombination {
    pub support: Vec<usize>,
    pub coefficients: Vec<BigRational>,
    pub denominator_bound: BigInt,
}

/// Writes x as a convex combination of affinely independent points of the
/// list, so the support has at most d+1 points and the coefficients are
/// rationals with denominator at most q^2 (r-1)! (4k)^(r-1), where 2k bounds
/// the norms. Inputs must have denominators at most q. When x lies outside
/// the hull a separating functional is returned as the error.
pub fn caratheodory_reduce(
    points: &[Vec<BigRational>],
    x: &[BigRational],
    q: &BigInt,
) -> Result<ConvexCombination> {
    if points.is_empty() {
        return Err(Error::InvalidInput("empty point set".into()));
    }
    let d = x.len();
    if points.iter().any(|p| p.len() != d) {
        return Err(Error::InvalidInput("points of mixed dimension".into()));
    }
    if q < &BigInt::one() {
        return Err(Error::InvalidInput("q must be a positive integer".into()));
    }
    for coord in points.iter().flatten().chain(x.iter()) {
        if coord.denom() > q {
            return Err(Error::InvalidInput(format!(
                "coordinate {coord} has denominator above q = {q}"
            )));
        }
    }

    // homogenize: columns (p_j, 1), target (x, 1)
    let mut a = vec![vec![BigRational::zero(); points.len()]; d + 1];
    for (j, p) in points.iter().enumerate() {
        for (i, c) in p.iter().enumerate() {
            a[i][j] = c.clone();
        }
        a[d][j] = BigRational::one();
    }
    let mut b: Vec<BigRational> = x.to_vec();
    b.push(BigRational::one());

    let lambda = match lp::equality_feasibility(&a, &b) {
        EqFeasibility::Feasible(l) => l,
        EqFeasibility::Infeasible(farkas) => {
            let separator: Vec<BigRational> = farkas[..d].to_vec();
            let offset = -farkas[d].clone();
            debug_assert!(
                points.iter().all(|p| dot(&separator, p) >= offset)
                    && dot(&separator, x) < offset
            );
            return Err(Error::OutsideHull { separator, offset });
        }
    };

    let support: Vec<usize> =
        (0..points.len()).filter(|&j| !lambda[j].is_zero()).collect();
    let coefficients: Vec<BigRational> = support.iter().map(|&j| lambda[j].clone()).collect();
    let r = support.len();
    debug_assert!(r <= d + 1, "basic solution exceeds d+1 points");

    // smallest k with every point in the radius-2k ball
    let max_norm_sq = points
        .iter()
        .map(|p| dot(p, p))
        .max()
        .unwrap_or_else(BigRational::zero);
    let mut k = BigInt::one();
    while BigRational::from_integer(&k * &k * BigInt::from(4)) < max_norm_sq {
        k += BigInt::one();
    }
    let bound = caratheodory_denominator_bound(q, r, &k);
    debug_assert!(coefficients.iter().all(|c| c.denom() <= &bound));

    Ok(ConvexCombination { support, coefficients, denominator_bound: bound })
}

impl ConvexCombination {
    /// Exact re-check: coefficients positive, summing to one, reconstructing x,
    /// with affinely independent support and denominators within the bound.
    pub fn verify(&self, points: &[Vec<BigRational>], x: &[BigRational]) -> Result<()> {
        if self.support.len() != self.coefficients.len() {
            return Err(Error::InvalidInput("support and coefficient lengths differ".into()));
        }
        let total: BigRational = self.coefficients.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidInput(format!("coefficients sum to {total}")));
        }
        let d = x.len();
        let mut rebuilt = vec![BigRational::zero(); d];
        for (&j, c) in self.support.iter().zip(&self.coefficients) {
            if !c.is_positive() {
                return Err(Error::InvalidInput("non-positive coefficient".into()));
            }
            if c.denom() > &self.denominator_bound {
                return Err(Error::InvalidInput(format!(
                    "denominator {} above bound {}",
                    c.denom(),
                    self.denominator_bound
                )));
            }
            for (slot, coord) in rebuilt.iter_mut().zip(&points[j]) {
                *slot += c * coord;
            }
        }
        if rebuilt != x {
            return Err(Error::InvalidInput("combination does not reconstruct x".into()));
        }
        if self.support.len() > d + 1 {
            return Err(Error::InvalidInput("support larger than d+1".into()));
        }
        // affine independence of the support points
        if self.support.len() > 1 {
            let base = &points[self.support[0]];
            let diffs: Vec<Vec<BigRational>> = self.support[1..]
                .iter()
                .map(|&j| points[j].iter().zip(base).map(|(a, b)| a - b).collect())
                .collect();
            if rank(&diffs) < diffs.len() {
                return Err(Error::InvalidInput("support is affinely dependent".into()));
            }
        }
        Ok(())
    }
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pivot);
        let p = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x /= &p;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let src = m[r].clone();
                for (x, s) in m[i].iter_mut().zip(src) {
                    *x -= &f * s;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// The exact q' = q^2 (r-1)! (4k)^(r-1) bound for given parameters; exposed
/// so callers can pin the constant independently of a particular run.
pub fn caratheodory_denominator_bound(q: &BigInt, r: usize, k: &BigInt) -> BigInt {
    let mut bound = q * q;
    for i in 1..r {
        bound *= BigInt::from(i) * BigInt::from(4) * k;
    }
    bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::downward_closure;
    use crate::lp::{int, rational};

    #[test]
    fn complete_graph_has_fpm() {
        let g = KGraph::complete(6, 3);
        let fm = fractional_perfect_matching(&g).unwrap();
        fm.verify(&g).unwrap();
        assert!(farkas_certificate(&g).is_none());
    }

    #[test]
    fn odd_cycle_has_fpm_but_no_integral_matching() {
        let g = KGraph::new(5, 2, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![0, 4]])
            .unwrap();
        let fm = fractional_perfect_matching(&g).unwrap();
        fm.verify(&g).unwrap();
        // every edge must carry weight 1/2
        assert!(fm.weights.values().all(|w| *w == rational(1, 2)));
    }

    #[test]
    fn isolated_vertex_gives_certificate() {
        let g = KGraph::new(4, 2, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let cert = farkas_certificate(&g).unwrap();
        cert.verify(&g).unwrap();
        assert!(fractional_perfect_matching(&g).is_none());
    }

    #[test]
    fn balanced_matching_respects_shares() {
        let p = VertexPartition::consecutive(&[3, 3]).unwrap();
        let f = crate::allocation::build_allocation(
            3,
            2,
            crate::allocation::AllocationKind::FromIndexSet(vec![
                (IndexVector(vec![2, 1]), 1),
                (IndexVector(vec![1, 2]), 1),
            ]),
        )
        .unwrap();
        // all edges with index (2,1) or (1,2)
        let edges: Vec<Edge> = KGraph::complete(6, 3)
            .edges()
            .iter()
            .filter(|e| {
                let i = p.index_vector(e);
                i == IndexVector(vec![2, 1]) || i == IndexVector(vec![1, 2])
            })
            .cloned()
            .collect();
        let g = KGraph::new(6, 3, edges).unwrap();
        let fm = f_balanced_fpm(&g, &p, &f).unwrap().unwrap();
        fm.verify(&g).unwrap();
        let shares = fm.index_shares(&p, &f);
        let vals: Vec<&BigRational> = shares.values().collect();
        assert!(vals.windows(2).all(|w| w[0] == w[1]));

        let cover = balanced_matching_to_cover(&fm, &p, &f).unwrap();
        let mut totals = vec![BigRational::zero(); 6];
        for (t_set, c) in &cover {
            assert_eq!(t_set.len(), 2);
            for e in t_set {
                for &v in e {
                    totals[v] += c;
                }
            }
        }
        assert!(totals.iter().all(BigRational::is_one));
    }

    #[test]
    fn caratheodory_reduces_to_simplex_support() {
        // centre of a square: four points, but three suffice
        let pts = vec![
            vec![int(0), int(0)],
            vec![int(2), int(0)],
            vec![int(0), int(2)],
            vec![int(2), int(2)],
        ];
        let x = vec![int(1), int(1)];
        let comb = caratheodory_reduce(&pts, &x, &BigInt::one()).unwrap();
        comb.verify(&pts, &x).unwrap();
        assert!(comb.support.len() <= 3);
    }

    #[test]
    fn caratheodory_rejects_outside_points() {
        let pts = vec![vec![int(0), int(0)], vec![int(1), int(0)]];
        let x = vec![int(0), int(1)];
        match caratheodory_reduce(&pts, &x, &BigInt::one()) {
            Err(Error::OutsideHull { separator, offset }) => {
                for p in &pts {
                    assert!(dot(&separator, p) >= offset);
                }
                assert!(dot(&separator, &x) < offset);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fpm_of_closed_system_top_level() {
        let g = downward_closure(&KGraph::complete(6, 3)).top();
        assert!(fractional_perfect_matching(&g).is_some());
    }
}
