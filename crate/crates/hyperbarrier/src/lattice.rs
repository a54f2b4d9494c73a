//! Integer lattices over index vectors: Hermite normal form, membership,
//! completeness and minimality with explicit witnesses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::hypergraph::KGraph;
use crate::partition::VertexPartition;
use crate::{Error, Result};

/// A sublattice of Z^d, stored as a canonical Hermite normal form basis:
/// rows with strictly increasing pivot columns, positive pivots, and entries
/// above each pivot reduced into [0, pivot).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerLattice {
    d: usize,
    basis: Vec<Vec<BigInt>>,
}

impl IntegerLattice {
    pub fn from_generators(d: usize, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        for g in &generators {
            if g.len() != d {
                return Err(Error::InvalidInput(format!(
                    "generator of length {} in a dimension-{d} lattice",
                    g.len()
                )));
            }
        }
        Ok(IntegerLattice { d, basis: hermite_normal_form(generators, d) })
    }

    pub fn from_i64(d: usize, generators: &[&[i64]]) -> Result<Self> {
        IntegerLattice::from_generators(
            d,
            generators.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    pub fn zero(d: usize) -> Self {
        IntegerLattice { d, basis: vec![] }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// The canonical basis rows.
    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Membership by back-substitution along the pivot columns.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.d, "vector dimension mismatch");
        let mut rem = v.to_vec();
        for row in &self.basis {
            let pivot_col = row.iter().position(|x| !x.is_zero()).expect("basis row is nonzero");
            if rem[pivot_col].is_zero() {
                continue;
            }
            let (q, r) = rem[pivot_col].div_rem(&row[pivot_col]);
            if !r.is_zero() {
                return false;
            }
            for (x, b) in rem.iter_mut().zip(row) {
                *x -= &q * b;
            }
        }
        rem.iter().all(Zero::is_zero)
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        self.contains(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    /// Index of the lattice as a subgroup of Z^d: the product of the HNF
    /// pivots when the lattice has full rank, `None` (infinite) otherwise.
    pub fn subgroup_index(&self) -> Option<BigInt> {
        if self.rank() != self.d {
            return None;
        }
        Some(self.basis.iter().enumerate().map(|(i, row)| row[i].clone()).product())
    }

    /// Whether some lattice vector has coordinate sum exactly `target`:
    /// coordinate sums form the subgroup gcd(row sums) * Z.
    pub fn has_coordinate_sum(&self, target: i64) -> bool {
        let g = self
            .basis
            .iter()
            .map(|row| row.iter().sum::<BigInt>())
            .fold(BigInt::zero(), |acc, s| acc.gcd(&s));
        if g.is_zero() {
            return target == 0;
        }
        (BigInt::from(target) % g).is_zero()
    }
}

/// Row-style Hermite normal form; zero rows are dropped.
fn hermite_normal_form(mut rows: Vec<Vec<BigInt>>, d: usize) -> Vec<Vec<BigInt>> {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut done = 0;
    for col in 0..d {
        // Euclid on the column entries below `done`
        loop {
            let mut best: Option<usize> = None;
            for (i, row) in rows.iter().enumerate().skip(done) {
                if row[col].is_zero() {
                    continue;
                }
                if best.is_none_or(|b| rows[b][col].abs() > row[col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(done, b);
            let mut finished = true;
            for i in done + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = div_round(&rows[i][col], &rows[done][col]);
                for c in 0..d {
                    let sub = &q * &rows[done][c];
                    rows[i][c] -= sub;
                }
                if !rows[i][col].is_zero() {
                    finished = false;
                }
            }
            if finished {
                break;
            }
        }
        if done < rows.len() && !rows[done][col].is_zero() {
            if rows[done][col].is_negative() {
                for x in rows[done].iter_mut() {
                    *x = -&*x;
                }
            }
            // reduce the entries above the new pivot into [0, pivot)
            for i in 0..done {
                let q = rows[i][col].div_floor(&rows[done][col]);
                if !q.is_zero() {
                    for c in 0..d {
                        let sub = &q * &rows[done][c];
                        rows[i][c] -= sub;
                    }
                }
            }
            done += 1;
        }
    }
    rows.truncate(done);
    rows
}

/// Division rounded to nearest (ties toward floor), keeping remainders small.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    if &r * 2 > b.abs() {
        q + 1
    } else {
        q
    }
}

fn unit_difference(d: usize, i: usize, j: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); d];
    v[i] = BigInt::one();
    v[j] = -BigInt::one();
    v
}

/// Generators of the lattice of integer vectors with coordinate sum divisible
/// by k, in the order used for witness extraction: k times the first unit
/// vector, then the differences of unit vectors.
fn divisibility_generators(d: usize, k: usize) -> Vec<Vec<BigInt>> {
    let mut gens = Vec::new();
    let mut first = vec![BigInt::zero(); d];
    first[0] = BigInt::from(k);
    gens.push(first);
    for j in 1..d {
        gens.push(unit_difference(d, j, 0));
    }
    for i in 0..d {
        for j in 0..d {
            if i != j {
                gens.push(unit_difference(d, i, j));
            }
        }
    }
    gens
}

/// Classification of a lattice against the divisibility lattice for k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeClassification {
    pub complete: bool,
    pub minimal: bool,
    /// A generator of the divisibility lattice missing from L; present iff not complete.
    pub incompleteness_witness: Option<Vec<BigInt>>,
    /// Parts (i, j) whose unit-vector difference lies in L; present iff not minimal.
    pub nonminimality_witness: Option<(usize, usize)>,
}

/// Complete for k: contains every integer vector whose coordinate sum is
/// divisible by k. Returns the first missing generator as witness otherwise.
pub fn is_complete(l: &IntegerLattice, k: usize) -> (bool, Option<Vec<BigInt>>) {
    for g in divisibility_generators(l.d(), k) {
        if !l.contains(&g) {
            return (false, Some(g));
        }
    }
    (true, None)
}

/// Complete with respect to a coarsening: contains the difference of unit
/// vectors for every two parts of `p` lying in the same part of `coarser`.
pub fn is_complete_wrt(
    l: &IntegerLattice,
    p: &VertexPartition,
    coarser: &VertexPartition,
) -> Result<(bool, Option<Vec<BigInt>>)> {
    if l.d() != p.d() {
        return Err(Error::InvalidInput(format!(
            "lattice dimension {} does not match partition with {} parts",
            l.d(),
            p.d()
        )));
    }
    let map = p.refinement_map(coarser)?;
    for i in 0..p.d() {
        for j in 0..p.d() {
            if i != j && map[i] == map[j] {
                let g = unit_difference(l.d(), i, j);
                if !l.contains(&g) {
                    return Ok((false, Some(g)));
                }
            }
        }
    }
    Ok((true, None))
}

/// Minimal: contains no difference of two unit vectors. Returns the first
/// contained pair (i, j) otherwise.
pub fn is_minimal(l: &IntegerLattice) -> (bool, Option<(usize, usize)>) {
    for i in 0..l.d() {
        for j in i + 1..l.d() {
            if l.contains(&unit_difference(l.d(), i, j)) {
                return (false, Some((i, j)));
            }
        }
    }
    (true, None)
}

pub fn classify(l: &IntegerLattice, k: usize) -> LatticeClassification {
    let (complete, incompleteness_witness) = is_complete(l, k);
    let (minimal, nonminimality_witness) = is_minimal(l);
    LatticeClassification { complete, minimal, incompleteness_witness, nonminimality_witness }
}

/// Repeatedly merges pairs of parts whose unit-vector difference lies in the
/// lattice, folding the corresponding coordinates together, until the result
/// is minimal. Errors when the input is already minimal.
pub fn reduce_nonminimal(
    l: &IntegerLattice,
    p: &VertexPartition,
) -> Result<(IntegerLattice, VertexPartition)> {
    if l.d() != p.d() {
        return Err(Error::InvalidInput("lattice and partition dimensions differ".into()));
    }
    let (minimal, first) = is_minimal(l);
    if minimal {
        return Err(Error::AlreadyMinimal);
    }
    let mut lattice = l.clone();
    let mut parts: Vec<Vec<usize>> = p.parts().to_vec();
    let mut pair = first;
    while let Some((i, j)) = pair {
        // fold coordinate j into coordinate i; the quotient map sends the basis
        // onto a generating set of the merged lattice
        let gens: Vec<Vec<BigInt>> = lattice
            .basis()
            .iter()
            .map(|row| {
                let mut out = Vec::with_capacity(lattice.d() - 1);
                for (c, x) in row.iter().enumerate() {
                    if c == j {
                        continue;
                    }
                    if c == i {
                        out.push(x + &row[j]);
                    } else {
                        out.push(x.clone());
                    }
                }
                out
            })
            .collect();
        lattice = IntegerLattice::from_generators(lattice.d() - 1, gens)?;
        let moved = parts.remove(j);
        parts[i].extend(moved);
        parts[i].sort_unstable();
        pair = is_minimal(&lattice).1;
    }
    let partition = VertexPartition::new(p.n(), parts)?;
    Ok((lattice, partition))
}

/// Lattice spanned by the index vectors of all edges.
pub fn edge_lattice(g: &KGraph, p: &VertexPartition) -> Result<IntegerLattice> {
    if g.n() != p.n() {
        return Err(Error::InvalidInput("partition is over a different vertex set".into()));
    }
    let gens = g.edges().iter().map(|e| p.index_vector(e).to_ints()).collect();
    IntegerLattice::from_generators(p.d(), gens)
}

/// Lattice spanned by the index vectors attained by at least
/// `max(1, ceil(mu * n^k))` edges.
pub fn robust_edge_lattice(g: &KGraph, p: &VertexPartition, mu: &BigRational) -> Result<IntegerLattice> {
    if g.n() != p.n() {
        return Err(Error::InvalidInput("partition is over a different vertex set".into()));
    }
    let threshold = robust_threshold(g.n(), g.k(), mu);
    let counts = crate::density::count_by_index(g.edges(), p);
    let gens = counts
        .iter()
        .filter(|(_, &c)| BigInt::from(c) >= threshold)
        .map(|(i, _)| i.to_ints())
        .collect();
    IntegerLattice::from_generators(p.d(), gens)
}

/// The robustness cutoff `max(1, ceil(mu * n^k))`.
pub fn robust_threshold(n: usize, k: usize, mu: &BigRational) -> BigInt {
    let pow = BigInt::from(n).pow(k as u32);
    let cut = (mu * BigRational::from_integer(pow)).ceil().to_integer();
    cut.max(BigInt::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn lat(d: usize, gens: &[&[i64]]) -> IntegerLattice {
        IntegerLattice::from_i64(d, gens).unwrap()
    }

    #[test]
    fn hnf_of_even_first_coordinate_lattice() {
        let l = lat(2, &[&[-2, 2], &[0, 1]]);
        assert_eq!(l.basis(), &[vec![BigInt::from(2), BigInt::from(0)], vec![
            BigInt::from(0),
            BigInt::from(1)
        ]]);
        // membership is exactly "first coordinate even"
        for x in -4i64..=4 {
            for y in -4i64..=4 {
                assert_eq!(l.contains_i64(&[x, y]), x % 2 == 0, "({x},{y})");
            }
        }
        assert_eq!(l.subgroup_index(), Some(BigInt::from(2)));
    }

    #[test]
    fn hnf_of_congruent_pair_lattice() {
        // span of (-2,1,1), (1,-2,1), (1,0,0): membership is y = z (mod 3)
        let l = lat(3, &[&[-2, 1, 1], &[1, -2, 1], &[1, 0, 0]]);
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                for z in -3i64..=3 {
                    assert_eq!(l.contains_i64(&[x, y, z]), (y - z).rem_euclid(3) == 0);
                }
            }
        }
        assert_eq!(l.subgroup_index(), Some(BigInt::from(3)));
    }

    #[test]
    fn hnf_canonical_under_unimodular_regeneration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let d = rng.gen_range(1..=4);
            let rows = rng.gen_range(1..=d + 2);
            let gens: Vec<Vec<BigInt>> = (0..rows)
                .map(|_| (0..d).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect())
                .collect();
            let l = IntegerLattice::from_generators(d, gens.clone()).unwrap();

            // random integer row operations preserve the span
            let mut mixed = gens;
            mixed.push(vec![BigInt::zero(); d]);
            for _ in 0..12 {
                let a = rng.gen_range(0..mixed.len());
                let b = rng.gen_range(0..mixed.len());
                if a == b {
                    continue;
                }
                let c = BigInt::from(rng.gen_range(-3i64..=3));
                let src = mixed[b].clone();
                for (x, y) in mixed[a].iter_mut().zip(src) {
                    *x += &c * y;
                }
            }
            let l2 = IntegerLattice::from_generators(d, mixed).unwrap();
            assert_eq!(l, l2);
        }
    }

    #[test]
    fn membership_closed_under_addition_and_negation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let l = lat(3, &[&[2, 1, 0], &[0, 3, 1]]);
        let sample: Vec<Vec<BigInt>> = (0..40)
            .map(|_| {
                let a = BigInt::from(rng.gen_range(-3i64..=3));
                let b = BigInt::from(rng.gen_range(-3i64..=3));
                (0..3)
                    .map(|c| &a * &l.basis()[0][c] + &b * &l.basis()[1][c])
                    .collect()
            })
            .collect();
        for v in &sample {
            assert!(l.contains(v));
            let neg: Vec<BigInt> = v.iter().map(|x| -x).collect();
            assert!(l.contains(&neg));
            for w in &sample {
                let sum: Vec<BigInt> = v.iter().zip(w).map(|(a, b)| a + b).collect();
                assert!(l.contains(&sum));
            }
        }
    }

    #[test]
    fn completeness_witnesses() {
        let even = lat(2, &[&[-2, 2], &[0, 1]]);
        let (complete, witness) = is_complete(&even, 3);
        assert!(!complete);
        // first generator listed is 3*u_0 = (3, 0), which has odd first coordinate
        assert_eq!(witness, Some(vec![BigInt::from(3), BigInt::from(0)]));
        assert!(is_minimal(&even).0);

        let all = lat(2, &[&[1, 0], &[0, 1]]);
        assert!(is_complete(&all, 3).0);
        assert_eq!(is_minimal(&all).1, Some((0, 1)));

        let congr = lat(3, &[&[-2, 1, 1], &[1, -2, 1], &[1, 0, 0]]);
        let (complete, witness) = is_complete(&congr, 4);
        assert!(!complete);
        assert!(witness.is_some());
        assert!(is_minimal(&congr).0);
    }

    #[test]
    fn minimal_full_rank_lattice_has_index_at_least_d() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let mut found = 0;
        while found < 100 {
            let d = rng.gen_range(2..=4);
            let gens: Vec<Vec<BigInt>> = (0..d + 1)
                .map(|_| (0..d).map(|_| BigInt::from(rng.gen_range(-4i64..=4))).collect())
                .collect();
            let l = IntegerLattice::from_generators(d, gens).unwrap();
            if l.rank() < d || !is_minimal(&l).0 {
                continue;
            }
            found += 1;
            let index = l.subgroup_index().unwrap();
            assert!(index >= BigInt::from(d), "index {index} below d = {d}");
        }
    }

    #[test]
    fn reduction_merges_until_minimal() {
        // u_0 - u_1 inside: parts 0 and 1 merge
        let l = lat(3, &[&[1, -1, 0], &[2, 0, 1]]);
        let p = VertexPartition::new(5, vec![vec![0, 1], vec![2], vec![3, 4]]).unwrap();
        let (reduced, merged) = reduce_nonminimal(&l, &p).unwrap();
        assert!(is_minimal(&reduced).0);
        assert_eq!(merged.parts(), &[vec![0, 1, 2], vec![3, 4]]);
        // membership commutes with the fold: (x, y) lifts to (x, 0, y)
        for x in -4i64..=4 {
            for y in -2i64..=2 {
                assert_eq!(reduced.contains_i64(&[x, y]), l.contains_i64(&[x, 0, y]));
            }
        }

        let minimal = lat(2, &[&[2, 0], &[0, 3]]);
        let q = VertexPartition::consecutive(&[2, 2]).unwrap();
        assert!(matches!(reduce_nonminimal(&minimal, &q), Err(Error::AlreadyMinimal)));
    }

    #[test]
    fn completeness_equivalence_via_zero_sum_sublattice() {
        // whenever L has a vector of coordinate sum k, completeness for k is
        // the same as containing all unit-vector differences
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let k = 3i64;
        let mut tested = 0;
        while tested < 120 {
            let d = rng.gen_range(2..=4);
            let gens: Vec<Vec<BigInt>> = (0..rng.gen_range(1..=d + 1))
                .map(|_| (0..d).map(|_| BigInt::from(rng.gen_range(-4i64..=4))).collect())
                .collect();
            let l = IntegerLattice::from_generators(d, gens).unwrap();
            if !l.has_coordinate_sum(k) {
                continue;
            }
            tested += 1;
            let all_diffs = (0..d).all(|i| {
                (0..d).all(|j| i == j || l.contains(&unit_difference(d, i, j)))
            });
            assert_eq!(is_complete(&l, k as usize).0, all_diffs);
        }
    }

    #[test]
    fn robust_lattice_ignores_rare_indices() {
        // nine edges of index (1,2), one lone edge of index (2,1)
        let p = VertexPartition::consecutive(&[3, 3]).unwrap();
        let mut edges: Vec<Vec<usize>> = Vec::new();
        for e in crate::hypergraph::KGraph::complete(6, 3).edges() {
            if p.index_vector(e).0 == [1, 2] {
                edges.push(e.clone());
            }
        }
        edges.push(vec![0, 1, 3]);
        let g = KGraph::new(6, 3, edges).unwrap();
        let tiny = BigRational::new(BigInt::one(), BigInt::from(1000));
        let all = robust_edge_lattice(&g, &p, &tiny).unwrap();
        assert!(all.contains_i64(&[2, 1]));
        // threshold 2 excludes the lone (2,1) edge, and (2,1) is no multiple
        // of (1,2)
        let two = BigRational::new(BigInt::from(2), BigInt::from(216));
        assert_eq!(robust_threshold(6, 3, &two), BigInt::from(2));
        let robust = robust_edge_lattice(&g, &p, &two).unwrap();
        assert!(!robust.contains_i64(&[2, 1]));
        assert!(robust.contains_i64(&[1, 2]));
        assert!(robust.contains_i64(&[2, 4]));
    }
}
