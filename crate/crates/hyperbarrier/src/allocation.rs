//! Allocations: multisets of functions `[k] -> [r]` closed under coordinate
//! permutations, used to prescribe how the k vertices of an edge are spread
//! over r vertex classes.

use std::collections::{BTreeMap, BTreeSet};

use crate::partition::IndexVector;
use crate::{Error, Result};

/// A permutation-closed multiset of functions `{0..k} -> {0..r}`, determined
/// by the multiset of their index vectors. A function with index vector `i`
/// occurs `m_i * prod_q i_q!` times, where `m_i` is the multiplicity of `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    k: usize,
    r: usize,
    /// function (as a length-k vector of class indices) -> multiplicity
    functions: BTreeMap<Vec<usize>, usize>,
    index_multiset: BTreeMap<IndexVector, usize>,
    uniform: bool,
    connected: bool,
}

#[derive(Debug, Clone)]
pub enum AllocationKind {
    /// r = 1: all k vertices in a single class (k! copies of the one function).
    Nonpartite,
    /// All injections, one vertex per class; requires r >= k.
    PartiteInjective,
    /// Explicit index multiset; every index vector must have weight k and length r.
    FromIndexSet(Vec<(IndexVector, usize)>),
}

impl Allocation {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Distinct functions with their multiplicities.
    pub fn functions(&self) -> &BTreeMap<Vec<usize>, usize> {
        &self.functions
    }

    /// The index multiset I(F).
    pub fn index_multiset(&self) -> &BTreeMap<IndexVector, usize> {
        &self.index_multiset
    }

    /// Distinct index vectors, in lexicographic order.
    pub fn indices(&self) -> impl Iterator<Item = &IndexVector> {
        self.index_multiset.keys()
    }

    /// Number of index vectors counted with multiplicity.
    pub fn index_count(&self) -> usize {
        self.index_multiset.values().sum()
    }

    /// Total number of functions counted with multiplicity; always k! * index_count.
    pub fn size(&self) -> usize {
        self.functions.values().sum()
    }

    /// Every (position, class) pair is hit by exactly size/r functions.
    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// Some connected graph on the classes links every pair of classes that
    /// must exchange vertices.
    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// True when an edge with the given index vector can be labelled by some
    /// prefix of a function of the allocation.
    pub fn admits_index(&self, i: &IndexVector) -> bool {
        self.index_multiset.keys().any(|full| i.le(full))
    }
}

pub fn build_allocation(k: usize, r: usize, kind: AllocationKind) -> Result<Allocation> {
    if k == 0 || r == 0 {
        return Err(Error::InvalidInput("allocation needs k >= 1 and r >= 1".into()));
    }
    let index_multiset: BTreeMap<IndexVector, usize> = match kind {
        AllocationKind::Nonpartite => {
            if r != 1 {
                return Err(Error::InvalidInput(format!("nonpartite allocation needs r = 1, got {r}")));
            }
            [(IndexVector(vec![k]), 1)].into()
        }
        AllocationKind::PartiteInjective => {
            if r < k {
                return Err(Error::InvalidInput(format!("injective allocation needs r >= k ({r} < {k})")));
            }
            let mut set = BTreeMap::new();
            for ones in ones_vectors(r, k) {
                set.insert(IndexVector(ones), 1);
            }
            set
        }
        AllocationKind::FromIndexSet(list) => {
            let mut set = BTreeMap::new();
            for (i, m) in list {
                if i.d() != r || i.weight() != k {
                    return Err(Error::InvalidInput(format!(
                        "index vector {:?} is not a weight-{k} vector over {r} classes",
                        i.0
                    )));
                }
                if m == 0 {
                    return Err(Error::InvalidInput("index multiplicity must be positive".into()));
                }
                *set.entry(i).or_insert(0) += m;
            }
            if set.is_empty() {
                return Err(Error::InvalidInput("allocation needs at least one index vector".into()));
            }
            set
        }
    };

    let mut functions: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (i, &m) in &index_multiset {
        let weight: usize = m * i.0.iter().map(|&c| factorial(c)).product::<usize>();
        for f in functions_with_index(&i.0) {
            *functions.entry(f).or_insert(0) += weight;
        }
    }

    let size: usize = functions.values().sum();
    debug_assert_eq!(size, factorial(k) * index_multiset.values().sum::<usize>());

    // Uniformity: every (position, class) pair hit by exactly size/r functions.
    let mut uniform = size % r == 0;
    if uniform {
        let share = size / r;
        'outer: for pos in 0..k {
            for class in 0..r {
                let hit: usize =
                    functions.iter().filter(|(f, _)| f[pos] == class).map(|(_, m)| m).sum();
                if hit != share {
                    uniform = false;
                    break 'outer;
                }
            }
        }
    }

    let connected = connectivity(&index_multiset, k, r);

    Ok(Allocation { k, r, functions, index_multiset, uniform, connected })
}

/// Classes j, j' can exchange vertices when some index vector uses both; the
/// allocation is connected when these exchange edges connect all r classes.
/// For k = 1 no pair of positions exists, so any graph qualifies.
fn connectivity(index_multiset: &BTreeMap<IndexVector, usize>, k: usize, r: usize) -> bool {
    if k == 1 {
        return true;
    }
    let mut dsu: Vec<usize> = (0..r).collect();
    fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
        if dsu[x] != x {
            let root = find(dsu, dsu[x]);
            dsu[x] = root;
        }
        dsu[x]
    }
    for i in index_multiset.keys() {
        let used: Vec<usize> =
            i.0.iter().enumerate().filter(|(_, &c)| c > 0).map(|(q, _)| q).collect();
        // a class holding two vertices of one edge exchanges with itself (no edge needed);
        // distinct used classes of one index vector are pairwise linked
        for w in used.windows(2) {
            let (a, b) = (find(&mut dsu, w[0]), find(&mut dsu, w[1]));
            dsu[a] = b;
        }
    }
    let root = find(&mut dsu, 0);
    (0..r).all(|q| find(&mut dsu, q) == root)
}

fn factorial(c: usize) -> usize {
    (1..=c).product()
}

/// All 0/1 vectors of length r with exactly k ones.
fn ones_vectors(r: usize, k: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..r)
        .combinations(k)
        .map(|support| {
            let mut v = vec![0; r];
            for q in support {
                v[q] = 1;
            }
            v
        })
        .collect()
}

/// All distinct functions [k] -> [r] whose index vector is `i` (multiset permutations).
fn functions_with_index(i: &[usize]) -> Vec<Vec<usize>> {
    let mut letters = Vec::new();
    for (q, &c) in i.iter().enumerate() {
        letters.extend(std::iter::repeat(q).take(c));
    }
    let mut out = BTreeSet::new();
    permute_distinct(&mut letters, 0, &mut out);
    out.into_iter().collect()
}

fn permute_distinct(letters: &mut Vec<usize>, from: usize, out: &mut BTreeSet<Vec<usize>>) {
    if from == letters.len() {
        out.insert(letters.clone());
        return;
    }
    let mut seen = BTreeSet::new();
    for i in from..letters.len() {
        if seen.insert(letters[i]) {
            letters.swap(from, i);
            permute_distinct(letters, from + 1, out);
            letters.swap(from, i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonpartite_is_k_factorial_copies() {
        let f = build_allocation(3, 1, AllocationKind::Nonpartite).unwrap();
        assert_eq!(f.size(), 6);
        assert_eq!(f.functions().len(), 1);
        assert_eq!(f.functions()[&vec![0, 0, 0]], 6);
        assert!(f.is_uniform());
        assert!(f.is_connected());
    }

    #[test]
    fn injective_allocation_counts() {
        let f = build_allocation(2, 3, AllocationKind::PartiteInjective).unwrap();
        // 3 choose 2 index vectors, each giving 2! injections of multiplicity 1
        assert_eq!(f.index_multiset().len(), 3);
        assert_eq!(f.size(), 6);
        assert_eq!(f.functions().len(), 6);
        assert!(f.is_uniform());
        assert!(f.is_connected());
    }

    #[test]
    fn size_is_k_factorial_times_index_count() {
        let f = build_allocation(
            3,
            2,
            AllocationKind::FromIndexSet(vec![
                (IndexVector(vec![2, 1]), 1),
                (IndexVector(vec![0, 3]), 2),
            ]),
        )
        .unwrap();
        assert_eq!(f.index_count(), 3);
        assert_eq!(f.size(), 18);
        // (2,1) gives 3 functions of multiplicity 2; (0,3) one function of multiplicity 12
        assert_eq!(f.functions()[&vec![0, 0, 1]], 2);
        assert_eq!(f.functions()[&vec![1, 1, 1]], 12);
    }

    #[test]
    fn sym_closure_holds_by_construction() {
        let f = build_allocation(
            3,
            2,
            AllocationKind::FromIndexSet(vec![(IndexVector(vec![2, 1]), 1)]),
        )
        .unwrap();
        for (func, &m) in f.functions() {
            let mut swapped = func.clone();
            swapped.swap(0, 2);
            assert_eq!(f.functions().get(&swapped), Some(&m));
        }
    }

    #[test]
    fn uniformity_and_connectivity_flags() {
        // all mass on one class of two: neither uniform nor connected
        let lop = build_allocation(
            2,
            2,
            AllocationKind::FromIndexSet(vec![(IndexVector(vec![2, 0]), 1)]),
        )
        .unwrap();
        assert!(!lop.is_uniform());
        assert!(!lop.is_connected());

        // balanced split across both classes: uniform and connected
        let bal = build_allocation(
            2,
            2,
            AllocationKind::FromIndexSet(vec![(IndexVector(vec![1, 1]), 1)]),
        )
        .unwrap();
        assert!(bal.is_uniform());
        assert!(bal.is_connected());

        // both classes used but never together: uniform yet disconnected
        let split = build_allocation(
            2,
            2,
            AllocationKind::FromIndexSet(vec![
                (IndexVector(vec![2, 0]), 1),
                (IndexVector(vec![0, 2]), 1),
            ]),
        )
        .unwrap();
        assert!(split.is_uniform());
        assert!(!split.is_connected());
    }
}
