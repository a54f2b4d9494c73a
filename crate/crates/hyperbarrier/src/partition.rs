//! Ordered vertex partitions and index vectors of edges.

use crate::hypergraph::Edge;
use crate::{Error, Result};

/// An ordered partition of `0..n` into non-empty parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPartition {
    parts: Vec<Vec<usize>>,
    part_of: Vec<usize>,
}

impl VertexPartition {
    pub fn new(n: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        let mut part_of = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::InvalidInput(format!("part {i} is empty")));
            }
            for &v in part {
                if v >= n {
                    return Err(Error::InvalidInput(format!("vertex {v} out of range (n = {n})")));
                }
                if part_of[v] != usize::MAX {
                    return Err(Error::InvalidInput(format!("vertex {v} appears in two parts")));
                }
                part_of[v] = i;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidInput(format!("vertex {v} not covered by any part")));
        }
        let parts = parts
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p
            })
            .collect();
        Ok(VertexPartition { parts, part_of })
    }

    /// The partition with a single part.
    pub fn trivial(n: usize) -> Self {
        VertexPartition::new(n, vec![(0..n).collect()]).expect("trivial partition")
    }

    /// Consecutive blocks of the given sizes: part 0 is `0..sizes[0]` and so on.
    pub fn consecutive(sizes: &[usize]) -> Result<Self> {
        let n: usize = sizes.iter().sum();
        let mut parts = Vec::with_capacity(sizes.len());
        let mut next = 0;
        for &s in sizes {
            parts.push((next..next + s).collect());
            next += s;
        }
        VertexPartition::new(n, parts)
    }

    pub fn n(&self) -> usize {
        self.part_of.len()
    }

    pub fn d(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    /// Number of vertices of `e` in each part.
    pub fn index_vector(&self, e: &[usize]) -> IndexVector {
        let mut counts = vec![0usize; self.d()];
        for &v in e {
            counts[self.part_of[v]] += 1;
        }
        IndexVector(counts)
    }

    /// Index vector of the whole vertex set, i.e. the part sizes.
    pub fn total_index(&self) -> IndexVector {
        IndexVector(self.sizes())
    }

    /// True when the edge meets every part at most once.
    pub fn is_partite_edge(&self, e: &[usize]) -> bool {
        self.index_vector(e).0.iter().all(|&c| c <= 1)
    }

    /// If every part of `self` lies inside a part of `coarser`, returns the
    /// map sending each part index of `self` to its part index in `coarser`.
    pub fn refinement_map(&self, coarser: &VertexPartition) -> Result<Vec<usize>> {
        if self.n() != coarser.n() {
            return Err(Error::InvalidInput("partitions are over different vertex sets".into()));
        }
        let mut map = Vec::with_capacity(self.d());
        for (i, part) in self.parts.iter().enumerate() {
            let target = coarser.part_of(part[0]);
            if part.iter().any(|&v| coarser.part_of(v) != target) {
                return Err(Error::InvalidInput(format!("part {i} straddles two coarser parts")));
            }
            map.push(target);
        }
        Ok(map)
    }
}

/// Counts of a set's vertices per part of an ordered partition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexVector(pub Vec<usize>);

impl IndexVector {
    pub fn d(&self) -> usize {
        self.0.len()
    }

    /// Total weight, i.e. the size of the underlying set.
    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// Pointwise comparison.
    pub fn le(&self, other: &IndexVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn to_ints(&self) -> Vec<num_bigint::BigInt> {
        self.0.iter().map(|&c| num_bigint::BigInt::from(c)).collect()
    }
}

/// Index vector of an edge; convenience wrapper over `VertexPartition::index_vector`.
pub fn index_vector(p: &VertexPartition, e: &Edge) -> IndexVector {
    p.index_vector(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_cover_and_disjointness() {
        assert!(VertexPartition::new(4, vec![vec![0, 1], vec![2, 3]]).is_ok());
        assert!(VertexPartition::new(4, vec![vec![0, 1], vec![1, 2, 3]]).is_err());
        assert!(VertexPartition::new(4, vec![vec![0, 1], vec![3]]).is_err());
        assert!(VertexPartition::new(4, vec![vec![0, 1, 2, 3], vec![]]).is_err());
    }

    #[test]
    fn index_vectors_count_per_part() {
        let p = VertexPartition::consecutive(&[3, 2, 1]).unwrap();
        assert_eq!(p.index_vector(&[0, 1, 3]), IndexVector(vec![2, 1, 0]));
        assert_eq!(p.index_vector(&[]), IndexVector(vec![0, 0, 0]));
        assert_eq!(p.total_index(), IndexVector(vec![3, 2, 1]));
        assert!(p.is_partite_edge(&[2, 4, 5]));
        assert!(!p.is_partite_edge(&[0, 1]));
    }

    #[test]
    fn refinement_maps_parts() {
        let fine = VertexPartition::new(4, vec![vec![0], vec![1], vec![2, 3]]).unwrap();
        let coarse = VertexPartition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(fine.refinement_map(&coarse).unwrap(), vec![0, 0, 1]);
        assert!(coarse.refinement_map(&fine).is_err());
    }
}
