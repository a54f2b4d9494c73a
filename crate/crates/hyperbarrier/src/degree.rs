//! Degree sequences of k-systems: plain, partite and allocation-constrained.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::ser::{Serialize, Serializer};

use crate::allocation::Allocation;
use crate::hypergraph::{edge_plus, KComplex};
use crate::partition::{IndexVector, VertexPartition};
use crate::{Error, Result};

/// Minimum degree of one level. An empty level has no minimum; that case is
/// kept distinct from zero and compares above every finite value, so vacuous
/// entries satisfy any lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Finite(usize),
    Vacuous,
}

impl Degree {
    pub fn is_vacuous(&self) -> bool {
        matches!(self, Degree::Vacuous)
    }

    /// Satisfies a lower bound; vacuous satisfies all, and any finite degree
    /// satisfies a non-positive bound.
    pub fn at_least(&self, bound: i64) -> bool {
        match self {
            Degree::Vacuous => true,
            Degree::Finite(d) => bound <= 0 || *d as i64 >= bound,
        }
    }
}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Degree::Vacuous, Degree::Vacuous) => Ordering::Equal,
            (Degree::Vacuous, _) => Ordering::Greater,
            (_, Degree::Vacuous) => Ordering::Less,
            (Degree::Finite(a), Degree::Finite(b)) => a.cmp(b),
        }
    }
}

impl std::fmt::Display for Degree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Degree::Finite(d) => write!(f, "{d}"),
            Degree::Vacuous => write!(f, "vacuous"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Degree::Finite(d) => s.serialize_u64(*d as u64),
            Degree::Vacuous => s.serialize_str("vacuous"),
        }
    }
}

/// Entry r is the least number of (r+1)-edges extending an r-edge, for r in 0..k.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct DegreeSequence(pub Vec<Degree>);

impl DegreeSequence {
    /// Pointwise lower-bound check; vacuous entries pass trivially.
    pub fn dominates(&self, bounds: &[i64]) -> bool {
        self.0.len() == bounds.len() && self.0.iter().zip(bounds).all(|(d, &b)| d.at_least(b))
    }
}

impl std::fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// Minimum degrees level by level: entry r is the least, over r-edges e, of
/// the number of (r+1)-edges containing e. Entry 0 counts the 1-edges.
pub fn degree_sequence(j: &KComplex) -> DegreeSequence {
    let mut out = Vec::with_capacity(j.k());
    for r in 0..j.k() {
        if j.level(r).is_empty() {
            out.push(Degree::Vacuous);
            continue;
        }
        let min = j
            .level(r)
            .iter()
            .map(|e| {
                (0..j.n())
                    .filter(|&v| e.binary_search(&v).is_err())
                    .filter(|&v| j.level(r + 1).contains(&edge_plus(e, v)))
                    .count()
            })
            .min()
            .unwrap();
        out.push(Degree::Finite(min));
    }
    DegreeSequence(out)
}

/// Partite minimum degrees: entry j is the least, over j-edges e and parts
/// disjoint from e, of the number of extensions of e into that part. Requires
/// every edge of the system to meet each part at most once.
pub fn partite_degree_sequence(j: &KComplex, p: &VertexPartition) -> Result<DegreeSequence> {
    ensure_partite(j, p)?;
    let mut out = Vec::with_capacity(j.k());
    for r in 0..j.k() {
        let mut min: Option<usize> = None;
        for e in j.level(r) {
            let index = p.index_vector(e);
            for (q, part) in p.parts().iter().enumerate() {
                if index.0[q] > 0 {
                    continue;
                }
                let count = part
                    .iter()
                    .filter(|&&v| j.level(r + 1).contains(&edge_plus(e, v)))
                    .count();
                min = Some(min.map_or(count, |m| m.min(count)));
            }
        }
        out.push(match min {
            Some(m) => Degree::Finite(m),
            None => Degree::Vacuous,
        });
    }
    Ok(DegreeSequence(out))
}

/// Allocation-constrained minimum degrees. For each prefix length j, consider
/// every function f of the allocation: edges whose index vector matches the
/// first j positions of f must extend into class f(j). Entry j is the minimum
/// over all functions and all matching edges.
pub fn f_degree_sequence(
    j: &KComplex,
    p: &VertexPartition,
    f: &Allocation,
) -> Result<DegreeSequence> {
    if p.d() != f.r() {
        return Err(Error::InvalidInput(format!(
            "allocation has {} classes but partition has {} parts",
            f.r(),
            p.d()
        )));
    }
    if j.k() != f.k() {
        return Err(Error::InvalidInput(format!(
            "allocation arity {} does not match system order {}",
            f.k(),
            j.k()
        )));
    }
    // group edges of each level by index vector once
    let mut by_index: Vec<BTreeMap<IndexVector, Vec<&crate::hypergraph::Edge>>> = Vec::new();
    for r in 0..=j.k() {
        let mut map: BTreeMap<IndexVector, Vec<&crate::hypergraph::Edge>> = BTreeMap::new();
        for e in j.level(r) {
            map.entry(p.index_vector(e)).or_default().push(e);
        }
        by_index.push(map);
    }

    let mut out = Vec::with_capacity(j.k());
    for r in 0..j.k() {
        // distinct (prefix index, extension class) pairs over all functions
        let mut pairs = std::collections::BTreeSet::new();
        for func in f.functions().keys() {
            let mut prefix = vec![0usize; f.r()];
            for &q in &func[..r] {
                prefix[q] += 1;
            }
            pairs.insert((IndexVector(prefix), func[r]));
        }
        let mut min: Option<usize> = None;
        for (prefix, class) in pairs {
            let Some(edges) = by_index[r].get(&prefix) else { continue };
            for e in edges {
                let count = p.parts()[class]
                    .iter()
                    .filter(|&&v| e.binary_search(&v).is_err())
                    .filter(|&&v| j.level(r + 1).contains(&edge_plus(e, v)))
                    .count();
                min = Some(min.map_or(count, |m| m.min(count)));
            }
        }
        out.push(match min {
            Some(m) => Degree::Finite(m),
            None => Degree::Vacuous,
        });
    }
    Ok(DegreeSequence(out))
}

/// Checks that every edge of the system meets each part at most once and that
/// the allocation-free levels above k are absent.
fn ensure_partite(j: &KComplex, p: &VertexPartition) -> Result<()> {
    if j.n() != p.n() {
        return Err(Error::InvalidInput("partition is over a different vertex set".into()));
    }
    for r in 1..=j.k() {
        for e in j.level(r) {
            if !p.is_partite_edge(e) {
                return Err(Error::InvalidInput(format!("edge {e:?} meets a part twice")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{clique_complex, downward_closure, KGraph};

    #[test]
    fn vacuous_dominates_everything() {
        assert!(Degree::Vacuous > Degree::Finite(usize::MAX));
        assert!(Degree::Vacuous.at_least(i64::MAX));
        assert!(Degree::Finite(0).at_least(-1));
        assert!(!Degree::Finite(2).at_least(3));
    }

    #[test]
    fn complete_complex_degrees() {
        let j = downward_closure(&KGraph::complete(6, 3));
        assert_eq!(
            degree_sequence(&j),
            DegreeSequence(vec![Degree::Finite(6), Degree::Finite(5), Degree::Finite(4)])
        );
    }

    #[test]
    fn clique_four_complex_of_complete_triple_system() {
        let j = clique_complex(&KGraph::complete(6, 3), 4).unwrap();
        let d = degree_sequence(&j);
        assert_eq!(
            d,
            DegreeSequence(vec![
                Degree::Finite(6),
                Degree::Finite(5),
                Degree::Finite(4),
                Degree::Finite(3)
            ])
        );
    }

    #[test]
    fn empty_top_level_is_vacuous_not_zero() {
        let j = KComplex::from_levels(4, 2, vec![vec![], vec![vec![0], vec![1]]]).unwrap();
        let d = degree_sequence(&j);
        assert_eq!(d.0[0], Degree::Finite(2));
        assert_eq!(d.0[1], Degree::Finite(0));
        let empty_mid = KComplex::from_levels(4, 2, vec![]).unwrap();
        let d = degree_sequence(&empty_mid);
        assert_eq!(d.0[0], Degree::Finite(0));
        assert_eq!(d.0[1], Degree::Vacuous);
    }

    #[test]
    fn partite_degrees_of_complete_partite_closure() {
        // complete tripartite 2-graph with parts of size 2, closed downward
        let p = VertexPartition::consecutive(&[2, 2, 2]).unwrap();
        let edges: Vec<_> = (0..6)
            .flat_map(|u| (u + 1..6).map(move |v| vec![u, v]))
            .filter(|e| p.part_of(e[0]) != p.part_of(e[1]))
            .collect();
        let j = downward_closure(&KGraph::new(6, 2, edges).unwrap());
        let d = partite_degree_sequence(&j, &p).unwrap();
        assert_eq!(d, DegreeSequence(vec![Degree::Finite(2), Degree::Finite(2)]));
    }

    #[test]
    fn partite_rejects_straddling_edges() {
        let p = VertexPartition::consecutive(&[2, 2]).unwrap();
        let j = downward_closure(&KGraph::new(4, 2, vec![vec![0, 1]]).unwrap());
        assert!(partite_degree_sequence(&j, &p).is_err());
    }
}
