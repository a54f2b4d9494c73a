//! Generators for the named barrier families plus seeded random samplers.
//!
//! Each generator is deterministic in its arguments (and seed, where one is
//! taken), so repeated runs produce identical instances. `ConstructionSpec`
//! is the serialized form used by the command-line `gen` interface.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hypergraph::{edge_plus, Edge, KComplex, KGraph};
use crate::lattice::IntegerLattice;
use crate::partition::VertexPartition;
use crate::{Error, Result};

/// Restriction complex over a marked set `S = {0, .., s-1}`: level `i` holds
/// every i-set carrying at most `j` vertices of S. Levels up to `j` are
/// complete; every top edge needs `k - j` vertices outside S, so matchings
/// are capped at `min(n/k, (n-s)/(k-j))` edges.
///
/// Returns the complex together with the marked set.
pub fn gen_space_barrier(n: usize, k: usize, j: usize, s: usize) -> Result<(KComplex, Vec<usize>)> {
    if j == 0 || j >= k {
        return Err(Error::ConstructionInvalid(format!(
            "restriction level j = {j} must satisfy 1 <= j <= k - 1 for k = {k}"
        )));
    }
    if s > n {
        return Err(Error::ConstructionInvalid(format!("marked set size {s} exceeds n = {n}")));
    }
    let levels = (0..=k)
        .map(|r| {
            (0..n)
                .combinations(r)
                .filter(|e| e.iter().filter(|&&v| v < s).count() <= j)
                .collect()
        })
        .collect();
    Ok((KComplex::from_levels(n, k, levels)?, (0..s).collect()))
}

/// Partite variant of [`gen_space_barrier`]: `r` parts of size `n`, levels
/// are the partite i-sets (at most one vertex per part) carrying at most `j`
/// vertices of S, where S takes the `s` lowest-indexed vertices of every
/// part. Needs `r >= k` so that top edges exist at all.
pub fn gen_partite_space_barrier(
    n: usize,
    r: usize,
    k: usize,
    j: usize,
    s: usize,
) -> Result<(KComplex, VertexPartition)> {
    if j == 0 || j >= k {
        return Err(Error::ConstructionInvalid(format!(
            "restriction level j = {j} must satisfy 1 <= j <= k - 1 for k = {k}"
        )));
    }
    if r < k {
        return Err(Error::ConstructionInvalid(format!("{r} parts cannot host partite {k}-sets")));
    }
    if s > n {
        return Err(Error::ConstructionInvalid(format!(
            "marked set size {s} exceeds part size {n}"
        )));
    }
    let partition = VertexPartition::consecutive(&vec![n; r])?;
    // Parts are consecutive blocks, so v lands in S exactly when its offset
    // within its block is below s.
    let in_s = |v: usize| v % n < s;
    let total = r * n;
    let levels = (0..=k)
        .map(|rank| {
            (0..total)
                .combinations(rank)
                .filter(|e| {
                    partition.is_partite_edge(e) && e.iter().filter(|&&v| in_s(v)).count() <= j
                })
                .collect()
        })
        .collect();
    Ok((KComplex::from_levels(total, k, levels)?, partition))
}

/// Graph whose edges are exactly the k-sets with per-part counts inside
/// `lattice`. Since any matching's covered counts are a sum of edge counts,
/// they stay inside the lattice too; the whole vertex set's counts are
/// required to fall outside it, which rules out a perfect matching.
pub fn gen_divisibility_barrier(
    part_sizes: &[usize],
    k: usize,
    lattice: &IntegerLattice,
) -> Result<(KGraph, VertexPartition)> {
    if k == 0 {
        return Err(Error::InvalidInput("edges must have positive arity".into()));
    }
    if lattice.d() != part_sizes.len() {
        return Err(Error::InvalidInput(format!(
            "lattice dimension {} does not match {} parts",
            lattice.d(),
            part_sizes.len()
        )));
    }
    let partition = VertexPartition::consecutive(part_sizes)?;
    if lattice.contains(&partition.total_index().to_ints()) {
        return Err(Error::ConstructionInvalid(
            "whole-vertex-set index vector lies in the lattice; a perfect matching is not excluded"
                .into(),
        ));
    }
    let n = partition.n();
    let edges = (0..n)
        .combinations(k)
        .filter(|e| lattice.contains(&partition.index_vector(e).to_ints()))
        .collect_vec();
    Ok((KGraph::new(n, k, edges)?, partition))
}

/// Rank-2 lattice of the vectors in Z^2 whose first coordinate is even.
pub fn even_first_coordinate() -> IntegerLattice {
    IntegerLattice::from_i64(2, &[&[2, 0], &[0, 1]]).expect("fixed generators are well formed")
}

/// Rank-3 lattice of the vectors in Z^3 whose last two coordinates agree
/// mod 3.
pub fn equal_mod_three() -> IntegerLattice {
    IntegerLattice::from_i64(3, &[&[1, 0, 0], &[0, 1, 1], &[0, 0, 3]])
        .expect("fixed generators are well formed")
}

/// Four-part 3-graph with an odd-sized first part and near-equal sizes.
/// A triple is kept unless it lies inside the first part, meets the first
/// part once alongside a doubled later part, or spreads over the three later
/// parts. Kept triples force every 4-clique to meet the first part evenly,
/// so no tetrahedron packing covers the odd first part exactly.
pub fn gen_pikhurko(n: usize) -> Result<(KGraph, VertexPartition)> {
    if n == 0 || n % 4 != 0 {
        return Err(Error::ConstructionInvalid(format!("n = {n} is not a positive multiple of 4")));
    }
    let m = n / 4;
    // When n/4 is even the first part shrinks by one to stay odd and the
    // second part absorbs the spare vertex.
    let sizes = if m % 2 == 1 { [m, m, m, m] } else { [m - 1, m + 1, m, m] };
    let partition = VertexPartition::consecutive(&sizes)?;
    let edges = (0..n)
        .combinations(3)
        .filter(|e| {
            let ix = &partition.index_vector(e).0;
            let inside_first = ix[0] == 3;
            let first_plus_pair = ix[0] == 1 && ix[1..].contains(&2);
            let spread = ix[1] == 1 && ix[2] == 1 && ix[3] == 1;
            !(inside_first || first_plus_pair || spread)
        })
        .collect_vec();
    Ok((KGraph::new(n, 3, edges)?, partition))
}

/// Seeded k-partite graph with every partite degree at least `delta_star`:
/// each cross-part pair is kept with probability 1/2, then a repair sweep
/// adds the lexicographically least missing pairs until every vertex meets
/// the floor towards every other part. Additions never lower a degree, so
/// one sweep suffices.
pub fn gen_multipartite_hs(
    k: usize,
    n: usize,
    delta_star: usize,
    seed: u64,
) -> Result<(KGraph, VertexPartition)> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 parts, got {k}")));
    }
    if delta_star > n {
        return Err(Error::InvalidInput(format!(
            "partite degree floor {delta_star} exceeds part size {n}"
        )));
    }
    let total = k * n;
    let partition = VertexPartition::consecutive(&vec![n; k])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    for u in 0..total {
        for v in (u + 1)..total {
            if partition.part_of(u) != partition.part_of(v) && rng.gen_bool(0.5) {
                edges.insert(vec![u, v]);
            }
        }
    }
    for u in 0..total {
        for (q, part) in partition.parts().iter().enumerate() {
            if q == partition.part_of(u) {
                continue;
            }
            let mut have = part.iter().filter(|&&v| edges.contains(&pair(u, v))).count();
            for &v in part {
                if have >= delta_star {
                    break;
                }
                if edges.insert(pair(u, v)) {
                    have += 1;
                }
            }
        }
    }
    Ok((KGraph::new(total, 2, edges)?, partition))
}

fn pair(u: usize, v: usize) -> Edge {
    vec![u.min(v), u.max(v)]
}

/// Seeded k-graph patched so that every (k-1)-set lies in at least `t`
/// edges. The base graph keeps each k-set with probability 1/2; the repair
/// sweep visits (k-1)-sets in lexicographic order and inserts the least
/// missing extensions. `t` may not exceed `n - k + 1`, the number of
/// extensions available to a (k-1)-set.
pub fn gen_random_min_codegree(n: usize, k: usize, t: usize, seed: u64) -> Result<KGraph> {
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("arity k = {k} out of range for n = {n}")));
    }
    if t > n - k + 1 {
        return Err(Error::InvalidInput(format!(
            "codegree target {t} exceeds the {} available extensions",
            n - k + 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: BTreeSet<Edge> =
        (0..n).combinations(k).filter(|_| rng.gen_bool(0.5)).collect();
    for base in (0..n).combinations(k - 1) {
        let mut have = (0..n)
            .filter(|&v| !base.contains(&v) && edges.contains(&edge_plus(&base, v)))
            .count();
        for v in 0..n {
            if have >= t {
                break;
            }
            if !base.contains(&v) && edges.insert(edge_plus(&base, v)) {
                have += 1;
            }
        }
    }
    KGraph::new(n, k, edges)
}

/// Serialized description of a generator invocation. The `family` tag picks
/// the generator; the remaining fields are its arguments. Seeds default to 0
/// when omitted.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ConstructionSpec {
    Space {
        n: usize,
        k: usize,
        j: usize,
        s: usize,
    },
    PartiteSpace {
        n: usize,
        r: usize,
        k: usize,
        j: usize,
        s: usize,
    },
    Divisibility {
        part_sizes: Vec<usize>,
        k: usize,
        basis: Vec<Vec<i64>>,
    },
    Pikhurko {
        n: usize,
    },
    MultipartiteHs {
        k: usize,
        n: usize,
        delta_star: usize,
        #[serde(default)]
        seed: u64,
    },
    RandomMinCodegree {
        n: usize,
        k: usize,
        t: usize,
        #[serde(default)]
        seed: u64,
    },
}

/// A generator's output: a full complex or a single uniform graph, with the
/// planted partition when the family defines one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generated {
    Complex { complex: KComplex, partition: Option<VertexPartition> },
    Graph { graph: KGraph, partition: Option<VertexPartition> },
}

impl Generated {
    pub fn n(&self) -> usize {
        match self {
            Generated::Complex { complex, .. } => complex.n(),
            Generated::Graph { graph, .. } => graph.n(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Generated::Complex { complex, .. } => complex.k(),
            Generated::Graph { graph, .. } => graph.k(),
        }
    }

    pub fn partition(&self) -> Option<&VertexPartition> {
        match self {
            Generated::Complex { partition, .. } | Generated::Graph { partition, .. } => {
                partition.as_ref()
            }
        }
    }
}

impl ConstructionSpec {
    pub fn generate(&self) -> Result<Generated> {
        match self {
            ConstructionSpec::Space { n, k, j, s } => {
                let (complex, _marked) = gen_space_barrier(*n, *k, *j, *s)?;
                Ok(Generated::Complex { complex, partition: None })
            }
            ConstructionSpec::PartiteSpace { n, r, k, j, s } => {
                let (complex, partition) = gen_partite_space_barrier(*n, *r, *k, *j, *s)?;
                Ok(Generated::Complex { complex, partition: Some(partition) })
            }
            ConstructionSpec::Divisibility { part_sizes, k, basis } => {
                let rows: Vec<&[i64]> = basis.iter().map(|g| g.as_slice()).collect();
                let lattice = IntegerLattice::from_i64(part_sizes.len(), &rows)?;
                let (graph, partition) = gen_divisibility_barrier(part_sizes, *k, &lattice)?;
                Ok(Generated::Graph { graph, partition: Some(partition) })
            }
            ConstructionSpec::Pikhurko { n } => {
                let (graph, partition) = gen_pikhurko(*n)?;
                Ok(Generated::Graph { graph, partition: Some(partition) })
            }
            ConstructionSpec::MultipartiteHs { k, n, delta_star, seed } => {
                let (graph, partition) = gen_multipartite_hs(*k, *n, *delta_star, *seed)?;
                Ok(Generated::Graph { graph, partition: Some(partition) })
            }
            ConstructionSpec::RandomMinCodegree { n, k, t, seed } => {
                let graph = gen_random_min_codegree(*n, *k, *t, *seed)?;
                Ok(Generated::Graph { graph, partition: None })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::{degree_sequence, partite_degree_sequence, Degree};
    use crate::density::binomial;
    use crate::lattice::edge_lattice;
    use crate::solver::{max_matching, perfect_clique_packing, perfect_matching};
    use num_bigint::BigInt;

    fn finite(seq: &[usize]) -> Vec<Degree> {
        seq.iter().map(|&d| Degree::Finite(d)).collect()
    }

    #[test]
    fn space_barrier_degree_sequence_and_matching_cap() {
        let (j, marked) = gen_space_barrier(6, 3, 1, 2).unwrap();
        assert_eq!(marked, vec![0, 1]);
        assert!(j.is_complex());
        // Every singleton survives; a marked vertex extends only to the four
        // unmarked ones; a pair holding one marked vertex extends to the
        // three unmarked vertices outside it.
        assert_eq!(degree_sequence(&j).0, finite(&[6, 4, 3]));
        assert_eq!(max_matching(&j.top()).size(), 2);

        let (wide, _) = gen_space_barrier(9, 3, 2, 7).unwrap();
        assert_eq!(max_matching(&wide.top()).size(), 2);
    }

    #[test]
    fn empty_marked_set_gives_complete_complex() {
        let (j, marked) = gen_space_barrier(6, 3, 1, 0).unwrap();
        assert!(marked.is_empty());
        for r in 0..=3usize {
            assert_eq!(BigInt::from(j.level(r).len()), binomial(6, r));
        }
    }

    #[test]
    fn space_barrier_rejects_bad_parameters() {
        assert!(gen_space_barrier(6, 3, 0, 2).is_err());
        assert!(gen_space_barrier(6, 3, 3, 2).is_err());
        assert!(gen_space_barrier(6, 3, 1, 7).is_err());
    }

    #[test]
    fn partite_space_barrier_degrees_and_matching_cap() {
        let (j, p) = gen_partite_space_barrier(4, 3, 3, 1, 2).unwrap();
        assert!(j.is_complex());
        assert_eq!(p.parts().len(), 3);
        assert_eq!(partite_degree_sequence(&j, &p).unwrap().0, finite(&[4, 2, 2]));

        // With three marked vertices per part only one disjoint top edge fits.
        let (tight, _) = gen_partite_space_barrier(4, 3, 3, 1, 3).unwrap();
        assert_eq!(max_matching(&tight.top()).size(), 1);
    }

    #[test]
    fn partite_space_barrier_with_no_marks_is_complete_partite() {
        let (j, p) = gen_partite_space_barrier(4, 3, 3, 1, 0).unwrap();
        assert_eq!(j.level(1).len(), 12);
        assert_eq!(j.level(2).len(), 3 * 16);
        assert_eq!(j.level(3).len(), 64);
        for e in j.all_edges() {
            assert!(p.is_partite_edge(e));
        }
    }

    #[test]
    fn partite_space_barrier_needs_enough_parts() {
        assert!(gen_partite_space_barrier(4, 2, 3, 1, 1).is_err());
    }

    #[test]
    fn example_lattices_have_advertised_membership() {
        let even = even_first_coordinate();
        for x in -4i64..=4 {
            for y in -4i64..=4 {
                assert_eq!(even.contains_i64(&[x, y]), x % 2 == 0, "({x},{y})");
            }
        }
        let mod3 = equal_mod_three();
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                for z in -3i64..=3 {
                    assert_eq!(
                        mod3.contains_i64(&[x, y, z]),
                        (y - z).rem_euclid(3) == 0,
                        "({x},{y},{z})"
                    );
                }
            }
        }
    }

    #[test]
    fn divisibility_barrier_filters_by_index() {
        let (g, p) = gen_divisibility_barrier(&[3, 3], 3, &even_first_coordinate()).unwrap();
        assert_eq!(p.parts(), &[vec![0, 1, 2], vec![3, 4, 5]]);
        for e in g.edges() {
            assert_eq!(e.iter().filter(|&&v| v < 3).count() % 2, 0);
        }
        // 0 marked + 3 unmarked, or 2 marked + 1 unmarked.
        assert_eq!(g.len(), 1 + 3 * 3);
        assert_eq!(perfect_matching(&g).unwrap(), None);

        let (h, q) = gen_divisibility_barrier(&[3, 3, 4], 3, &equal_mod_three()).unwrap();
        for e in h.edges() {
            let ix = q.index_vector(e).0;
            assert_eq!(ix[1] % 3, ix[2] % 3);
        }
        assert!(h.len() > 0);
    }

    #[test]
    fn divisibility_barrier_rejects_covered_total_index() {
        // (3,3,3) indexes the whole vertex set inside the lattice, so the
        // construction cannot block a perfect matching.
        let err = gen_divisibility_barrier(&[3, 3, 3], 3, &equal_mod_three()).unwrap_err();
        assert!(matches!(err, Error::ConstructionInvalid(_)));
    }

    #[test]
    fn divisibility_outputs_have_no_perfect_matching_and_contained_lattice() {
        let cases: Vec<(Vec<usize>, usize, IntegerLattice)> = vec![
            (vec![3, 3], 3, even_first_coordinate()),
            (vec![5, 4], 3, even_first_coordinate()),
            (vec![2, 3, 4], 3, equal_mod_three()),
        ];
        for (sizes, k, lattice) in cases {
            let (g, p) = gen_divisibility_barrier(&sizes, k, &lattice).unwrap();
            assert_eq!(perfect_matching(&g).unwrap(), None, "sizes {sizes:?}");
            for row in edge_lattice(&g, &p).unwrap().basis() {
                assert!(lattice.contains(row), "sizes {sizes:?} basis row {row:?}");
            }
        }
    }

    #[test]
    fn pikhurko_codegrees_match_part_sizes() {
        let (g8, p8) = gen_pikhurko(8).unwrap();
        assert_eq!(p8.parts().iter().map(Vec::len).collect_vec(), vec![1, 3, 2, 2]);
        assert_eq!(g8.min_codegree(), 3);

        let (g12, p12) = gen_pikhurko(12).unwrap();
        assert_eq!(p12.parts().iter().map(Vec::len).collect_vec(), vec![3, 3, 3, 3]);
        assert_eq!(g12.min_codegree(), 7);

        assert!(gen_pikhurko(10).is_err());
        assert!(gen_pikhurko(0).is_err());
    }

    #[test]
    fn pikhurko_tetrahedra_meet_first_part_evenly() {
        let (g, p) = gen_pikhurko(8).unwrap();
        let mut tetrahedra = 0usize;
        for x in (0..8).combinations(4) {
            if x.iter().cloned().combinations(3).all(|t| g.contains(&t)) {
                tetrahedra += 1;
                assert_eq!(p.index_vector(&x).0[0] % 2, 0, "clique {x:?}");
            }
        }
        assert!(tetrahedra > 0);
        assert_eq!(perfect_clique_packing(&g, 4).unwrap(), None);
    }

    #[test]
    fn multipartite_repair_reaches_the_degree_floor() {
        let (g, p) = gen_multipartite_hs(3, 3, 3, 0).unwrap();
        assert_eq!(g.len(), 27);
        assert!(perfect_clique_packing(&g, 3).unwrap().is_some());

        let (h, q) = gen_multipartite_hs(2, 4, 3, 5).unwrap();
        for u in 0..q.n() {
            for (idx, part) in q.parts().iter().enumerate() {
                if idx == q.part_of(u) {
                    continue;
                }
                let deg = part.iter().filter(|&&v| h.contains(&pair(u, v))).count();
                assert!(deg >= 3, "vertex {u} towards part {idx}");
            }
        }
        assert!(perfect_matching(&h).unwrap().is_some());
        assert!(g.edges().iter().all(|e| p.part_of(e[0]) != p.part_of(e[1])));

        assert!(gen_multipartite_hs(2, 4, 5, 0).is_err());
    }

    #[test]
    fn random_codegree_repair_reaches_the_target() {
        let g = gen_random_min_codegree(8, 3, 5, 1).unwrap();
        assert!(g.min_codegree() >= 5);

        let complete = gen_random_min_codegree(5, 3, 3, 9).unwrap();
        assert_eq!(BigInt::from(complete.len()), binomial(5, 3));

        assert!(gen_random_min_codegree(8, 3, 7, 0).is_err());
        assert!(gen_random_min_codegree(3, 0, 0, 0).is_err());
    }

    #[test]
    fn seeded_generators_are_deterministic() {
        assert_eq!(
            gen_random_min_codegree(7, 3, 2, 42).unwrap(),
            gen_random_min_codegree(7, 3, 2, 42).unwrap()
        );
        assert_ne!(
            gen_random_min_codegree(7, 3, 0, 1).unwrap(),
            gen_random_min_codegree(7, 3, 0, 2).unwrap()
        );
        assert_eq!(gen_multipartite_hs(3, 4, 1, 7).unwrap(), gen_multipartite_hs(3, 4, 1, 7).unwrap());
        assert_ne!(
            gen_multipartite_hs(3, 4, 1, 7).unwrap().0,
            gen_multipartite_hs(3, 4, 1, 8).unwrap().0
        );
    }

    #[test]
    fn construction_spec_round_trips_and_generates() {
        let specs = vec![
            ConstructionSpec::Space { n: 6, k: 3, j: 1, s: 2 },
            ConstructionSpec::PartiteSpace { n: 4, r: 3, k: 3, j: 1, s: 2 },
            ConstructionSpec::Divisibility {
                part_sizes: vec![3, 3],
                k: 3,
                basis: vec![vec![2, 0], vec![0, 1]],
            },
            ConstructionSpec::Pikhurko { n: 8 },
            ConstructionSpec::MultipartiteHs { k: 2, n: 4, delta_star: 2, seed: 3 },
            ConstructionSpec::RandomMinCodegree { n: 7, k: 3, t: 2, seed: 11 },
        ];
        for spec in specs {
            let json = serde_json::to_string(&spec).unwrap();
            let back: ConstructionSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(back, spec);
            assert_eq!(back.generate().unwrap(), spec.generate().unwrap());
        }

        let tagged: ConstructionSpec =
            serde_json::from_str(r#"{"family":"pikhurko","n":12}"#).unwrap();
        assert_eq!(tagged, ConstructionSpec::Pikhurko { n: 12 });
        let seeded: ConstructionSpec =
            serde_json::from_str(r#"{"family":"random_min_codegree","n":6,"k":3,"t":1}"#).unwrap();
        assert_eq!(seeded, ConstructionSpec::RandomMinCodegree { n: 6, k: 3, t: 1, seed: 0 });
    }

    #[test]
    fn generated_accessors_report_shape() {
        let g = ConstructionSpec::Space { n: 6, k: 3, j: 1, s: 2 }.generate().unwrap();
        assert_eq!((g.n(), g.k()), (6, 3));
        assert!(g.partition().is_none());
        let h = ConstructionSpec::Pikhurko { n: 8 }.generate().unwrap();
        assert_eq!((h.n(), h.k()), (8, 3));
        assert_eq!(h.partition().unwrap().d(), 4);
    }
}
