//! Plain digraphs, reachability, and the receiving-partition construction:
//! carve off iterated in-neighbourhoods of high in-degree vertices so that
//! every vertex has a short directed path to its part's receiver.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::{Error, Result};

/// Simple digraph on vertices 0..n. Loops allowed, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<BTreeSet<usize>>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph { n, out: vec![BTreeSet::new(); n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut d = Digraph::new(n);
        for u in 0..n {
            for v in 0..n {
                d.add_edge(u, v);
            }
        }
        d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.out[u].insert(v);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(&v)
    }

    pub fn out_neighbours(&self, u: usize) -> &BTreeSet<usize> {
        &self.out[u]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out[u].len()
    }

    pub fn min_out_degree(&self) -> usize {
        (0..self.n).map(|u| self.out_degree(u)).min().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(BTreeSet::len).sum()
    }

    /// All ordered pairs of distinct vertices present.
    pub fn is_complete(&self) -> bool {
        self.is_complete_on(&(0..self.n).collect::<Vec<_>>())
    }

    pub fn is_complete_on(&self, part: &[usize]) -> bool {
        part.iter()
            .all(|&u| part.iter().all(|&v| u == v || self.has_edge(u, v)))
    }

    /// Shortest directed distance from every vertex to `target` (usize::MAX
    /// when unreachable): a BFS along reversed edges.
    pub fn distances_to(&self, target: usize) -> Vec<usize> {
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for u in 0..self.n {
            for &v in &self.out[u] {
                rev[v].push(u);
            }
        }
        let mut dist = vec![usize::MAX; self.n];
        dist[target] = 0;
        let mut queue = VecDeque::from([target]);
        while let Some(v) = queue.pop_front() {
            for &u in &rev[v] {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// Shortest directed distance from `source` to every vertex.
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.out[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// A shortest directed path from u to v, inclusive of both endpoints.
    pub fn shortest_path(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        let dist = self.distances_to(v);
        if dist[u] == usize::MAX {
            return None;
        }
        let mut path = vec![u];
        let mut cur = u;
        while cur != v {
            // step to the first out-neighbour strictly closer to v
            let next = *self.out[cur]
                .iter()
                .find(|&&w| dist[w] < dist[cur])
                .expect("distance decreases along a shortest path");
            path.push(next);
            cur = next;
        }
        Some(path)
    }

    /// Subdigraph induced on `verts` with vertices relabelled by position;
    /// the returned vector maps new labels back to old ones.
    pub fn induced(&self, verts: &[usize]) -> (Digraph, Vec<usize>) {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let mut d = Digraph::new(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            for &w in &self.out[v] {
                if w < self.n && pos[w] != usize::MAX {
                    d.add_edge(i, pos[w]);
                }
            }
        }
        (d, verts.to_vec())
    }
}

/// Parts with designated receivers: every vertex of a part has a directed
/// path of length at most `path_bound` to the part's receiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceivingPartition {
    pub parts: Vec<Vec<usize>>,
    pub receivers: Vec<usize>,
    pub path_bound: usize,
    /// The size every part is aimed at: min out-degree minus alpha * n.
    pub target_size: BigRational,
    /// How far the smallest part falls short of the target (zero if none do).
    pub shortfall: BigRational,
}

/// Carves the vertex set into parts, each with a receiver reachable from the
/// whole part within `ell` steps: repeatedly pick the residual vertex of
/// maximum residual in-degree, grow its iterated in-neighbourhood until an
/// expansion step gains at most gamma * n vertices, and split that off;
/// leftovers attach to an out-neighbour's part with one extra hop.
pub fn receiving_partition(
    d: &Digraph,
    ell: usize,
    alpha: &BigRational,
) -> Result<ReceivingPartition> {
    if ell < 2 {
        return Err(Error::InvalidInput("path bound must be at least 2".into()));
    }
    if d.n() == 0 {
        return Err(Error::InvalidInput("empty digraph".into()));
    }
    let n = d.n();
    let delta_plus = d.min_out_degree();

    let mut residual: BTreeSet<usize> = (0..n).collect();
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut receivers: Vec<usize> = Vec::new();
    let mut gamma = BigRational::new(BigInt::from(1), BigInt::from(ell as i64 - 1));
    let gamma_n_cap = |g: &BigRational| {
        // largest integer m with m <= g * n
        let gn = g * BigRational::from_integer(BigInt::from(n as i64));
        gn.floor().to_integer()
    };

    while !residual.is_empty() && residual.len() >= delta_plus.max(1) {
        // residual in-degrees
        let mut indeg = vec![0usize; n];
        for &u in &residual {
            for &v in d.out_neighbours(u) {
                if residual.contains(&v) {
                    indeg[v] += 1;
                }
            }
        }
        let &v = residual
            .iter()
            .max_by_key(|&&v| (indeg[v], std::cmp::Reverse(v)))
            .expect("residual nonempty");

        // iterated in-neighbourhoods of v within the residual set, by
        // distance in the full digraph
        let dist = d.distances_to(v);
        let cap = gamma_n_cap(&gamma);
        let level = |j: usize| {
            residual.iter().filter(|&&u| dist[u] <= j).count()
        };
        let j_cap = (BigRational::from_integer(BigInt::from(1))
            / &gamma)
            .floor()
            .to_integer();
        let j_cap = usize::try_from(j_cap.max(BigInt::zero())).unwrap_or(usize::MAX).min(ell - 1);
        let mut j = j_cap;
        for cand in 0..=j_cap {
            let gain = level(cand + 1) as i64 - level(cand) as i64;
            if BigInt::from(gain) <= cap {
                j = cand;
                break;
            }
        }
        let carved: Vec<usize> =
            residual.iter().copied().filter(|&u| dist[u] <= j).collect();
        for u in &carved {
            residual.remove(u);
        }
        parts.push(carved);
        receivers.push(v);
        gamma *= BigRational::from_integer(BigInt::from(2));
    }

    // attach leftovers through one extra hop
    let receiver_dist: Vec<Vec<usize>> =
        receivers.iter().map(|&r| d.distances_to(r)).collect();
    let leftovers: Vec<usize> = residual.into_iter().collect();
    for u in leftovers {
        let mut attached = false;
        'outer: for (pi, part) in parts.iter().enumerate() {
            for &w in d.out_neighbours(u) {
                if part.contains(&w) && receiver_dist[pi][w] < ell {
                    parts[pi].push(u);
                    attached = true;
                    break 'outer;
                }
            }
        }
        if !attached {
            return Err(Error::NotFound(format!(
                "vertex {u} has no out-neighbour in any carved part"
            )));
        }
    }
    for part in parts.iter_mut() {
        part.sort_unstable();
    }

    let target_size = BigRational::from_integer(BigInt::from(delta_plus as i64))
        - alpha * BigRational::from_integer(BigInt::from(n as i64));
    let min_part = parts.iter().map(Vec::len).min().unwrap_or(0);
    let shortfall = (&target_size
        - BigRational::from_integer(BigInt::from(min_part as i64)))
    .max(BigRational::zero());

    Ok(ReceivingPartition { parts, receivers, path_bound: ell, target_size, shortfall })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::rational;
    use rand::{Rng, SeedableRng};

    #[test]
    fn complete_digraph_gives_single_part() {
        let d = Digraph::complete(8);
        let rp = receiving_partition(&d, 4, &rational(1, 4)).unwrap();
        assert_eq!(rp.parts, vec![(0..8).collect::<Vec<_>>()]);
        assert_eq!(rp.receivers.len(), 1);
        assert!(rp.shortfall.is_zero());
    }

    #[test]
    fn two_components_give_two_parts() {
        let mut d = Digraph::new(10);
        for u in 0..5 {
            for v in 0..5 {
                d.add_edge(u, v);
                d.add_edge(u + 5, v + 5);
            }
        }
        let rp = receiving_partition(&d, 4, &rational(1, 10)).unwrap();
        assert_eq!(rp.parts.len(), 2);
        let mut all: Vec<usize> = rp.parts.concat();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        // parts must respect the components
        for part in &rp.parts {
            assert!(part.iter().all(|&v| v < 5) || part.iter().all(|&v| v >= 5));
        }
    }

    #[test]
    fn random_tournament_paths_stay_short() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 30;
        let mut d = Digraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.5) {
                    d.add_edge(u, v);
                } else {
                    d.add_edge(v, u);
                }
            }
        }
        let ell = 10;
        let rp = receiving_partition(&d, ell, &rational(1, 5)).unwrap();
        let mut covered = 0;
        for (part, &rcv) in rp.parts.iter().zip(&rp.receivers) {
            assert!(part.contains(&rcv));
            let dist = d.distances_to(rcv);
            for &u in part {
                assert!(dist[u] <= ell, "vertex {u} too far from receiver {rcv}");
            }
            covered += part.len();
        }
        assert_eq!(covered, n);
    }

    #[test]
    fn shortest_path_endpoints_and_length() {
        let mut d = Digraph::new(4);
        d.add_edge(0, 1);
        d.add_edge(1, 2);
        d.add_edge(2, 3);
        d.add_edge(0, 3);
        let p = d.shortest_path(0, 3).unwrap();
        assert_eq!(p, vec![0, 3]);
        let p = d.shortest_path(1, 3).unwrap();
        assert_eq!(p, vec![1, 2, 3]);
        assert!(d.shortest_path(3, 0).is_none());
    }

    #[test]
    fn induced_subgraph_keeps_labels() {
        let mut d = Digraph::new(5);
        d.add_edge(1, 3);
        d.add_edge(3, 4);
        let (sub, labels) = d.induced(&[1, 3, 4]);
        assert_eq!(labels, vec![1, 3, 4]);
        assert!(sub.has_edge(0, 1));
        assert!(sub.has_edge(1, 2));
        assert_eq!(sub.edge_count(), 2);
    }
}
