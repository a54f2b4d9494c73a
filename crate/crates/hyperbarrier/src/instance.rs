//! On-disk JSON form of hypergraph instances.
//!
//! The format is `{"n", "k", "edges", "partition"?, "closed", "matching"?,
//! "provenance"?}`. When `closed` is true, `edges` lists only the top-level
//! k-sets and the instance denotes their downward closure; otherwise every
//! level is listed explicitly and an edge's length is its level. The empty
//! edge at level 0 is never listed. Field order and sorted edge sets make
//! serialization byte-stable for fixed input.

use serde::{Deserialize, Serialize};

use crate::constructions::{ConstructionSpec, Generated};
use crate::hypergraph::{downward_closure, Edge, KComplex, KGraph};
use crate::partition::VertexPartition;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub n: usize,
    pub k: usize,
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<usize>>>,
    pub closed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matching: Option<Vec<Edge>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ConstructionSpec>,
}

impl Instance {
    pub fn from_graph(g: &KGraph) -> Instance {
        Instance {
            n: g.n(),
            k: g.k(),
            edges: g.edges().iter().cloned().collect(),
            partition: None,
            closed: true,
            matching: None,
            provenance: None,
        }
    }

    /// Serializes a levelled system, listing only the top level when the
    /// system is exactly the downward closure of its top.
    pub fn from_complex(j: &KComplex) -> Instance {
        let top = j.top();
        if downward_closure(&top) == *j {
            return Instance { closed: true, ..Instance::from_graph(&top) };
        }
        let edges = (1..=j.k()).flat_map(|r| j.level(r).iter().cloned()).collect();
        Instance {
            n: j.n(),
            k: j.k(),
            edges,
            partition: None,
            closed: false,
            matching: None,
            provenance: None,
        }
    }

    pub fn from_generated(out: &Generated, provenance: Option<ConstructionSpec>) -> Instance {
        let mut inst = match out {
            Generated::Complex { complex, .. } => Instance::from_complex(complex),
            Generated::Graph { graph, .. } => Instance::from_graph(graph),
        };
        inst.partition = out.partition().map(|p| p.parts().to_vec());
        inst.provenance = provenance;
        inst
    }

    /// The top-level k-graph. Closed instances must list k-sets only; open
    /// instances may carry lower levels, which are skipped here.
    pub fn to_graph(&self) -> Result<KGraph> {
        if self.closed {
            if let Some(e) = self.edges.iter().find(|e| e.len() != self.k) {
                return Err(Error::InvalidInput(format!(
                    "closed instance lists the non-top edge {e:?}"
                )));
            }
            return KGraph::new(self.n, self.k, self.edges.iter().cloned());
        }
        KGraph::new(self.n, self.k, self.edges.iter().filter(|e| e.len() == self.k).cloned())
    }

    /// The full levelled system: the downward closure of the top level when
    /// `closed`, otherwise exactly the listed levels.
    pub fn to_complex(&self) -> Result<KComplex> {
        if self.closed {
            return Ok(downward_closure(&self.to_graph()?));
        }
        let mut levels: Vec<Vec<Edge>> = vec![Vec::new(); self.k + 1];
        for e in &self.edges {
            if e.len() > self.k {
                return Err(Error::InvalidInput(format!(
                    "edge {e:?} is longer than k = {}",
                    self.k
                )));
            }
            levels[e.len()].push(e.clone());
        }
        KComplex::from_levels(self.n, self.k, levels)
    }

    pub fn to_partition(&self) -> Result<Option<VertexPartition>> {
        match &self.partition {
            None => Ok(None),
            Some(parts) => Ok(Some(VertexPartition::new(self.n, parts.clone())?)),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Instance> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("bad instance JSON: {e}")))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gen_divisibility_barrier, gen_space_barrier, even_first_coordinate};

    #[test]
    fn graph_round_trip_is_exact() {
        let g = KGraph::complete(5, 2);
        let inst = Instance::from_graph(&g);
        assert!(inst.closed);
        assert_eq!(inst.edges.len(), 10);
        let back = Instance::from_json_str(&inst.to_json_string()).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.to_graph().unwrap(), g);
    }

    #[test]
    fn closure_complexes_serialize_top_level_only() {
        let (j, _) = gen_space_barrier(6, 3, 1, 2).unwrap();
        let inst = Instance::from_complex(&j);
        assert!(inst.closed);
        assert!(inst.edges.iter().all(|e| e.len() == 3));
        assert_eq!(inst.edges.len(), 16);
        assert_eq!(inst.to_complex().unwrap(), j);
    }

    #[test]
    fn non_closure_complexes_list_every_level() {
        // Marking everything empties the top level but keeps the singletons,
        // so the system is not the closure of its top.
        let (j, _) = gen_space_barrier(3, 2, 1, 3).unwrap();
        assert!(j.level(2).is_empty());
        assert_eq!(j.level(1).len(), 3);
        let inst = Instance::from_complex(&j);
        assert!(!inst.closed);
        assert_eq!(inst.to_complex().unwrap(), j);
        let round = Instance::from_json_str(&inst.to_json_string()).unwrap();
        assert_eq!(round.to_complex().unwrap(), j);
    }

    #[test]
    fn generated_outputs_carry_partition_and_provenance() {
        let spec = ConstructionSpec::Divisibility {
            part_sizes: vec![3, 3],
            k: 3,
            basis: vec![vec![2, 0], vec![0, 1]],
        };
        let inst = Instance::from_generated(&spec.generate().unwrap(), Some(spec.clone()));
        assert_eq!(inst.partition.as_deref(), Some(&[vec![0, 1, 2], vec![3, 4, 5]][..]));
        assert_eq!(inst.provenance, Some(spec));
        let json = inst.to_json_string();
        assert!(json.contains(r#""family": "divisibility""#));
        let back = Instance::from_json_str(&json).unwrap();
        assert_eq!(back, inst);
        let p = back.to_partition().unwrap().unwrap();
        let (expect, _) = gen_divisibility_barrier(&[3, 3], 3, &even_first_coordinate()).unwrap();
        assert_eq!(back.to_graph().unwrap(), expect);
        assert_eq!(p.d(), 2);
    }

    #[test]
    fn matching_block_survives_round_trip() {
        let mut inst = Instance::from_graph(&KGraph::complete(6, 3));
        inst.matching = Some(vec![vec![0, 1, 2], vec![3, 4, 5]]);
        let back = Instance::from_json_str(&inst.to_json_string()).unwrap();
        assert_eq!(back.matching, inst.matching);
    }

    #[test]
    fn malformed_instances_are_rejected() {
        assert!(Instance::from_json_str("{").is_err());
        let out_of_range = Instance {
            n: 3,
            k: 2,
            edges: vec![vec![0, 7]],
            partition: None,
            closed: true,
            matching: None,
            provenance: None,
        };
        assert!(out_of_range.to_graph().is_err());
        let mixed = Instance {
            n: 4,
            k: 3,
            edges: vec![vec![0, 1], vec![0, 1, 2]],
            partition: None,
            closed: true,
            matching: None,
            provenance: None,
        };
        assert!(mixed.to_graph().is_err());
        let bad_partition = Instance {
            n: 4,
            k: 2,
            edges: vec![],
            partition: Some(vec![vec![0, 1]]),
            closed: true,
            matching: None,
            provenance: None,
        };
        assert!(bad_partition.to_partition().is_err());
    }

    #[test]
    fn serialization_is_byte_stable() {
        let (j, p) = gen_divisibility_barrier(&[3, 3], 3, &even_first_coordinate()).unwrap();
        let mut inst = Instance::from_graph(&j);
        inst.partition = Some(p.parts().to_vec());
        assert_eq!(inst.to_json_string(), inst.to_json_string());
    }
}
