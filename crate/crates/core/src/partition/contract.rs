use std::collections::BTreeSet;

use super::{PartitionError, PartitionParams};
use crate::scalar::Scalar;
use crate::tseitin::{ChargedGraph, Edge};

/// `G_C`: one vertex per block, one edge per source edge between different
/// blocks. Edge ids and variables are those of the source edge.
#[derive(Debug, Clone)]
pub struct ContractedGraph {
    blocks: Vec<BTreeSet<usize>>,
    block_of: Vec<usize>,
    graph: ChargedGraph,
    source_edge: Vec<usize>,
    source_max_degree: usize,
}

impl ContractedGraph {
    pub fn new(g: &ChargedGraph, blocks: Vec<BTreeSet<usize>>) -> Result<ContractedGraph, PartitionError> {
        let mut block_of = vec![usize::MAX; g.num_vertices()];
        for (i, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(PartitionError::Precondition(format!("block {i} is empty")));
            }
            for &v in b {
                if v >= g.num_vertices() || block_of[v] != usize::MAX {
                    return Err(PartitionError::Precondition(format!(
                        "vertex {v} is unknown or in two blocks"
                    )));
                }
                block_of[v] = i;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(PartitionError::Precondition(format!("vertex {v} is in no block")));
        }
        let mut edges = Vec::new();
        let mut source_edge = Vec::new();
        for (i, e) in g.edges().iter().enumerate() {
            let (a, b) = (block_of[e.u], block_of[e.v]);
            if a != b {
                edges.push(Edge { u: a, v: b, ..*e });
                source_edge.push(i);
            }
        }
        let charge = blocks
            .iter()
            .map(|b| b.iter().fold(false, |acc, &v| acc ^ g.charge(v)))
            .collect();
        Ok(ContractedGraph {
            graph: ChargedGraph::new(charge, edges).expect("source edges are valid"),
            blocks,
            block_of,
            source_edge,
            source_max_degree: g.max_degree(),
        })
    }

    pub fn singletons(g: &ChargedGraph) -> ContractedGraph {
        ContractedGraph::new(g, g.vertices().map(|v| BTreeSet::from([v])).collect()).unwrap()
    }

    pub fn blocks(&self) -> &[BTreeSet<usize>] {
        &self.blocks
    }
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }
    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }
    pub fn graph(&self) -> &ChargedGraph {
        &self.graph
    }
    /// Position in the source graph of contracted edge `i`.
    pub fn source_edge(&self, i: usize) -> usize {
        self.source_edge[i]
    }
    /// `|E(G_C)|`.
    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }
    /// `Δ(G_C)`.
    pub fn max_degree(&self) -> usize {
        self.graph.max_degree()
    }
    /// `Δ` of the source graph.
    pub fn source_max_degree(&self) -> usize {
        self.source_max_degree
    }

    /// `|E(G_C[U])|` for a set of block indices.
    pub fn edges_within(&self, parts: &BTreeSet<usize>) -> usize {
        self.graph
            .edges()
            .iter()
            .filter(|e| parts.contains(&e.u) && parts.contains(&e.v))
            .count()
    }

    /// Source vertices of the given blocks.
    pub fn uncontract(&self, parts: &BTreeSet<usize>) -> BTreeSet<usize> {
        parts.iter().flat_map(|&i| self.blocks[i].iter().copied()).collect()
    }

    /// `(C \ U) ∪ U′`: the remaining blocks keep their order, the new blocks
    /// follow. `new_blocks` must partition the vertices of `parts`.
    pub fn replace(
        &self,
        g: &ChargedGraph,
        parts: &BTreeSet<usize>,
        new_blocks: Vec<BTreeSet<usize>>,
    ) -> Result<ContractedGraph, PartitionError> {
        let covered: BTreeSet<usize> = new_blocks.iter().flatten().copied().collect();
        let total: usize = new_blocks.iter().map(BTreeSet::len).sum();
        if covered != self.uncontract(parts) || total != covered.len() {
            return Err(PartitionError::Precondition(
                "replacement blocks do not partition the replaced vertices".into(),
            ));
        }
        let mut blocks: Vec<BTreeSet<usize>> = (0..self.blocks.len())
            .filter(|i| !parts.contains(i))
            .map(|i| self.blocks[i].clone())
            .collect();
        blocks.extend(new_blocks);
        ContractedGraph::new(g, blocks)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Acceptability {
    /// `|out(V_i)| ≤ Δ′` and `|V_i ∩ S*| ≤ k/2` for every block.
    pub acceptable: bool,
    /// `Δ(G_C) ≤ Δ′`.
    pub max_degree_ok: bool,
    /// `|E(G_C)| ≥ k/4`.
    pub enough_edges: bool,
}

pub fn acceptability<S: Scalar>(
    c: &ContractedGraph,
    s_star: &BTreeSet<usize>,
    p: &PartitionParams<S>,
    k: usize,
) -> Acceptability {
    let dp = p.delta_prime(k, c.source_max_degree());
    let acceptable = c.blocks().iter().enumerate().all(|(i, b)| {
        S::from_count(c.graph().degree(i)) <= dp && 2 * b.intersection(s_star).count() <= k
    });
    Acceptability {
        acceptable,
        max_degree_ok: S::from_count(c.max_degree()) <= dp,
        enough_edges: 4 * c.num_edges() >= k,
    }
}

pub fn is_acceptable<S: Scalar>(c: &ContractedGraph, s_star: &BTreeSet<usize>, p: &PartitionParams<S>, k: usize) -> bool {
    acceptability(c, s_star, p, k).acceptable
}

/// `|E(G_C′)| − (|E(G_C)| − |E(G_C[U])| + M)`, zero when the edge count
/// identity holds.
pub fn eq3_residual(before: &ContractedGraph, parts: &BTreeSet<usize>, after: &ContractedGraph, m: usize) -> i64 {
    after.num_edges() as i64 - (before.num_edges() as i64 - before.edges_within(parts) as i64 + m as i64)
}
