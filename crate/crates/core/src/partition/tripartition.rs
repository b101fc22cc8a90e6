use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ContractedGraph, PartitionError};
use crate::tseitin::ChargedGraph;

/// `10·9³` random colorings before the exhaustive fallback.
pub const DEFAULT_TRIALS: usize = 7290;
pub const EXHAUSTIVE_BLOCKS: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tripartition {
    /// Block indices of each part.
    pub parts: [BTreeSet<usize>; 3],
    /// `|E(G_C[U_i])|`.
    pub internal: [usize; 3],
    pub trials: usize,
    pub exhaustive: bool,
}

pub fn tripartition(c: &ContractedGraph, seed: u64) -> Result<Tripartition, PartitionError> {
    tripartition_graph(c.graph(), seed, DEFAULT_TRIALS)
}

fn internal_counts(h: &ChargedGraph, color: &[u8]) -> [usize; 3] {
    let mut k = [0; 3];
    for e in h.edges() {
        if color[e.u] == color[e.v] {
            k[color[e.u] as usize] += 1;
        }
    }
    k
}

/// Three parts each keeping at least `|E(H)|/180` of the edges inside.
/// Requires `|E(H)| ≥ 25·Δ(H)`.
pub fn tripartition_graph(h: &ChargedGraph, seed: u64, trials: usize) -> Result<Tripartition, PartitionError> {
    let (edges, delta) = (h.num_edges(), h.max_degree());
    if edges < 25 * delta {
        return Err(PartitionError::TripartitionPrecondition {
            edges,
            max_degree: delta,
        });
    }
    tripartition_unchecked(h, seed, trials)
}

/// The search alone. Under the edge-count precondition `H` has at least 50
/// vertices, so only this entry point reaches the exhaustive fallback.
pub fn tripartition_unchecked(h: &ChargedGraph, seed: u64, trials: usize) -> Result<Tripartition, PartitionError> {
    let edges = h.num_edges();
    let n = h.num_vertices();
    let good = |k: &[usize; 3]| k.iter().all(|&x| 180 * x >= edges);
    let finish = |color: &[u8], internal: [usize; 3], trials: usize, exhaustive: bool| {
        let mut parts: [BTreeSet<usize>; 3] = Default::default();
        for (v, &c) in color.iter().enumerate() {
            parts[c as usize].insert(v);
        }
        Tripartition {
            parts,
            internal,
            trials,
            exhaustive,
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut color = vec![0u8; n];
    for t in 1..=trials {
        for c in color.iter_mut() {
            *c = rng.gen_range(0..3);
        }
        let k = internal_counts(h, &color);
        if good(&k) {
            return Ok(finish(&color, k, t, false));
        }
    }
    if n <= EXHAUSTIVE_BLOCKS {
        color.iter_mut().for_each(|c| *c = 0);
        loop {
            let k = internal_counts(h, &color);
            if good(&k) {
                return Ok(finish(&color, k, trials, true));
            }
            // next base-3 counter value
            let Some(i) = color.iter().position(|&c| c < 2) else {
                break;
            };
            color[i] += 1;
            color[..i].iter_mut().for_each(|c| *c = 0);
        }
    }
    Err(PartitionError::RetryBudgetExhausted { trials })
}
