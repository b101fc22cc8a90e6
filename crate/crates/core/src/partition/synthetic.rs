use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PartitionError;
use crate::tseitin::ChargedGraph;

/// Random connected clusters with one pendant edge per cluster vertex,
/// optionally chained by single bridge edges. Pendant vertices come first,
/// so `u` (the cluster vertices) is `clusters·size..2·clusters·size`.
#[derive(Debug, Clone)]
pub struct Clustered {
    pub graph: ChargedGraph,
    pub u: BTreeSet<usize>,
    pub clusters: usize,
    pub size: usize,
}

pub fn clustered_instance(clusters: usize, size: usize, bridged: bool, seed: u64) -> Result<Clustered, PartitionError> {
    if clusters == 0 || size < 2 {
        return Err(PartitionError::Precondition(format!(
            "clustered_instance({clusters}, {size})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = clusters * size;
    let first = |t: usize| total + t * size;
    let mut pairs = Vec::new();
    for t in 0..clusters {
        let base = first(t);
        for j in 1..size {
            let parent = rng.gen_range(0..j);
            pairs.push((base + parent, base + j));
            for i in 0..j {
                if i != parent && rng.gen_bool(0.5) {
                    pairs.push((base + i, base + j));
                }
            }
        }
        if bridged && t + 1 < clusters {
            let a = base + rng.gen_range(0..size);
            let b = first(t + 1) + rng.gen_range(0..size);
            pairs.push((a, b));
        }
    }
    for i in 0..total {
        pairs.push((i, total + i));
    }
    let graph = ChargedGraph::from_pairs(vec![false; 2 * total], &pairs).expect("pairs are valid");
    Ok(Clustered {
        graph,
        u: (total..2 * total).collect(),
        clusters,
        size,
    })
}
